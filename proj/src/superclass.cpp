#include "unitri/superclass.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace unitri {

std::vector<UniTriMatrix> conjugacy_class_elements(int i, std::int64_t x,
                                                   int n, PrimeModulus p) {
  if (n < 2 || i < 1 || i >= n)
    throw std::invalid_argument("conjugacy_class_elements: bad (i, n)");
  x = mod_reduce(x, p.p);
  if (x == 0)
    throw std::invalid_argument("conjugacy_class_elements: x must be nonzero");
  const std::int64_t xinv = mod_inverse(x, p.p);

  // Free parameters: column i+1 above row i, and row i right of column
  // i+1; the block northeast of the pivot is determined by them.
  const int na = i - 1, nb = n - i - 1;
  std::vector<std::int64_t> a(na, 0), b(nb, 0);
  std::vector<UniTriMatrix> out;
  out.reserve(pow_u64_checked(static_cast<std::uint64_t>(p.p),
                              static_cast<unsigned>(na + nb)));
  for (;;) {
    UniTriMatrix m(n, p);
    m.set(i, i + 1, x);
    for (int j = 1; j <= na; ++j) m.set(j, i + 1, a[j - 1]);
    for (int k = 1; k <= nb; ++k) m.set(i, i + 1 + k, b[k - 1]);
    for (int j = 1; j <= na; ++j)
      for (int k = 1; k <= nb; ++k)
        m.set(j, i + 1 + k, xinv * a[j - 1] % p.p * b[k - 1]);
    out.push_back(std::move(m));

    // Mixed-radix increment, a_1 fastest.
    int pos = 0;
    const int total = na + nb;
    for (; pos < total; ++pos) {
      std::int64_t& digit = pos < na ? a[pos] : b[pos - na];
      if (++digit < p.p) break;
      digit = 0;
    }
    if (pos == total) break;
  }
  return out;
}

namespace {

void emit_phis(SuperClassLabel& label, std::size_t cell, std::int64_t p,
               const std::function<void(const SuperClassLabel&)>& fn) {
  if (cell == label.cells.size()) {
    fn(label);
    return;
  }
  for (std::int64_t v = 1; v < p; ++v) {
    label.phi[cell] = v;
    emit_phis(label, cell + 1, p, fn);
  }
}

void extend_labels(SuperClassLabel& label,
                   const std::vector<std::pair<int, int>>& cells,
                   std::size_t start, std::int64_t p,
                   const std::function<void(const SuperClassLabel&)>& fn) {
  label.phi.assign(label.cells.size(), 1);
  emit_phis(label, 0, p, fn);
  for (std::size_t k = start; k < cells.size(); ++k) {
    bool attacked = false;
    for (const auto& c : label.cells)
      if (c.first == cells[k].first || c.second == cells[k].second) {
        attacked = true;
        break;
      }
    if (attacked) continue;
    label.cells.push_back(cells[k]);
    extend_labels(label, cells, k + 1, p, fn);
    label.cells.pop_back();
  }
}

}  // namespace

void for_each_label(int n, PrimeModulus p,
                    const std::function<void(const SuperClassLabel&)>& fn) {
  SuperClassLabel label;
  label.n = n;
  extend_labels(label, upper_cells(n), 0, p.p, fn);
}

std::uint64_t count_labels(int n, PrimeModulus p) {
  std::uint64_t count = 0;
  for_each_label(n, p, [&](const SuperClassLabel&) { ++count; });
  return count;
}

std::vector<SuperClassLabel> enumerate_labels(int n, PrimeModulus p) {
  std::vector<SuperClassLabel> out;
  const std::uint64_t budget = state_budget();
  for_each_label(n, p, [&](const SuperClassLabel& label) {
    if (out.size() >= budget)
      throw CapacityError("enumerate_labels: more than " +
                          std::to_string(budget) + " labels");
    out.push_back(label);
  });
  return out;
}

int d_statistic(const SuperClassLabel& label) {
  int d = 0;
  for (const auto& [r, c] : label.cells) d += c - r - 1;
  return d;
}

int i_statistic(const SuperClassLabel& label) {
  int count = 0;
  const auto& cells = label.cells;
  for (std::size_t s = 0; s < cells.size(); ++s)
    for (std::size_t t = 0; t < cells.size(); ++t) {
      if (s == t) continue;
      // (i,j) = cells[s], (k,l) = cells[t]: interleaved iff i < k < j < l.
      if (cells[s].first < cells[t].first && cells[t].first < cells[s].second &&
          cells[s].second < cells[t].second)
        ++count;
    }
  return count;
}

std::uint64_t degree_term(const SuperClassLabel& label, PrimeModulus p) {
  const int e = 2 * d_statistic(label) - i_statistic(label);
  if (e < 0) throw std::logic_error("degree_term: negative exponent");
  return pow_u64_checked(static_cast<std::uint64_t>(p.p),
                         static_cast<unsigned>(e));
}

std::uint64_t degree_identity_sum(int n, PrimeModulus p) {
  std::uint64_t sum = 0;
  for_each_label(n, p, [&](const SuperClassLabel& label) {
    const std::uint64_t term = degree_term(label, p);
    if (sum > UINT64_MAX - term)
      throw CapacityError("degree_identity_sum: overflow");
    sum += term;
  });
  return sum;
}

SuperClassLabel canonical_form(const UniTriMatrix& m) {
  const int n = m.dim();
  const std::int64_t p = m.modulus().p;
  IntMat x = m.raw() - IntMat::Identity(n, n);

  // Row operations may only add lower rows to upper ones and column
  // operations earlier columns to later ones; both preserve the orbit.
  bool changed = true;
  int passes = 0;
  while (changed) {
    changed = false;
    if (++passes > n * n + 10)
      throw std::logic_error("canonical_form: reduction did not stabilize");
    for (int c = 0; c < n; ++c) {
      int r = -1;
      for (int i = c - 1; i >= 0; --i)
        if (x(i, c) != 0) {
          r = i;
          break;
        }
      if (r < 0) continue;
      const std::int64_t inv = mod_inverse(x(r, c), p);
      for (int i = 0; i < r; ++i) {
        if (x(i, c) == 0) continue;
        const std::int64_t t = mod_reduce(-x(i, c) * inv, p);
        for (int j = 0; j < n; ++j)
          x(i, j) = mod_reduce(x(i, j) + t * x(r, j), p);
        changed = true;
      }
      for (int j = c + 1; j < n; ++j) {
        if (x(r, j) == 0) continue;
        const std::int64_t t = mod_reduce(-x(r, j) * inv, p);
        for (int i = 0; i < n; ++i)
          x(i, j) = mod_reduce(x(i, j) + t * x(i, c), p);
        changed = true;
      }
    }
  }

  SuperClassLabel label;
  label.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (x(i, j) != 0) {
        label.cells.emplace_back(i + 1, j + 1);
        label.phi.push_back(x(i, j));
      }
  return label;
}

}  // namespace unitri
