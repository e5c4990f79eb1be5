#include "unitri/walk.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

#include "unitri/superclass.hpp"

namespace unitri {

const char* walk_kind_name(WalkKind kind) {
  switch (kind) {
    case WalkKind::P: return "P";
    case WalkKind::Q: return "Q";
    case WalkKind::K: return "K";
    case WalkKind::ProductQ: return "productQ";
  }
  return "?";
}

WalkKind walk_kind_from_name(std::string_view name) {
  if (name == "P") return WalkKind::P;
  if (name == "Q") return WalkKind::Q;
  if (name == "K") return WalkKind::K;
  if (name == "productQ") return WalkKind::ProductQ;
  throw std::invalid_argument("unknown walk kind: " + std::string(name));
}

WalkSpec make_walk_spec(WalkKind kind, int n, PrimeModulus p) {
  if ((kind == WalkKind::P || kind == WalkKind::Q) && n < 2)
    throw std::invalid_argument("walk on U_n needs n >= 2");
  if (kind == WalkKind::ProductQ && n < 1)
    throw std::invalid_argument("productQ needs at least one factor");
  if (kind == WalkKind::K) n = 1;
  return WalkSpec{kind, n, p, closest_odd_sqrt(p)};
}

std::uint64_t state_count(const WalkSpec& spec) {
  switch (spec.kind) {
    case WalkKind::P:
    case WalkKind::Q:
      return group_order(spec.n, spec.p);
    case WalkKind::K:
      return static_cast<std::uint64_t>(spec.p.p);
    case WalkKind::ProductQ:
      return pow_u64_checked(static_cast<std::uint64_t>(spec.p.p),
                             static_cast<unsigned>(spec.n));
  }
  return 0;
}

namespace {

// Digit-level arithmetic on encoded states: decode, multiply, encode
// without touching Eigen objects in the hot loops.
struct MatrixIndexOps {
  int n = 0;
  std::int64_t p = 0;
  int digits = 0;
  // cell_id[r][c] for 0-based strictly upper (r, c); -1 elsewhere.
  std::vector<int> cell_id;
  std::vector<std::pair<int, int>> cells;  // 0-based, row-major
  // For each output cell, the (a_cell, b_cell) pairs of the middle terms
  // sum_{r<k<c} a(r,k) b(k,c).
  std::vector<std::vector<std::pair<int, int>>> terms;

  explicit MatrixIndexOps(int n_, std::int64_t p_) : n(n_), p(p_) {
    cell_id.assign(static_cast<std::size_t>(n) * n, -1);
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        cell_id[static_cast<std::size_t>(r) * n + c] =
            static_cast<int>(cells.size());
        cells.emplace_back(r, c);
      }
    digits = static_cast<int>(cells.size());
    terms.resize(cells.size());
    for (int id = 0; id < digits; ++id) {
      auto [r, c] = cells[static_cast<std::size_t>(id)];
      for (int k = r + 1; k < c; ++k)
        terms[static_cast<std::size_t>(id)].emplace_back(
            cell_id[static_cast<std::size_t>(r) * n + k],
            cell_id[static_cast<std::size_t>(k) * n + c]);
    }
  }

  void decode(std::uint64_t idx, std::int64_t* out) const {
    const auto pp = static_cast<std::uint64_t>(p);
    for (int k = 0; k < digits; ++k) {
      out[k] = static_cast<std::int64_t>(idx % pp);
      idx /= pp;
    }
  }

  std::uint64_t encode(const std::int64_t* d) const {
    std::uint64_t idx = 0;
    for (int k = digits - 1; k >= 0; --k)
      idx = idx * static_cast<std::uint64_t>(p) +
            static_cast<std::uint64_t>(d[k]);
    return idx;
  }

  void mul(const std::int64_t* a, const std::int64_t* b,
           std::int64_t* out) const {
    for (int id = 0; id < digits; ++id) {
      std::int64_t acc = a[id] + b[id];
      for (auto [ai, bi] : terms[static_cast<std::size_t>(id)])
        acc += a[ai] * b[bi];
      out[id] = acc % p;
    }
  }
};

std::vector<std::int64_t> torus_decode(std::uint64_t idx, int n,
                                       std::int64_t p) {
  std::vector<std::int64_t> d(static_cast<std::size_t>(n));
  const auto pp = static_cast<std::uint64_t>(p);
  for (int k = 0; k < n; ++k) {
    d[static_cast<std::size_t>(k)] = static_cast<std::int64_t>(idx % pp);
    idx /= pp;
  }
  return d;
}

std::uint64_t torus_encode(const std::vector<std::int64_t>& d,
                           std::int64_t p) {
  std::uint64_t idx = 0;
  for (std::size_t k = d.size(); k-- > 0;)
    idx = idx * static_cast<std::uint64_t>(p) + static_cast<std::uint64_t>(d[k]);
  return idx;
}

void add_support(std::map<std::uint64_t, std::uint64_t>& acc,
                 std::uint64_t index) {
  ++acc[index];
}

WalkKernel finish_kernel(const WalkSpec& spec, std::uint64_t states,
                         std::uint64_t denom,
                         const std::map<std::uint64_t, std::uint64_t>& acc) {
  WalkKernel k(spec);
  k.states = states;
  k.denom = denom;
  std::uint64_t total = 0;
  for (const auto& [idx, num] : acc) {
    k.support.push_back(idx);
    k.num.push_back(num);
    k.prob.push_back(static_cast<double>(num) / static_cast<double>(denom));
    total += num;
  }
  if (total != denom)
    throw std::logic_error("build_kernel: weights do not sum to 1");
  return k;
}

}  // namespace

WalkKernel build_kernel(const WalkSpec& spec) {
  const std::uint64_t states = state_count(spec);
  if (states > state_budget())
    throw CapacityError("build_kernel: state space of size " +
                        std::to_string(states) + " exceeds the budget");
  const std::int64_t p = spec.p.p;
  const std::int64_t a = spec.a;
  std::map<std::uint64_t, std::uint64_t> acc;
  std::uint64_t denom = 1;

  switch (spec.kind) {
    case WalkKind::P: {
      denom = 2 * static_cast<std::uint64_t>(spec.n - 1);
      for (int i = 1; i < spec.n; ++i)
        for (int s : {1, -1})
          add_support(acc, encode_index(UniTriMatrix::elementary(
                               spec.n, spec.p, i, i + 1, s)));
      break;
    }
    case WalkKind::Q: {
      denom = 4 * static_cast<std::uint64_t>(spec.n - 1) *
              pow_u64_checked(static_cast<std::uint64_t>(p),
                              static_cast<unsigned>(spec.n - 2));
      for (int i = 1; i < spec.n; ++i)
        for (std::int64_t x : {std::int64_t{1}, p - 1, a, p - a})
          for (const auto& m : conjugacy_class_elements(i, x, spec.n, spec.p))
            add_support(acc, encode_index(m));
      break;
    }
    case WalkKind::K: {
      denom = 4;
      for (std::int64_t x : {std::int64_t{1}, p - 1, a, p - a})
        add_support(acc, static_cast<std::uint64_t>(x));
      break;
    }
    case WalkKind::ProductQ: {
      denom = 4 * static_cast<std::uint64_t>(spec.n);
      for (int j = 0; j < spec.n; ++j) {
        const std::uint64_t place = pow_u64_checked(
            static_cast<std::uint64_t>(p), static_cast<unsigned>(j));
        for (std::int64_t x : {std::int64_t{1}, p - 1, a, p - a})
          add_support(acc, static_cast<std::uint64_t>(x) * place);
      }
      break;
    }
  }
  return finish_kernel(spec, states, denom, acc);
}

double u128_to_double(Uint128 v) {
  return std::ldexp(
             static_cast<double>(static_cast<std::uint64_t>(v >> 64)), 64) +
         static_cast<double>(static_cast<std::uint64_t>(v));
}

GroupDistribution ExactDistribution::to_distribution() const {
  GroupDistribution d;
  d.values.resize(static_cast<Eigen::Index>(counts.size()));
  const double den = u128_to_double(denom);
  for (std::size_t k = 0; k < counts.size(); ++k)
    d.values[static_cast<Eigen::Index>(k)] = u128_to_double(counts[k]) / den;
  return d;
}

GroupDistribution point_mass(const WalkSpec& spec) {
  const std::uint64_t states = state_count(spec);
  if (states > state_budget())
    throw CapacityError("point_mass: state space exceeds the budget");
  GroupDistribution d;
  d.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(states));
  d.values[0] = 1.0;
  return d;
}

ExactDistribution exact_point_mass(const WalkSpec& spec) {
  const std::uint64_t states = state_count(spec);
  if (states > state_budget())
    throw CapacityError("exact_point_mass: state space exceeds the budget");
  ExactDistribution d;
  d.counts.assign(states, 0);
  d.counts[0] = 1;
  d.denom = 1;
  return d;
}

Convolver::Convolver(WalkKernel kernel, int jobs)
    : kernel_(std::move(kernel)), jobs_(std::max(1, jobs)) {
  const std::uint64_t states = kernel_.states;
  const std::size_t S = kernel_.support.size();
  if (states > state_budget())
    throw CapacityError("Convolver: state space exceeds the budget");
  if (states * S > std::uint64_t{600000000})
    throw CapacityError("Convolver: permutation tables would exceed memory");
  sigma_.resize(static_cast<std::size_t>(states) * S);

  const WalkSpec& spec = kernel_.spec;
  const std::int64_t p = spec.p.p;
  if (spec.kind == WalkKind::K) {
    for (std::uint64_t y = 0; y < states; ++y)
      for (std::size_t j = 0; j < S; ++j) {
        // y * g^{-1} in additive notation is y - g.
        const std::uint64_t g = kernel_.support[j];
        sigma_[y * S + j] = static_cast<std::uint32_t>((y + states - g) % states);
      }
    return;
  }
  if (spec.kind == WalkKind::ProductQ) {
    std::vector<std::vector<std::int64_t>> inv_digits(S);
    for (std::size_t j = 0; j < S; ++j) {
      auto d = torus_decode(kernel_.support[j], spec.n, p);
      for (auto& v : d) v = mod_reduce(-v, p);
      inv_digits[j] = std::move(d);
    }
    std::vector<std::int64_t> yd, tmp(static_cast<std::size_t>(spec.n));
    for (std::uint64_t y = 0; y < states; ++y) {
      yd = torus_decode(y, spec.n, p);
      for (std::size_t j = 0; j < S; ++j) {
        for (int k = 0; k < spec.n; ++k)
          tmp[static_cast<std::size_t>(k)] =
              (yd[static_cast<std::size_t>(k)] +
               inv_digits[j][static_cast<std::size_t>(k)]) % p;
        sigma_[y * S + j] = static_cast<std::uint32_t>(torus_encode(tmp, p));
      }
    }
    return;
  }

  // Matrix walks: tabulate y -> y * g_j^{-1} through digit arithmetic.
  MatrixIndexOps ops(spec.n, p);
  std::vector<std::vector<std::int64_t>> inv_digits(S);
  for (std::size_t j = 0; j < S; ++j) {
    UniTriMatrix g = decode_index(kernel_.support[j], spec.n, spec.p);
    inv_digits[j].resize(static_cast<std::size_t>(ops.digits));
    ops.decode(encode_index(mat_inv(g)), inv_digits[j].data());
  }
  auto fill = [&](std::uint64_t y0, std::uint64_t y1) {
    std::vector<std::int64_t> yd(static_cast<std::size_t>(ops.digits));
    std::vector<std::int64_t> out(static_cast<std::size_t>(ops.digits));
    for (std::uint64_t y = y0; y < y1; ++y) {
      ops.decode(y, yd.data());
      for (std::size_t j = 0; j < S; ++j) {
        ops.mul(yd.data(), inv_digits[j].data(), out.data());
        sigma_[y * S + j] = static_cast<std::uint32_t>(ops.encode(out.data()));
      }
    }
  };
  if (jobs_ == 1 || states < 4096) {
    fill(0, states);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (states + jobs_ - 1) / jobs_;
    for (int w = 0; w < jobs_; ++w) {
      const std::uint64_t y0 = std::min<std::uint64_t>(states, w * chunk);
      const std::uint64_t y1 = std::min<std::uint64_t>(states, y0 + chunk);
      if (y0 < y1) pool.emplace_back(fill, y0, y1);
    }
    for (auto& th : pool) th.join();
  }
}

void Convolver::step(GroupDistribution& d) const {
  const std::size_t S = kernel_.support.size();
  const auto states = static_cast<std::uint64_t>(d.values.size());
  if (states != kernel_.states)
    throw std::invalid_argument("Convolver::step: distribution size mismatch");
  Eigen::VectorXd out(d.values.size());
  const double* src = d.values.data();
  const double* w = kernel_.prob.data();
  const std::uint32_t* sig = sigma_.data();
  auto run = [&](std::uint64_t y0, std::uint64_t y1) {
    for (std::uint64_t y = y0; y < y1; ++y) {
      const std::uint32_t* row = sig + y * S;
      double acc = 0.0;
      for (std::size_t j = 0; j < S; ++j) acc += w[j] * src[row[j]];
      out[static_cast<Eigen::Index>(y)] = acc;
    }
  };
  if (jobs_ == 1 || states < 4096) {
    run(0, states);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (states + jobs_ - 1) / jobs_;
    for (int wk = 0; wk < jobs_; ++wk) {
      const std::uint64_t y0 = std::min<std::uint64_t>(states, wk * chunk);
      const std::uint64_t y1 = std::min<std::uint64_t>(states, y0 + chunk);
      if (y0 < y1) pool.emplace_back(run, y0, y1);
    }
    for (auto& th : pool) th.join();
  }
  d.values.swap(out);
}

void Convolver::step(ExactDistribution& d) const {
  const std::size_t S = kernel_.support.size();
  const auto states = static_cast<std::uint64_t>(d.counts.size());
  if (states != kernel_.states)
    throw std::invalid_argument("Convolver::step: distribution size mismatch");
  const Uint128 max128 = ~Uint128{0};
  if (d.denom > max128 / kernel_.denom)
    throw CapacityError("Convolver::step: exact denominator overflow");
  std::vector<Uint128> out(d.counts.size());
  const Uint128* src = d.counts.data();
  const std::uint64_t* w = kernel_.num.data();
  const std::uint32_t* sig = sigma_.data();
  auto run = [&](std::uint64_t y0, std::uint64_t y1) {
    for (std::uint64_t y = y0; y < y1; ++y) {
      const std::uint32_t* row = sig + y * S;
      Uint128 acc = 0;
      for (std::size_t j = 0; j < S; ++j) acc += w[j] * src[row[j]];
      out[y] = acc;
    }
  };
  if (jobs_ == 1 || states < 4096) {
    run(0, states);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (states + jobs_ - 1) / jobs_;
    for (int wk = 0; wk < jobs_; ++wk) {
      const std::uint64_t y0 = std::min<std::uint64_t>(states, wk * chunk);
      const std::uint64_t y1 = std::min<std::uint64_t>(states, y0 + chunk);
      if (y0 < y1) pool.emplace_back(run, y0, y1);
    }
    for (auto& th : pool) th.join();
  }
  d.counts.swap(out);
  d.denom *= kernel_.denom;
}

GroupDistribution convolve_step(const GroupDistribution& d,
                                const WalkKernel& kernel) {
  GroupDistribution out = d;
  Convolver conv(kernel);
  conv.step(out);
  return out;
}

GroupDistribution exact_distribution(const WalkSpec& spec, std::int64_t t,
                                     int jobs) {
  if (t < 0) throw std::invalid_argument("exact_distribution: t < 0");
  Convolver conv(build_kernel(spec), jobs);
  GroupDistribution d = point_mass(spec);
  for (std::int64_t k = 0; k < t; ++k) conv.step(d);
  return d;
}

ExactDistribution exact_counts(const WalkSpec& spec, std::int64_t t,
                               int jobs) {
  if (t < 0) throw std::invalid_argument("exact_counts: t < 0");
  Convolver conv(build_kernel(spec), jobs);
  ExactDistribution d = exact_point_mass(spec);
  for (std::int64_t k = 0; k < t; ++k) conv.step(d);
  return d;
}

double tv_distance(const GroupDistribution& d) {
  const double mu = 1.0 / static_cast<double>(d.values.size());
  return 0.5 * (d.values.array() - mu).abs().sum();
}

double l2_distance_sq(const GroupDistribution& d) {
  const double mu = 1.0 / static_cast<double>(d.values.size());
  return (d.values.array() - mu).square().sum();
}

double tv_distance(const ExactDistribution& d) {
  // TV = sum |c_g * states - denom| / (2 * denom * states), all exact.
  const Uint128 states = d.counts.size();
  const Uint128 max128 = ~Uint128{0};
  if (states != 0 && d.denom > max128 / states)
    throw CapacityError("tv_distance: exact numerator overflow");
  Uint128 total = 0;
  for (const Uint128& c : d.counts) {
    const Uint128 lhs = c * states;
    total += lhs > d.denom ? lhs - d.denom : d.denom - lhs;
  }
  return u128_to_double(total) /
         (2.0 * u128_to_double(d.denom) * u128_to_double(states));
}

double l2_distance_sq(const ExactDistribution& d) {
  // Each difference is exact in 128-bit; the squares are accumulated in
  // doubles, which is ample for the 1e-12 agreement contract.
  const Uint128 states = d.counts.size();
  const Uint128 max128 = ~Uint128{0};
  if (states != 0 && d.denom > max128 / states)
    throw CapacityError("l2_distance_sq: exact numerator overflow");
  const double scale = u128_to_double(d.denom) * u128_to_double(states);
  double sum = 0.0;
  for (const Uint128& c : d.counts) {
    const Uint128 lhs = c * states;
    const double diff =
        u128_to_double(lhs > d.denom ? lhs - d.denom : d.denom - lhs) / scale;
    sum += diff * diff;
  }
  return sum;
}

std::int64_t mixing_time(const WalkSpec& spec, double eps, int jobs) {
  if (eps <= 0.0 || eps >= 1.0)
    throw std::invalid_argument("mixing_time: eps must be in (0, 1)");
  WalkEvolution ev(spec, /*exact=*/false, jobs);
  const std::int64_t cap = 1000000;
  for (std::int64_t t = 0; t <= cap; ++t) {
    if (ev.tv() < eps) return t;
    ev.advance();
  }
  throw CapacityError("mixing_time: walk did not mix within " +
                      std::to_string(cap) + " steps");
}

WalkEvolution::WalkEvolution(const WalkSpec& spec, bool exact, int jobs)
    : conv_(build_kernel(spec), jobs) {
  if (exact)
    exact_ = exact_point_mass(spec);
  else
    dist_ = point_mass(spec);
}

void WalkEvolution::advance() {
  if (exact_)
    conv_.step(*exact_);
  else
    conv_.step(*dist_);
  ++t_;
}

double WalkEvolution::tv() const {
  return exact_ ? tv_distance(*exact_) : tv_distance(*dist_);
}

double WalkEvolution::l2sq() const {
  return exact_ ? l2_distance_sq(*exact_) : l2_distance_sq(*dist_);
}

GroupDistribution WalkEvolution::distribution() const {
  return exact_ ? exact_->to_distribution() : *dist_;
}

}  // namespace unitri
