#include "unitri/comparison.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "unitri/paths.hpp"
#include "unitri/spectral.hpp"

namespace unitri {

ComparisonReport comparison_constant(int n, PrimeModulus p) {
  if (n < 2) throw std::invalid_argument("comparison_constant: n < 2");
  const WalkSpec spec = make_walk_spec(WalkKind::Q, n, p);
  const WalkKernel kernel = build_kernel(spec);
  const std::int64_t a = spec.a;

  const std::size_t gens = 2 * static_cast<std::size_t>(n - 1);
  std::vector<std::int64_t> load_num(gens, 0);
  for (std::size_t k = 0; k < kernel.support.size(); ++k) {
    const UniTriMatrix m = decode_index(kernel.support[k], n, p);
    int i = 0;
    std::int64_t x = 0;
    for (int j = 1; j < n; ++j)
      if (m(j, j + 1) != 0) {
        i = j;
        x = m(j, j + 1);
        break;
      }
    int sign;
    bool times_a;
    if (x == 1) {
      sign = 1; times_a = false;
    } else if (x == p.p - 1) {
      sign = -1; times_a = false;
    } else if (x == a) {
      sign = 1; times_a = true;
    } else if (x == p.p - a) {
      sign = -1; times_a = true;
    } else {
      throw std::logic_error("comparison_constant: unexpected class value");
    }
    const GeneratorWord word = word_class_element(m, i, sign, times_a);
    const WordStats stats = word_stats(word, n);
    for (std::size_t z = 0; z < gens; ++z)
      load_num[z] += stats.length * stats.counts[z] *
                     static_cast<std::int64_t>(kernel.num[k]);
  }

  ComparisonReport report;
  report.n = n;
  report.p = p.p;
  report.a = a;
  const auto denom = static_cast<std::int64_t>(kernel.denom);
  const double inv_prob = 2.0 * (n - 1);
  std::int64_t best = -1;
  for (std::size_t z = 0; z < gens; ++z) {
    ComparisonRow row;
    row.z = GeneratorStep{static_cast<int>(z / 2) + 1, z % 2 == 0 ? 1 : -1};
    row.load_num = load_num[z];
    row.load = static_cast<double>(load_num[z]) / static_cast<double>(denom);
    row.inv_prob = inv_prob;
    row.product = row.load * inv_prob;
    report.rows.push_back(row);
    if (load_num[z] > best) {
      best = load_num[z];
      report.argmax = row.z;
    }
  }
  // A = 2(n-1) max_z load_num(z) / denom = max_z load_num(z) / (2 p^{n-2}).
  std::int64_t num = best;
  std::int64_t den = denom / (2 * static_cast<std::int64_t>(n - 1));
  const std::int64_t g = std::gcd(num, den);
  report.a_num = num / g;
  report.a_den = den / g;
  report.A = static_cast<double>(report.a_num) /
             static_cast<double>(report.a_den);
  return report;
}

SpectralComparisonCheck spectral_comparison_check(int n, PrimeModulus p,
                                                  double tol) {
  const ComparisonReport report = comparison_constant(n, p);
  const Spectrum sp = transition_spectrum(make_walk_spec(WalkKind::P, n, p));
  const Spectrum sq = transition_spectrum(make_walk_spec(WalkKind::Q, n, p));
  if (sp.values.size() != sq.values.size())
    throw std::logic_error("spectral_comparison_check: size mismatch");
  SpectralComparisonCheck check;
  check.A = report.A;
  check.min_slack = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < sp.values.size(); ++k) {
    const double slack =
        report.A * (1.0 - sp.values[k]) - (1.0 - sq.values[k]);
    check.min_slack = std::min(check.min_slack, slack);
  }
  check.ok = check.min_slack >= -tol;
  return check;
}

MainBound::MainBound(int n, PrimeModulus p)
    : report_(comparison_constant(n, p)),
      evolution_(make_walk_spec(WalkKind::Q, n, p)),
      group_size_(static_cast<double>(group_order(n, p))) {
  l2_cache_.push_back(evolution_.l2sq());
}

double MainBound::rhs(std::int64_t t) {
  if (t < 0) throw std::invalid_argument("MainBound::rhs: t < 0");
  // floor(t / (2A)) with A = a_num / a_den, computed in integers.
  const std::int64_t steps = t * report_.a_den / (2 * report_.a_num);
  while (static_cast<std::int64_t>(l2_cache_.size()) <= steps) {
    evolution_.advance();
    l2_cache_.push_back(evolution_.l2sq());
  }
  const double decay =
      std::exp(-static_cast<double>(t) / report_.A);
  return group_size_ * (decay + l2_cache_[static_cast<std::size_t>(steps)]);
}

double main_bound_rhs(int n, PrimeModulus p, std::int64_t t) {
  MainBound bound(n, p);
  return bound.rhs(t);
}

}  // namespace unitri
