#include "unitri/supercharacter.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unitri {

std::complex<double> theta(std::int64_t x, PrimeModulus p) {
  const double arg = 2.0 * std::numbers::pi *
                     static_cast<double>(mod_reduce(x, p.p)) /
                     static_cast<double>(p.p);
  return {std::cos(arg), std::sin(arg)};
}

bool restricted_region_ok(const SuperClassLabel& label, int i) {
  for (const auto& [r, c] : label.cells) {
    if (r == i && c > i + 1) return false;
    if (c == i + 1 && r < i) return false;
  }
  return true;
}

int boxes_above_right(const SuperClassLabel& label, int i) {
  int count = 0;
  for (const auto& [r, c] : label.cells)
    if (r < i && c > i + 1) ++count;
  return count;
}

namespace {

std::int64_t superdiag_phi(const SuperClassLabel& label, int i) {
  for (std::size_t k = 0; k < label.cells.size(); ++k)
    if (label.cells[k] == std::pair<int, int>{i, i + 1}) return label.phi[k];
  return 0;
}

}  // namespace

std::complex<double> normalized_char_value(const SuperClassLabel& label,
                                           int i, std::int64_t x,
                                           PrimeModulus p) {
  if (i < 1 || i >= label.n)
    throw std::invalid_argument("normalized_char_value: i out of range");
  if (!restricted_region_ok(label, i)) return {0.0, 0.0};
  const double scale = std::pow(static_cast<double>(p.p),
                                -boxes_above_right(label, i));
  return scale * theta(mod_reduce(x, p.p) * superdiag_phi(label, i), p);
}

double q_hat_normalized(const SuperClassLabel& label, PrimeModulus p,
                        std::int64_t a) {
  const int n = label.n;
  const double w = 2.0 * std::numbers::pi / static_cast<double>(p.p);
  double sum = 0.0;
  for (int i = 1; i < n; ++i) {
    if (!restricted_region_ok(label, i)) continue;
    const double scale =
        std::pow(static_cast<double>(p.p), -boxes_above_right(label, i));
    const auto phi = static_cast<double>(superdiag_phi(label, i));
    sum += scale * (std::cos(w * phi) +
                    std::cos(w * static_cast<double>(
                                     mod_reduce(a, p.p)) * phi));
  }
  return sum / (2.0 * static_cast<double>(n - 1));
}

double upper_bound_rhs(int n, PrimeModulus p, std::int64_t a, std::int64_t t) {
  return FourierBound(n, p, a).rhs(t);
}

FourierBound::FourierBound(int n, PrimeModulus p, std::int64_t a) {
  const std::uint64_t budget = state_budget();
  for_each_label(n, p, [&](const SuperClassLabel& label) {
    if (label.cells.empty()) return;  // trivial character is excluded
    if (weights_.size() >= budget)
      throw CapacityError("FourierBound: label count exceeds the budget");
    weights_.push_back(
        std::pow(static_cast<double>(p.p), -i_statistic(label)));
    qhats_.push_back(q_hat_normalized(label, p, a));
  });
}

double FourierBound::rhs(std::int64_t t) const {
  if (t < 0) throw std::invalid_argument("FourierBound::rhs: t < 0");
  double sum = 0.0;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    const double q = qhats_[k];
    sum += weights_[k] * std::pow(q * q, static_cast<double>(t));
  }
  return sum;
}

}  // namespace unitri
