#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "unitri/superclass.hpp"

namespace unitri {

// Additive character theta(x) = exp(2 pi i x / p).
std::complex<double> theta(std::int64_t x, PrimeModulus p);

// Whether the class C_i(x) meets the character labeled by D in its
// unrestricted region: D may contain the cell (i, i+1) itself but no
// other cell in row i to the right of column i+1 and none in column i+1
// above row i.
bool restricted_region_ok(const SuperClassLabel& label, int i);

// Number of cells of D strictly northwest of the hook at (i, i+1), i.e.
// with row < i and column > i+1.
int boxes_above_right(const SuperClassLabel& label, int i);

// Value of the degree-normalized character at the class C_i(x):
// 0 outside the unrestricted region, otherwise
// p^{-boxes_above_right} * theta(x * phi(i, i+1)) with phi(i, i+1) = 0
// when (i, i+1) is not a cell of D.
std::complex<double> normalized_char_value(const SuperClassLabel& label,
                                           int i, std::int64_t x,
                                           PrimeModulus p);

// Normalized Fourier coefficient of the class-walk kernel:
// (1/(2(n-1))) * sum_i [ok] p^{-|D_i|} (cos(2 pi phi_i/p) +
//                                       cos(2 pi a phi_i/p)).
double q_hat_normalized(const SuperClassLabel& label, PrimeModulus p,
                        std::int64_t a);

// Fourier bound on 4 ||Q^{*t} - u||_tv^2: the sum over nonempty labels of
// p^{-i(D)} q_hat^{2t}.
double upper_bound_rhs(int n, PrimeModulus p, std::int64_t a, std::int64_t t);

// Precomputed (p^{-i(D)}, q_hat) terms for evaluating the bound on a
// whole time range.
class FourierBound {
 public:
  FourierBound(int n, PrimeModulus p, std::int64_t a);
  double rhs(std::int64_t t) const;
  std::uint64_t terms() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
  std::vector<double> qhats_;
};

}  // namespace unitri
