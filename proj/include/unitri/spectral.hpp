#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "unitri/walk.hpp"

namespace unitri {

// Dense spectra are only computed below this many states.
inline constexpr std::uint64_t kSpectralBudget = 2000;

// Eigenvalue of the cycle walk K at frequency x:
// (1/2) cos(2 pi x a / p) + (1/2) cos(2 pi x / p).
double k_eigenvalue(std::int64_t x, PrimeModulus p, std::int64_t a);

// Eigenvalue of the product walk at frequency vector (x_1, ..., x_N):
// (1/2N) sum_j (cos(2 pi x_j a / p) + cos(2 pi x_j / p)).
double product_eigenvalue(const std::vector<std::int64_t>& x, PrimeModulus p,
                          std::int64_t a);

struct Spectrum {
  Eigen::VectorXd values;  // descending
  double max_residual = 0.0;  // max ||T v - lambda v||_2 over eigenpairs
};

// Symmetric transition matrix T(x, y) = sum of kernel weights moving x
// to y.
Eigen::MatrixXd transition_matrix(const WalkKernel& kernel);

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations; sweeps
// run until the off-diagonal Frobenius norm is below 1e-12.
Spectrum jacobi_eigenvalues(Eigen::MatrixXd a);

Spectrum transition_spectrum(const WalkSpec& spec);

// sum over non-top eigenvalues of lambda^{2t}; bounds 4 ||P^t - u||_tv^2.
double eigen_tv_bound(const Spectrum& spectrum, std::int64_t t);

}  // namespace unitri
