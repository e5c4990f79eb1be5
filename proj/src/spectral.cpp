#include "unitri/spectral.hpp"

#include <Eigen/Jacobi>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace unitri {

double k_eigenvalue(std::int64_t x, PrimeModulus p, std::int64_t a) {
  const double w = 2.0 * std::numbers::pi / static_cast<double>(p.p);
  return 0.5 * std::cos(w * static_cast<double>(mod_reduce(x * a, p.p))) +
         0.5 * std::cos(w * static_cast<double>(mod_reduce(x, p.p)));
}

double product_eigenvalue(const std::vector<std::int64_t>& x, PrimeModulus p,
                          std::int64_t a) {
  if (x.empty())
    throw std::invalid_argument("product_eigenvalue: empty frequency vector");
  double sum = 0.0;
  for (std::int64_t xi : x) sum += k_eigenvalue(xi, p, a);
  return sum / static_cast<double>(x.size());
}

Eigen::MatrixXd transition_matrix(const WalkKernel& kernel) {
  if (kernel.states > kSpectralBudget)
    throw CapacityError("transition_matrix: state space exceeds the dense "
                        "spectral budget");
  const auto n = static_cast<Eigen::Index>(kernel.states);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  // One reusable engine gives x * g for every support element.
  Convolver conv(kernel);
  GroupDistribution row;
  row.values.resize(n);
  // T(x, y) = k(x^{-1} y): column x of the table y -> y g^{-1} lists, for
  // each support element, the state that steps to y.  Equivalently, walk
  // a point mass at x one step.
  for (Eigen::Index x = 0; x < n; ++x) {
    row.values.setZero();
    row.values[x] = 1.0;
    conv.step(row);
    t.col(x) = row.values;
  }
  // The kernel is symmetric under inversion, so T must come out symmetric.
  if ((t - t.transpose()).cwiseAbs().maxCoeff() > 0.0)
    throw std::logic_error("transition_matrix: kernel is not symmetric");
  return t;
}

Spectrum jacobi_eigenvalues(Eigen::MatrixXd a) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n)
    throw std::invalid_argument("jacobi_eigenvalues: matrix is not square");
  const Eigen::MatrixXd original = a;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const double tol = 1e-12;
  const int max_sweeps = 100;
  int sweep = 0;
  while (off_norm() > tol) {
    if (++sweep > max_sweeps)
      throw std::runtime_error("jacobi_eigenvalues: no convergence");
    for (Eigen::Index i = 0; i < n - 1; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        if (a(i, j) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(a(i, i), a(i, j), a(j, j));
        a.applyOnTheLeft(i, j, rot.transpose());
        a.applyOnTheRight(i, j, rot);
        v.applyOnTheRight(i, j, rot);
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index x, Eigen::Index y) { return a(x, x) > a(y, y); });

  Spectrum s;
  s.values.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index idx = order[static_cast<std::size_t>(k)];
    s.values[k] = a(idx, idx);
    const double res =
        (original * v.col(idx) - a(idx, idx) * v.col(idx)).norm();
    s.max_residual = std::max(s.max_residual, res);
  }
  return s;
}

Spectrum transition_spectrum(const WalkSpec& spec) {
  return jacobi_eigenvalues(transition_matrix(build_kernel(spec)));
}

double eigen_tv_bound(const Spectrum& spectrum, std::int64_t t) {
  if (t < 0) throw std::invalid_argument("eigen_tv_bound: t < 0");
  double sum = 0.0;
  for (Eigen::Index k = 1; k < spectrum.values.size(); ++k) {
    const double lam = spectrum.values[k];
    sum += std::pow(lam * lam, static_cast<double>(t));
  }
  return sum;
}

}  // namespace unitri
