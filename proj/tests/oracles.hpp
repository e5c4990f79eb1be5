#pragma once

// Independent reference implementations used only by the tests: orbit
// closures by breadth-first search, a Fourier-inversion route to the
// cycle-walk distribution, and a seeded Monte Carlo sampler.

#include <cmath>
#include <numbers>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "unitri/matrix.hpp"
#include "unitri/walk.hpp"

namespace oracle {

// Orbit of m under the two-sided action on X = m - I, namely
// X -> g X h for group elements g, h.  BFS closure under the
// superdiagonal transvections equals the full orbit since they
// generate G.
inline std::set<std::uint64_t> two_sided_orbit(const unitri::UniTriMatrix& m) {
  using namespace unitri;
  const int n = m.dim();
  const PrimeModulus p = m.modulus();
  const IntMat id = IntMat::Identity(n, n);
  const auto reduce = [&](std::int64_t v) { return mod_reduce(v, p.p); };
  std::set<std::uint64_t> seen;
  std::queue<std::uint64_t> frontier;
  seen.insert(encode_index(m));
  frontier.push(encode_index(m));
  while (!frontier.empty()) {
    const UniTriMatrix cur = decode_index(frontier.front(), n, p);
    frontier.pop();
    const IntMat x = cur.raw() - id;
    for (int i = 1; i < n; ++i)
      for (int s : {1, -1}) {
        const IntMat g = UniTriMatrix::elementary(n, p, i, i + 1, s).raw();
        for (const IntMat& moved : {IntMat(g * x), IntMat(x * g)}) {
          UniTriMatrix next(n, p);
          next.raw() = (id + moved).unaryExpr(reduce);
          const std::uint64_t idx = encode_index(next);
          if (seen.insert(idx).second) frontier.push(idx);
        }
      }
  }
  return seen;
}

// Orbit of m under conjugation by the generators.
inline std::set<std::uint64_t> conjugation_orbit(const unitri::UniTriMatrix& m) {
  using namespace unitri;
  const int n = m.dim();
  const PrimeModulus p = m.modulus();
  std::set<std::uint64_t> seen;
  std::queue<std::uint64_t> frontier;
  seen.insert(encode_index(m));
  frontier.push(encode_index(m));
  while (!frontier.empty()) {
    const UniTriMatrix cur = decode_index(frontier.front(), n, p);
    frontier.pop();
    for (int i = 1; i < n; ++i)
      for (int s : {1, -1}) {
        const auto g = UniTriMatrix::elementary(n, p, i, i + 1, s);
        const std::uint64_t idx =
            encode_index(mat_mul(mat_inv(g), mat_mul(cur, g)));
        if (seen.insert(idx).second) frontier.push(idx);
      }
  }
  return seen;
}

// Distribution of the cycle walk after t steps by Fourier inversion:
// d_t(x) = (1/p) sum_j lambda_j^t cos(2 pi j x / p).
inline std::vector<double> cycle_distribution_spectral(std::int64_t p,
                                                       std::int64_t a,
                                                       std::int64_t t) {
  std::vector<double> lambda(static_cast<std::size_t>(p));
  const double w = 2.0 * std::numbers::pi / static_cast<double>(p);
  for (std::int64_t j = 0; j < p; ++j)
    lambda[static_cast<std::size_t>(j)] =
        0.5 * std::cos(w * static_cast<double>(j)) +
        0.5 * std::cos(w * static_cast<double>((j * a) % p));
  std::vector<double> d(static_cast<std::size_t>(p), 0.0);
  for (std::int64_t x = 0; x < p; ++x) {
    double acc = 0.0;
    for (std::int64_t j = 0; j < p; ++j)
      acc += std::pow(lambda[static_cast<std::size_t>(j)],
                      static_cast<double>(t)) *
             std::cos(w * static_cast<double>((j * x) % p));
    d[static_cast<std::size_t>(x)] = acc / static_cast<double>(p);
  }
  return d;
}

// Empirical distribution of the walk from `samples` seeded simulations.
inline std::vector<double> monte_carlo_distribution(
    const unitri::WalkSpec& spec, std::int64_t t, std::int64_t samples,
    std::uint64_t seed) {
  using namespace unitri;
  const WalkKernel kernel = build_kernel(spec);
  std::vector<double> freq(kernel.states, 0.0);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(kernel.prob.begin(),
                                               kernel.prob.end());
  const int n = spec.n;
  for (std::int64_t s = 0; s < samples; ++s) {
    UniTriMatrix cur(n, spec.p);
    for (std::int64_t step = 0; step < t; ++step) {
      const auto g =
          decode_index(kernel.support[pick(rng)], n, spec.p);
      cur = mat_mul(cur, g);
    }
    freq[encode_index(cur)] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(samples);
  return freq;
}

}  // namespace oracle
