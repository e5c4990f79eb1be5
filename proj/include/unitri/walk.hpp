#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "unitri/matrix.hpp"

namespace unitri {

// P: one-step generators I +- E(i, i+1), uniform on 2(n-1) elements.
// Q: union of the conjugacy classes C_i(+-1) and C_i(+-a), uniform with
//    total mass 1/(4(n-1)) per class.
// K: the cycle Z/p with steps +-1, +-a, probability 1/4 each.
// ProductQ: (Z/p)^N with steps +-e_j, +-a e_j, probability 1/(4N) each.
enum class WalkKind { P, Q, K, ProductQ };

const char* walk_kind_name(WalkKind kind);
WalkKind walk_kind_from_name(std::string_view name);

// n is the matrix size for P and Q and the number of factors for
// ProductQ; K ignores it.  a is the closest odd integer to sqrt(p).
struct WalkSpec {
  WalkKind kind;
  int n;
  PrimeModulus p;
  std::int64_t a;
};

WalkSpec make_walk_spec(WalkKind kind, int n, PrimeModulus p);

std::uint64_t state_count(const WalkSpec& spec);

// Step distribution with exact weights num[k]/denom; duplicate elements
// are merged and the support is sorted by state index.
struct WalkKernel {
  explicit WalkKernel(WalkSpec s) : spec(s) {}

  WalkSpec spec;
  std::uint64_t states = 0;
  std::uint64_t denom = 1;
  std::vector<std::uint64_t> support;
  std::vector<std::uint64_t> num;
  std::vector<double> prob;
};

WalkKernel build_kernel(const WalkSpec& spec);

struct GroupDistribution {
  Eigen::VectorXd values;
};

using Uint128 = unsigned __int128;

double u128_to_double(Uint128 v);

// Distribution as integer counts over a common power-of-kernel-denominator
// denominator; convolution on these is exact.
struct ExactDistribution {
  std::vector<Uint128> counts;
  Uint128 denom = 1;

  GroupDistribution to_distribution() const;
};

GroupDistribution point_mass(const WalkSpec& spec);
ExactDistribution exact_point_mass(const WalkSpec& spec);

// Permutation-table convolution engine: sigma[y*S + j] is the index of
// y * g_j^{-1}, so each output cell accumulates its terms in a fixed
// support order and results do not depend on the number of jobs.
class Convolver {
 public:
  explicit Convolver(WalkKernel kernel, int jobs = 1);

  const WalkKernel& kernel() const { return kernel_; }
  void step(GroupDistribution& d) const;
  void step(ExactDistribution& d) const;

 private:
  WalkKernel kernel_;
  int jobs_;
  std::vector<std::uint32_t> sigma_;
};

// One convolution of d by the kernel (transient engine).
GroupDistribution convolve_step(const GroupDistribution& d,
                                const WalkKernel& kernel);

// Dense distribution of the walk after t steps.
GroupDistribution exact_distribution(const WalkSpec& spec, std::int64_t t,
                                     int jobs = 1);
ExactDistribution exact_counts(const WalkSpec& spec, std::int64_t t,
                               int jobs = 1);

// Distances to the uniform distribution.
double tv_distance(const GroupDistribution& d);
double l2_distance_sq(const GroupDistribution& d);
double tv_distance(const ExactDistribution& d);
double l2_distance_sq(const ExactDistribution& d);

// First t with tv < eps.
std::int64_t mixing_time(const WalkSpec& spec, double eps, int jobs = 1);

// Incremental evolution for curves; in exact mode statistics come from
// the integer counts.
class WalkEvolution {
 public:
  WalkEvolution(const WalkSpec& spec, bool exact = false, int jobs = 1);

  std::int64_t t() const { return t_; }
  void advance();
  double tv() const;
  double l2sq() const;
  GroupDistribution distribution() const;

 private:
  Convolver conv_;
  std::int64_t t_ = 0;
  std::optional<GroupDistribution> dist_;
  std::optional<ExactDistribution> exact_;
};

}  // namespace unitri
