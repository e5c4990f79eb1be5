#pragma once

#include <cstdint>
#include <vector>

#include "unitri/walk.hpp"
#include "unitri/word.hpp"

namespace unitri {

struct ComparisonRow {
  GeneratorStep z;
  std::int64_t load_num;  // sum over support of |g| N(g, z) weight_num
  double load;            // load_num / kernel denominator
  double inv_prob;        // 1 / P(z) = 2(n-1)
  double product;         // load * inv_prob
};

// The comparison constant A = max_z (1/P(z)) sum_g |g| N(g, z) Q(g),
// where each class element g carries one fixed generator word, |g| is
// its length and N(g, z) the multiplicity of z in it.
struct ComparisonReport {
  int n = 0;
  std::int64_t p = 0;
  std::int64_t a = 0;
  std::vector<ComparisonRow> rows;
  std::int64_t a_num = 0;  // A = a_num / a_den, reduced
  std::int64_t a_den = 1;
  double A = 0.0;
  GeneratorStep argmax{0, 0};
};

ComparisonReport comparison_constant(int n, PrimeModulus p);

// Certificate for 1 - beta_i(Q) <= A (1 - beta_i(P)) on the full sorted
// spectra; min_slack is the worst value of the difference.
struct SpectralComparisonCheck {
  double A = 0.0;
  double min_slack = 0.0;
  bool ok = false;
};

SpectralComparisonCheck spectral_comparison_check(int n, PrimeModulus p,
                                                  double tol = 1e-8);

// |G| (exp(-t/A) + ||Q^{* floor(t/(2A))} - u||_2^2), evaluated with the
// exact rational A for the floor.
double main_bound_rhs(int n, PrimeModulus p, std::int64_t t);

// Evaluates the bound over a time range while advancing the Q walk once.
class MainBound {
 public:
  MainBound(int n, PrimeModulus p);
  const ComparisonReport& report() const { return report_; }
  double rhs(std::int64_t t);

 private:
  ComparisonReport report_;
  WalkEvolution evolution_;
  std::vector<double> l2_cache_;
  double group_size_;
};

}  // namespace unitri
