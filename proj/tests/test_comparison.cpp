#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "unitri/comparison.hpp"

using namespace unitri;

TEST_CASE("comparison constant is exactly 5 at n = 2, p = 5") {
  auto report = comparison_constant(2, PrimeModulus(5));
  CHECK(report.a == 3);
  REQUIRE(report.rows.size() == 2);
  // Each generator is hit by the length-1 word once and the length-3
  // word three times: load = (1*1 + 3*3)/4, times 1/P(z) = 2.
  for (const auto& row : report.rows) {
    CHECK(row.load_num == 10);
    CHECK(row.load == doctest::Approx(2.5));
    CHECK(row.inv_prob == doctest::Approx(2.0));
    CHECK(row.product == doctest::Approx(5.0));
  }
  CHECK(report.a_num == 5);
  CHECK(report.a_den == 1);
  CHECK(report.A == 5.0);
  CHECK(report.argmax.row == 1);
}

TEST_CASE("comparison constant stays 5 at n = 2, p = 7") {
  auto report = comparison_constant(2, PrimeModulus(7));
  CHECK(report.a == 3);
  CHECK(report.a_num == 5);
  CHECK(report.a_den == 1);
}

TEST_CASE("comparison reports are reduced and consistent") {
  for (auto [n, pv] : {std::pair<int, std::int64_t>{2, 5},
                       {2, 7},
                       {3, 3},
                       {3, 5},
                       {4, 3}}) {
    auto report = comparison_constant(n, PrimeModulus(pv));
    CHECK(report.rows.size() == static_cast<std::size_t>(2 * (n - 1)));
    CHECK(std::gcd(report.a_num, report.a_den) == 1);
    CHECK(report.A ==
          doctest::Approx(static_cast<double>(report.a_num) /
                          static_cast<double>(report.a_den)));
    double best = 0.0;
    for (const auto& row : report.rows) {
      CHECK(row.inv_prob == doctest::Approx(2.0 * (n - 1)));
      best = std::max(best, row.product);
    }
    CHECK(report.A == doctest::Approx(best));
    // Signs are symmetric, so +z and -z rows carry equal loads.
    for (std::size_t k = 0; k + 1 < report.rows.size(); k += 2)
      CHECK(report.rows[k].load_num == report.rows[k + 1].load_num);
  }
}

TEST_CASE("spectral certificate holds where spectra are computable") {
  for (auto [n, pv] : {std::pair<int, std::int64_t>{2, 5},
                       {2, 7},
                       {3, 3},
                       {3, 5}}) {
    auto check = spectral_comparison_check(n, PrimeModulus(pv));
    CHECK(check.ok);
    CHECK(check.min_slack >= -1e-8);
  }
}

TEST_CASE("main bound starts at 2|G| - 1") {
  CHECK(main_bound_rhs(3, PrimeModulus(3), 0) ==
        doctest::Approx(53.0).epsilon(1e-9));
  CHECK(main_bound_rhs(2, PrimeModulus(5), 0) ==
        doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("main bound is non-increasing and dominates the walk") {
  PrimeModulus p(3);
  MainBound bound(3, p);
  WalkEvolution walk(make_walk_spec(WalkKind::P, 3, p));
  double prev = bound.rhs(0);
  for (std::int64_t t = 0; t <= 60; ++t) {
    const double rhs = bound.rhs(t);
    CHECK(rhs <= prev + 1e-9);
    const double tv = walk.tv();
    CHECK(4.0 * tv * tv <= rhs + 1e-9);
    prev = rhs;
    walk.advance();
  }
}

TEST_CASE("incremental and one-shot bounds agree") {
  PrimeModulus p(3);
  MainBound bound(3, p);
  for (std::int64_t t : {0, 1, 5, 17})
    CHECK(bound.rhs(t) ==
          doctest::Approx(main_bound_rhs(3, p, t)).epsilon(1e-12));
}
