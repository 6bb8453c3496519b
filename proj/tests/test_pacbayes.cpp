#include <doctest.h>

#include <cmath>
#include <initializer_list>
#include <stdexcept>

#include "studentmc/pacbayes.hpp"

using namespace studentmc;

TEST_CASE("compute_constants") {
  SUBCASE("unit inputs") {
    const TheoryConstants tc = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);
    CHECK(tc.c1 == 26.0);
    CHECK(tc.c2 == 60.0);
    CHECK(tc.c == 100.0);  // threshold 99 plus margin 1
  }
  SUBCASE("half sigma") {
    const TheoryConstants tc = compute_constants(NoiseBounds{0.5, 1.0, 1.0}, 1.0);
    CHECK(tc.c1 == 20.0);
    CHECK(tc.c2 == 60.0);
  }
  SUBCASE("xi only moves c2") {
    const TheoryConstants base = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);
    const TheoryConstants shifted = compute_constants(NoiseBounds{1.0, 2.0, 1.0}, 1.0);
    CHECK(shifted.c1 == base.c1);
    CHECK(shifted.c2 > base.c2);
  }
}

TEST_CASE("lambda_star") {
  TheoryConstants tc;
  tc.c = 100.0;
  CHECK(lambda_star(100, tc) == doctest::Approx(1.0));
  CHECK(lambda_star(2000, tc) == doctest::Approx(20.0));
  CHECK(lambda_star(4000, tc) > lambda_star(2000, tc));
}

TEST_CASE("alpha_beta") {
  const TheoryConstants tc = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);

  SUBCASE("tiny lambda collapses to lambda") {
    const AlphaBeta ab = alpha_beta(1e-9, 1000, tc);
    CHECK(std::abs(ab.alpha - 1e-9) / 1e-9 < 1e-6);
    CHECK(std::abs(ab.beta - 1e-9) / 1e-9 < 1e-6);
  }
  SUBCASE("at lambda_star the ratio stays below 2") {
    const long n = 1000;
    const double ls = lambda_star(n, tc);
    const AlphaBeta ab = alpha_beta(ls, n, tc);
    CHECK(ab.alpha > 0.0);
    CHECK(ab.beta / ab.alpha > 1.0);
    CHECK(ab.beta / ab.alpha < 2.0);
  }
  SUBCASE("deviation is symmetric") {
    const AlphaBeta ab = alpha_beta(5.0, 1000, tc);
    CHECK(ab.beta - 5.0 == doctest::Approx(5.0 - ab.alpha).epsilon(1e-15));
  }
  SUBCASE("out-of-regime lambda throws") {
    CHECK_THROWS_AS(alpha_beta(20.0, 1000, tc), std::invalid_argument);
  }
}

TEST_CASE("finalize_constants reports delta below one on a parameter grid") {
  int checked = 0;
  for (double sigma : {0.5, 1.0, 2.0}) {
    for (double L : {0.5, 1.0, 3.0}) {
      for (double xi : {0.5, 2.0}) {
        for (long n : {500L, 100000L}) {
          const TheoryConstants tc =
              compute_constants(NoiseBounds{sigma, xi, L}, 1.0);
          const TheoryConstants full = finalize_constants(tc, n);
          CHECK(full.alpha > 0.0);
          CHECK(full.delta > 0.0);
          CHECK(full.delta < 1.0);
          ++checked;
        }
      }
    }
  }
  CHECK(checked == 36);
}

TEST_CASE("kl_translation_bound") {
  CHECK(kl_translation_bound(2, 5, 7, 0.0, 1.0) == 0.0);
  CHECK(kl_translation_bound(1, 1, 1, std::sqrt(2.0), 1.0) ==
        doctest::Approx(8.0 * std::log(2.0)));
  SUBCASE("monotone in the translation norm") {
    double previous = 0.0;
    for (double frob : {0.5, 1.0, 2.0, 4.0}) {
      const double value = kl_translation_bound(3, 10, 12, frob, 0.7);
      CHECK(value > previous);
      previous = value;
    }
  }
}

TEST_CASE("recommended_tau") {
  CHECK(recommended_tau(2, 100, 100, 2000) == doctest::Approx(4.472135955e-3));
  CHECK(recommended_tau(1, 1, 1, 1) == doctest::Approx(std::sqrt(2.0)));
  CHECK(recommended_tau(2, 100, 100, 4000) < recommended_tau(2, 100, 100, 2000));
}

TEST_CASE("oracle_bound_rhs") {
  const TheoryConstants tc = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);

  SUBCASE("positive with no approximation error") {
    CHECK(oracle_bound_rhs(0.0, 2, 100, 100, 2000, 0.05, tc) > 0.0);
  }
  SUBCASE("doubling n decreases the remainder") {
    double previous = oracle_bound_rhs(0.0, 2, 100, 100, 1000, 0.05, tc);
    for (long n : {2000L, 4000L, 8000L}) {
      const double value = oracle_bound_rhs(0.0, 2, 100, 100, n, 0.05, tc);
      CHECK(value < previous);
      previous = value;
    }
  }
  SUBCASE("epsilon enters only through the confidence term") {
    const double at_05 = oracle_bound_rhs(0.0, 2, 50, 60, 5000, 0.05, tc);
    const double at_50 = oracle_bound_rhs(0.0, 2, 50, 60, 5000, 0.5, tc);
    const TheoryConstants full = finalize_constants(tc, 5000);
    const double expected_gap =
        (2.0 / full.alpha) * (std::log(40.0) - std::log(4.0));
    CHECK(at_05 - at_50 == doctest::Approx(expected_gap).epsilon(1e-12));
  }
  SUBCASE("continuous up to the eps = 1 boundary") {
    const double at_1 = oracle_bound_rhs(0.0, 2, 50, 60, 5000, 1.0, tc);
    const double near_1 = oracle_bound_rhs(0.0, 2, 50, 60, 5000, 1.0 - 1e-9, tc);
    CHECK(std::abs(at_1 - near_1) < 1e-6);
  }
  SUBCASE("monotone in rank, approximation error and 1/eps") {
    const double base = oracle_bound_rhs(0.1, 2, 100, 100, 5000, 0.05, tc);
    CHECK(oracle_bound_rhs(0.1, 4, 100, 100, 5000, 0.05, tc) > base);
    CHECK(oracle_bound_rhs(0.3, 2, 100, 100, 5000, 0.05, tc) > base);
    CHECK(oracle_bound_rhs(0.1, 2, 100, 100, 5000, 0.01, tc) > base);
  }
  SUBCASE("uniform-weight consistency: dividing a Frobenius error by mp") {
    // Passing ||A||_F^2 / (mp) as the weighted approximation error is the
    // uniform-sampling specialization; both routes must agree exactly.
    const double frob_sq = 7.3;
    const int m = 40, p = 50;
    const double weighted = frob_sq / (static_cast<double>(m) * p);
    const double a = oracle_bound_rhs(weighted, 2, m, p, 3000, 0.05, tc);
    const double direct =
        oracle_bound_rhs(frob_sq / (static_cast<double>(m) * p), 2, m, p, 3000, 0.05, tc);
    CHECK(a == doctest::Approx(direct).epsilon(1e-15));
  }
  SUBCASE("zero approximation error leaves the remainder structure") {
    const long n = 4000;
    const TheoryConstants full = finalize_constants(tc, n);
    const double tau = recommended_tau(2, 80, 90, n);
    const double expected =
        (full.beta / full.alpha) * (80.0 * 90.0 * tau * tau) +
        (4.0 / full.alpha) * 2.0 * (80.0 + 90.0 + 2.0) *
            std::log1p(std::sqrt(80.0 * 90.0) / (tau * std::sqrt(4.0))) +
        (2.0 / full.alpha) * std::log(2.0 / 0.05);
    CHECK(oracle_bound_rhs(0.0, 2, 80, 90, n, 0.05, tc) ==
          doctest::Approx(expected).epsilon(1e-12));
  }
}
