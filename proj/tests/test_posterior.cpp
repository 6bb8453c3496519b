#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "studentmc/metrics.hpp"
#include "studentmc/posterior.hpp"

using namespace studentmc;

namespace {

PosteriorSpec scalar_spec(double y, double lambda, double tau) {
  Vector values(1);
  values << y;
  return PosteriorSpec(Dataset(Mask({1, 1}, {{0, 0}}), values), PriorConfig{tau}, lambda);
}

PosteriorSpec random_spec(Shape shape, int n, double lambda, double tau,
                          std::mt19937_64& rng) {
  return PosteriorSpec(oracles::random_dataset(shape, n, rng), PriorConfig{tau}, lambda);
}

}  // namespace

TEST_CASE("log_posterior_unnorm") {
  SUBCASE("both terms vanish") {
    const PosteriorSpec spec = scalar_spec(0.0, 3.0, 1.0);
    CHECK(log_posterior_unnorm(spec, Matrix::Zero(1, 1)) == doctest::Approx(0.0));
  }
  SUBCASE("risk term only") {
    const PosteriorSpec spec = scalar_spec(1.0, 2.0, 1.0);
    CHECK(log_posterior_unnorm(spec, Matrix::Zero(1, 1)) == doctest::Approx(-2.0));
  }
  SUBCASE("equals the sum of its parts") {
    std::mt19937_64 rng(101);
    const PosteriorSpec spec = random_spec({5, 4}, 10, 3.5, 0.9, rng);
    const Matrix m = oracles::random_matrix(5, 4, rng);
    const double combined = log_posterior_unnorm(spec, m);
    const double parts = -spec.lambda * empirical_risk(m, spec.data) +
                         log_prior_logdet(m, spec.prior);
    CHECK(combined == doctest::Approx(parts).epsilon(1e-12));
  }
  SUBCASE("invalid lambda rejected") {
    Vector values(1);
    values << 1.0;
    CHECK_THROWS_AS(
        PosteriorSpec(Dataset(Mask({1, 1}, {{0, 0}}), values), PriorConfig{1.0}, 0.0),
        std::invalid_argument);
  }
}

TEST_CASE("grad_log_posterior") {
  SUBCASE("stationary at the joint optimum") {
    const PosteriorSpec spec = scalar_spec(0.0, 1.0, 1.0);
    CHECK(grad_log_posterior(spec, Matrix::Zero(1, 1)).norm() == 0.0);
  }
  SUBCASE("scalar arithmetic") {
    const PosteriorSpec spec = scalar_spec(2.0, 1.0, 1.0);
    const Matrix g = grad_log_posterior(spec, Matrix::Zero(1, 1));
    CHECK(g(0, 0) == doctest::Approx(4.0));
  }
  SUBCASE("matches finite differences on a 40% observed 6x5 problem") {
    std::mt19937_64 rng(103);
    const PosteriorSpec spec = random_spec({6, 5}, 12, 7.0, 1.0, rng);
    const Matrix m = oracles::random_matrix(6, 5, rng);
    CHECK(finite_diff_grad_check(spec, m, 1e-5) < 1e-5);
  }
  SUBCASE("data term is local to the observed entries") {
    std::mt19937_64 rng(107);
    const PosteriorSpec spec = random_spec({5, 5}, 8, 2.0, 1.0, rng);
    Matrix m = oracles::random_matrix(5, 5, rng);
    const Matrix base_data_term =
        grad_log_posterior(spec, m) - grad_log_prior(m, spec.prior);
    // Perturb an unobserved entry: only the prior part may react.
    MaskEntry unobserved{-1, -1};
    for (int i = 0; i < 5 && unobserved.row < 0; ++i) {
      for (int j = 0; j < 5 && unobserved.row < 0; ++j) {
        bool hit = false;
        for (const auto& e : spec.data.mask.entries()) {
          if (e.row == i && e.col == j) hit = true;
        }
        if (!hit) unobserved = {i, j};
      }
    }
    REQUIRE(unobserved.row >= 0);
    m(unobserved.row, unobserved.col) += 2.5;
    const Matrix moved_data_term =
        grad_log_posterior(spec, m) - grad_log_prior(m, spec.prior);
    CHECK((moved_data_term - base_data_term).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("gradient minus prior part is linear in lambda") {
    std::mt19937_64 rng(109);
    const Dataset data = oracles::random_dataset({4, 6}, 11, rng);
    const Matrix m = oracles::random_matrix(4, 6, rng);
    const PriorConfig prior{1.0};
    const auto data_term = [&](double lambda) {
      const PosteriorSpec spec(data, prior, lambda);
      return Matrix(grad_log_posterior(spec, m) - grad_log_prior(m, prior));
    };
    const Matrix at1 = data_term(1.0);
    const Matrix at2 = data_term(2.0);
    const Matrix at5 = data_term(5.0);
    CHECK((at2 - 2.0 * at1).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((at5 - 5.0 * at1).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("risk term is concave along any segment") {
    std::mt19937_64 rng(113);
    const Dataset data = oracles::random_dataset({5, 5}, 10, rng);
    const Matrix a = oracles::random_matrix(5, 5, rng);
    const Matrix b = oracles::random_matrix(5, 5, rng);
    const double lambda = 3.0;
    auto risk_term = [&](double t) {
      const Matrix point = (1.0 - t) * a + t * b;
      return -lambda * empirical_risk(point, data);
    };
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double second_diff =
          risk_term(t + 0.05) - 2.0 * risk_term(t) + risk_term(t - 0.05);
      CHECK(second_diff <= 1e-12);
    }
  }
}

TEST_CASE("finite_diff_grad_check") {
  SUBCASE("quadratic-only regime is exact to roundoff") {
    // A huge tau freezes the prior's curvature; the risk term is quadratic,
    // so central differences are exact up to cancellation noise.
    std::mt19937_64 rng(127);
    const PosteriorSpec spec = random_spec({6, 5}, 14, 5.0, 1e6, rng);
    const Matrix m = oracles::random_matrix(6, 5, rng);
    CHECK(finite_diff_grad_check(spec, m, 1e-4) < 1e-8);
  }
  SUBCASE("zero data, zero point") {
    const PosteriorSpec spec = scalar_spec(0.0, 1.0, 1.0);
    CHECK(finite_diff_grad_check(spec, Matrix::Zero(1, 1), 1e-5) ==
          doctest::Approx(0.0));
  }
  SUBCASE("standard random case") {
    std::mt19937_64 rng(131);
    const PosteriorSpec spec = random_spec({7, 6}, 18, 10.0, 1.0, rng);
    const Matrix m = oracles::random_matrix(7, 6, rng);
    CHECK(finite_diff_grad_check(spec, m, 1e-5) < 1e-5);
  }
  SUBCASE("gradient consistency across random instances") {
    std::mt19937_64 rng(137);
    for (int trial = 0; trial < 10; ++trial) {
      const int rows = 2 + static_cast<int>(rng() % 6);
      const int cols = 2 + static_cast<int>(rng() % 6);
      const int n = 1 + static_cast<int>(rng() % (rows * cols));
      const double tau = (trial % 2 == 0) ? 0.5 : 2.0;
      const PosteriorSpec spec = random_spec({rows, cols}, n, 1.0 + trial, tau, rng);
      const Matrix m = oracles::random_matrix(rows, cols, rng);
      CHECK(finite_diff_grad_check(spec, m, 1e-5) < 1e-5);
    }
  }
}
