#include "studentmc/posterior.hpp"

#include <cmath>
#include <stdexcept>

#include "studentmc/metrics.hpp"

namespace studentmc {

PosteriorSpec::PosteriorSpec(Dataset data_in, PriorConfig prior_in, double lambda_in)
    : data(std::move(data_in)), prior(prior_in), lambda(lambda_in) {
  if (!(lambda > 0.0)) {
    throw std::invalid_argument("PosteriorSpec: lambda must be positive");
  }
  if (data.observed() < 1) {
    throw std::invalid_argument("PosteriorSpec: dataset has no observed entries");
  }
}

double log_posterior_unnorm(const PosteriorSpec& spec, const Matrix& m) {
  return -spec.lambda * empirical_risk(m, spec.data) + log_prior_logdet(m, spec.prior);
}

Matrix grad_log_posterior(const PosteriorSpec& spec, const Matrix& m) {
  const Shape& shape = spec.data.shape();
  if (m.rows() != shape.rows || m.cols() != shape.cols) {
    throw std::invalid_argument("grad_log_posterior: shape mismatch");
  }
  Matrix grad = grad_log_prior(m, spec.prior);
  const double scale = 2.0 * spec.lambda / spec.data.observed();
  const auto& entries = spec.data.mask.entries();
  for (int k = 0; k < spec.data.observed(); ++k) {
    const auto& e = entries[k];
    grad(e.row, e.col) += scale * (spec.data.values[k] - m(e.row, e.col));
  }
  return grad;
}

double finite_diff_grad_check(const PosteriorSpec& spec, const Matrix& m, double eps) {
  if (!(eps > 0.0)) {
    throw std::invalid_argument("finite_diff_grad_check: eps must be positive");
  }
  const Matrix analytic = grad_log_posterior(spec, m);
  Matrix probe = m;
  double worst = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      const double original = probe(i, j);
      probe(i, j) = original + eps;
      const double up = log_posterior_unnorm(spec, probe);
      probe(i, j) = original - eps;
      const double down = log_posterior_unnorm(spec, probe);
      probe(i, j) = original;
      const double numeric = (up - down) / (2.0 * eps);
      const double err = std::abs(analytic(i, j) - numeric) / (1.0 + std::abs(analytic(i, j)));
      worst = std::max(worst, err);
    }
  }
  return worst;
}

}  // namespace studentmc
