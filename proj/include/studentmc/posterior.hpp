#pragma once

#include "studentmc/data.hpp"
#include "studentmc/prior.hpp"

namespace studentmc {

/// The pseudo-posterior exp(-lambda * risk(M)) * prior(M), up to a constant.
struct PosteriorSpec {
  Dataset data;
  PriorConfig prior;
  double lambda = 1.0;  // inverse temperature multiplying the mean risk

  PosteriorSpec() = default;
  PosteriorSpec(Dataset data, PriorConfig prior, double lambda);
};

double log_posterior_unnorm(const PosteriorSpec& spec, const Matrix& m);

/// Ascent gradient of log_posterior_unnorm:
///   (2 lambda / n) P_Omega(Y - M) + grad_log_prior(M).
Matrix grad_log_posterior(const PosteriorSpec& spec, const Matrix& m);

/// Max over entries of |analytic - central difference| / (1 + |analytic|).
double finite_diff_grad_check(const PosteriorSpec& spec, const Matrix& m, double eps);

}  // namespace studentmc
