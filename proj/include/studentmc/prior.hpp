#pragma once

#include "studentmc/data.hpp"

namespace studentmc {

/// Scale of the spectral scaled Student prior
/// pi(M) proportional to det(tau^2 I + M M^T)^{-(p+m+2)/2}.
struct PriorConfig {
  double tau = 1.0;
};

/// Unnormalized log prior via the log-determinant of tau^2 I + M M^T.
double log_prior_logdet(const Matrix& m, const PriorConfig& cfg);

/// Same quantity via singular values: -((p+m+2)/2) * sum_j log(tau^2 + s_j^2),
/// summed over all m eigendirections of the Gram matrix (singular values are
/// zero-padded when the matrix has more rows than columns).
double log_prior_singular(const Matrix& m, const PriorConfig& cfg);

/// Gradient of the log prior: -(p+m+2) (tau^2 I + M M^T)^{-1} M, computed
/// with a symmetric positive definite solve.
Matrix grad_log_prior(const Matrix& m, const PriorConfig& cfg);

struct RidgeOptions {
  int max_iterations = 0;  // 0 = automatic (entry count + 32)
  double tol = 1e-12;      // residual tolerance, relative to max(1, ||M||_F)
};

/// B = (tau^2 I + M M^T)^{-1} M obtained iteratively, as the minimizer of
/// ||I - M^T B||_F^2 + tau^2 ||B||_F^2, without forming the inverse.
/// Conjugate gradients on the normal equations; throws on non-convergence
/// with the residual norm in the message.
Matrix ridge_resolvent(const Matrix& m, const PriorConfig& cfg,
                       const RidgeOptions& options = {});

}  // namespace studentmc
