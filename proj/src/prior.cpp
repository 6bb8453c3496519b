#include "studentmc/prior.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace studentmc {

namespace {

void require_tau(const PriorConfig& cfg) {
  if (!(cfg.tau > 0.0)) {
    throw std::invalid_argument("PriorConfig: tau must be positive");
  }
}

double exponent(const Matrix& m) {
  return (static_cast<double>(m.rows()) + static_cast<double>(m.cols()) + 2.0) / 2.0;
}

Matrix gram(const Matrix& m, double tau) {
  Matrix s = m * m.transpose();
  s.diagonal().array() += tau * tau;
  return s;
}

}  // namespace

double log_prior_logdet(const Matrix& m, const PriorConfig& cfg) {
  require_tau(cfg);
  Eigen::LLT<Matrix> llt(gram(m, cfg.tau));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("log_prior_logdet: Cholesky factorization failed");
  }
  const double half_logdet = llt.matrixLLT().diagonal().array().log().sum();
  const double value = -exponent(m) * 2.0 * half_logdet;
  if (!std::isfinite(value)) {
    throw std::runtime_error("log_prior_logdet: non-finite result");
  }
  return value;
}

double log_prior_singular(const Matrix& m, const PriorConfig& cfg) {
  require_tau(cfg);
  Eigen::BDCSVD<Matrix> svd(m);
  if (svd.info() != Eigen::Success) {
    throw std::runtime_error("log_prior_singular: SVD failed");
  }
  const Vector& s = svd.singularValues();
  const double tau2 = cfg.tau * cfg.tau;
  double sum = 0.0;
  for (int j = 0; j < s.size(); ++j) {
    sum += std::log(tau2 + s[j] * s[j]);
  }
  // The Gram matrix has m eigenvalues; beyond min(m,p) they equal tau^2.
  const long padding = m.rows() - s.size();
  sum += static_cast<double>(padding) * std::log(tau2);
  return -exponent(m) * sum;
}

Matrix grad_log_prior(const Matrix& m, const PriorConfig& cfg) {
  require_tau(cfg);
  Eigen::LLT<Matrix> llt(gram(m, cfg.tau));
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("grad_log_prior: SPD solve failed");
  }
  return -2.0 * exponent(m) * llt.solve(m);
}

Matrix ridge_resolvent(const Matrix& m, const PriorConfig& cfg,
                       const RidgeOptions& options) {
  require_tau(cfg);
  const double tau2 = cfg.tau * cfg.tau;

  // CG on the SPD operator B -> tau^2 B + M (M^T B), right-hand side M.
  const auto apply = [&](const Matrix& b) -> Matrix {
    return tau2 * b + m * (m.transpose() * b);
  };

  Matrix b = Matrix::Zero(m.rows(), m.cols());
  Matrix residual = m;  // rhs - apply(0)
  Matrix direction = residual;
  double rho = residual.squaredNorm();
  const double threshold = options.tol * std::max(1.0, m.norm());
  const int max_iterations =
      options.max_iterations > 0
          ? options.max_iterations
          : static_cast<int>(std::min<long>(m.rows() * m.cols() + 32, 100000));

  if (std::sqrt(rho) <= threshold) {
    return b;
  }
  for (int it = 0; it < max_iterations; ++it) {
    const Matrix ad = apply(direction);
    const double denom = (direction.array() * ad.array()).sum();
    if (denom <= 0.0) {
      throw std::runtime_error("ridge_resolvent: lost positive definiteness");
    }
    const double alpha = rho / denom;
    b += alpha * direction;
    residual -= alpha * ad;
    const double rho_next = residual.squaredNorm();
    if (std::sqrt(rho_next) <= threshold) {
      return b;
    }
    direction = residual + (rho_next / rho) * direction;
    rho = rho_next;
  }
  throw std::runtime_error("ridge_resolvent: no convergence after " +
                           std::to_string(max_iterations) +
                           " iterations, residual " + std::to_string(std::sqrt(rho)));
}

}  // namespace studentmc
