#include "studentmc/metrics.hpp"

#include <stdexcept>

namespace studentmc {

namespace {

void require_shape(const Matrix& m, const Shape& s, const char* what) {
  if (m.rows() != s.rows || m.cols() != s.cols) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": shape mismatch");
  }
}

}  // namespace

Matrix project_omega(const Matrix& m, const Mask& mask) {
  require_shape(m, mask.shape(), "project_omega");
  Matrix out = Matrix::Zero(m.rows(), m.cols());
  for (const auto& e : mask.entries()) {
    out(e.row, e.col) = m(e.row, e.col);
  }
  return out;
}

double empirical_risk(const Matrix& m, const Dataset& data) {
  require_shape(m, data.shape(), "empirical_risk");
  const int n = data.observed();
  if (n < 1) {
    throw std::invalid_argument("empirical_risk: empty mask");
  }
  double sum = 0.0;
  const auto& entries = data.mask.entries();
  for (int k = 0; k < n; ++k) {
    const double r = data.values[k] - m(entries[k].row, entries[k].col);
    sum += r * r;
  }
  return sum / n;
}

double weighted_frobenius_sq(const Matrix& a) {
  return a.squaredNorm() / static_cast<double>(a.rows() * a.cols());
}

double weighted_frobenius_sq(const Matrix& a, const Matrix& weights) {
  require_same_shape(a, weights, "weighted_frobenius_sq");
  if ((weights.array() < 0.0).any()) {
    throw std::invalid_argument("weighted_frobenius_sq: negative weight");
  }
  return (a.array().square() * weights.array()).sum();
}

double metric_mse(const Matrix& est, const Matrix& truth) {
  require_same_shape(est, truth, "metric_mse");
  return (est - truth).squaredNorm() / static_cast<double>(est.rows() * est.cols());
}

double metric_nmse(const Matrix& est, const Matrix& truth) {
  require_same_shape(est, truth, "metric_nmse");
  const double denom = truth.squaredNorm();
  if (denom == 0.0) {
    throw std::invalid_argument("metric_nmse: truth is identically zero");
  }
  return (est - truth).squaredNorm() / denom;
}

double metric_pred(const Matrix& est, const Matrix& truth, const Mask& mask) {
  require_same_shape(est, truth, "metric_pred");
  require_shape(est, mask.shape(), "metric_pred");
  const long unobserved = mask.shape().entry_count() - mask.size();
  if (unobserved <= 0) {
    throw std::invalid_argument("metric_pred: undefined for a full mask");
  }
  Matrix diff = est - truth;
  for (const auto& e : mask.entries()) {
    diff(e.row, e.col) = 0.0;
  }
  return diff.squaredNorm() / static_cast<double>(unobserved);
}

int estimate_rank(const Matrix& m, double rel_tol) {
  if (rel_tol <= 0.0 || rel_tol >= 1.0) {
    throw std::invalid_argument("estimate_rank: rel_tol must lie in (0,1)");
  }
  Eigen::BDCSVD<Matrix> svd(m);
  const Vector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) {
    return 0;
  }
  const double cutoff = rel_tol * s[0];
  int rank = 0;
  for (int j = 0; j < s.size(); ++j) {
    if (s[j] > cutoff) ++rank;
  }
  return rank;
}

EvalReport evaluate_estimate(const Matrix& est, const Matrix& truth,
                             const Mask& mask, double rank_rel_tol) {
  EvalReport report;
  report.mse = metric_mse(est, truth);
  report.nmse = metric_nmse(est, truth);
  if (!mask.full()) {
    report.pred = metric_pred(est, truth, mask);
  }
  report.est_rank = estimate_rank(est, rank_rel_tol);
  return report;
}

}  // namespace studentmc
