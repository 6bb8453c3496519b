#pragma once

#include <limits>

#include "studentmc/data.hpp"

namespace studentmc {

/// Quality summary of one completed-matrix estimate.
struct EvalReport {
  double mse = 0.0;    // squared error per entry
  double nmse = 0.0;   // squared error relative to the truth's energy
  double pred = std::numeric_limits<double>::quiet_NaN();  // unobserved entries only
  int est_rank = 0;
  double runtime_seconds = 0.0;
};

/// Keeps M on the observed positions, zeroes everything else.
Matrix project_omega(const Matrix& m, const Mask& mask);

/// Mean squared residual over the observed entries.
double empirical_risk(const Matrix& m, const Dataset& data);

/// Sum of A_ij^2 * Pi_ij. The uniform overload uses Pi_ij = 1/(rows*cols),
/// equal to the squared Frobenius norm divided by the entry count.
double weighted_frobenius_sq(const Matrix& a);
double weighted_frobenius_sq(const Matrix& a, const Matrix& weights);

double metric_mse(const Matrix& est, const Matrix& truth);
double metric_nmse(const Matrix& est, const Matrix& truth);

/// Squared error averaged over the unobserved entries. Undefined (throws)
/// when the mask is full.
double metric_pred(const Matrix& est, const Matrix& truth, const Mask& mask);

/// Number of singular values above rel_tol times the largest one.
int estimate_rank(const Matrix& m, double rel_tol = 1e-2);

/// All metrics at once; pred is NaN when the mask is full.
EvalReport evaluate_estimate(const Matrix& est, const Matrix& truth,
                             const Mask& mask, double rank_rel_tol = 1e-2);

}  // namespace studentmc
