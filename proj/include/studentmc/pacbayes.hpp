#pragma once

namespace studentmc {

/// Known bounds on the noise and on the target matrix entries.
struct NoiseBounds {
  double sigma = 1.0;  // noise second-moment bound
  double xi = 1.0;     // moment-growth constant
  double L = 1.0;      // sup-norm bound on the target matrix
};

/// Closed-form constants behind the oracle inequality. lambda_star, alpha,
/// beta, delta depend on the sample size and are NaN until finalized.
struct TheoryConstants {
  double c1 = 0.0;
  double c2 = 0.0;
  double c = 0.0;  // chosen above the threshold c2 + 1.5 * c1
  double lambda_star = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double delta = 0.0;
};

/// c1 = 2(4 sigma^2 + 9 L^2), c2 = 12 L (2 xi + 3 L),
/// c = c2 + 1.5 c1 + c_margin.
TheoryConstants compute_constants(const NoiseBounds& nb, double c_margin = 1.0);

/// Optimal inverse temperature n / c.
double lambda_star(long n, const TheoryConstants& tc);

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha/beta = lambda -/+ lambda^2 c1 / (2n (1 - c2 lambda / n)).
/// Throws when c2 * lambda / n >= 1 (out-of-regime lambda).
AlphaBeta alpha_beta(double lambda, long n, const TheoryConstants& tc);

/// Copy of tc with lambda_star, alpha, beta and delta = beta/alpha - 1
/// evaluated at the given sample size.
TheoryConstants finalize_constants(const TheoryConstants& tc, long n);

/// 2 r (m + p + 2) log(1 + frob_mbar / (tau sqrt(2 r))).
double kl_translation_bound(int r, int m, int p, double frob_mbar, double tau);

/// sqrt(r (m + p) / (m p n)).
double recommended_tau(int r, int m, int p, long n);

/// Full right-hand side of the oracle inequality at lambda = lambda_star:
///   (beta/alpha)(approx_err + m p tau^2)
///   + (4/alpha) r (m+p+2) log(1 + sqrt(mp) / (tau sqrt(2r)))
///   + (2/alpha) log(2/eps).
/// Pass tau <= 0 to use recommended_tau.
double oracle_bound_rhs(double approx_err, int r, int m, int p, long n, double eps,
                        const TheoryConstants& tc, double tau = 0.0);

}  // namespace studentmc
