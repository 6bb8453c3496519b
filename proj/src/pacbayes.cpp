#include "studentmc/pacbayes.hpp"

#include <cmath>
#include <stdexcept>

namespace studentmc {

TheoryConstants compute_constants(const NoiseBounds& nb, double c_margin) {
  if (!(nb.sigma > 0.0) || !(nb.xi > 0.0) || !(nb.L > 0.0)) {
    throw std::invalid_argument("NoiseBounds: sigma, xi, L must be positive");
  }
  if (!(c_margin > 0.0)) {
    throw std::invalid_argument("compute_constants: c_margin must be positive");
  }
  TheoryConstants tc;
  tc.c1 = 2.0 * (4.0 * nb.sigma * nb.sigma + 9.0 * nb.L * nb.L);
  tc.c2 = 12.0 * nb.L * (2.0 * nb.xi + 3.0 * nb.L);
  tc.c = tc.c2 + 1.5 * tc.c1 + c_margin;
  const double nan = std::nan("");
  tc.lambda_star = nan;
  tc.alpha = nan;
  tc.beta = nan;
  tc.delta = nan;
  return tc;
}

double lambda_star(long n, const TheoryConstants& tc) {
  if (n < 1) {
    throw std::invalid_argument("lambda_star: n must be at least 1");
  }
  return static_cast<double>(n) / tc.c;
}

AlphaBeta alpha_beta(double lambda, long n, const TheoryConstants& tc) {
  if (!(lambda > 0.0) || n < 1) {
    throw std::invalid_argument("alpha_beta: need lambda > 0 and n >= 1");
  }
  const double ratio = tc.c2 * lambda / static_cast<double>(n);
  if (ratio >= 1.0) {
    throw std::invalid_argument("alpha_beta: c2 * lambda / n >= 1, out-of-regime lambda");
  }
  const double deviation =
      lambda * lambda * tc.c1 / (2.0 * static_cast<double>(n) * (1.0 - ratio));
  return {lambda - deviation, lambda + deviation};
}

TheoryConstants finalize_constants(const TheoryConstants& tc, long n) {
  TheoryConstants out = tc;
  out.lambda_star = lambda_star(n, tc);
  const AlphaBeta ab = alpha_beta(out.lambda_star, n, tc);
  out.alpha = ab.alpha;
  out.beta = ab.beta;
  out.delta = ab.beta / ab.alpha - 1.0;
  return out;
}

double kl_translation_bound(int r, int m, int p, double frob_mbar, double tau) {
  if (r < 1 || m < 1 || p < 1) {
    throw std::invalid_argument("kl_translation_bound: r, m, p must be positive");
  }
  if (!(tau > 0.0) || frob_mbar < 0.0) {
    throw std::invalid_argument("kl_translation_bound: need tau > 0 and frob_mbar >= 0");
  }
  return 2.0 * r * (m + p + 2.0) *
         std::log1p(frob_mbar / (tau * std::sqrt(2.0 * r)));
}

double recommended_tau(int r, int m, int p, long n) {
  if (r < 1 || m < 1 || p < 1 || n < 1) {
    throw std::invalid_argument("recommended_tau: all inputs must be positive");
  }
  return std::sqrt(static_cast<double>(r) * (m + p) /
                   (static_cast<double>(m) * p * static_cast<double>(n)));
}

double oracle_bound_rhs(double approx_err, int r, int m, int p, long n, double eps,
                        const TheoryConstants& tc, double tau) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw std::invalid_argument("oracle_bound_rhs: eps must lie in (0, 1]");
  }
  if (approx_err < 0.0) {
    throw std::invalid_argument("oracle_bound_rhs: approx_err must be nonnegative");
  }
  if (tau <= 0.0) {
    tau = recommended_tau(r, m, p, n);
  }
  const TheoryConstants full = finalize_constants(tc, n);
  if (!(full.alpha > 0.0)) {
    throw std::invalid_argument("oracle_bound_rhs: alpha <= 0, choose a larger c");
  }
  const double mp = static_cast<double>(m) * p;
  const double main_term = (full.beta / full.alpha) * (approx_err + mp * tau * tau);
  const double complexity =
      (4.0 / full.alpha) * r * (m + p + 2.0) *
      std::log1p(std::sqrt(mp) / (tau * std::sqrt(2.0 * r)));
  const double confidence = (2.0 / full.alpha) * std::log(2.0 / eps);
  return main_term + complexity + confidence;
}

}  // namespace studentmc
