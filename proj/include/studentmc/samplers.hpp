#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "studentmc/data.hpp"
#include "studentmc/posterior.hpp"

namespace studentmc {

/// Entries beyond this magnitude (or non-finite ones) mark a chain as
/// diverged; the driver halts instead of accumulating an exploding sum.
inline constexpr double kDivergenceGuard = 1e8;

struct LmcConfig {
  double step_size = 1e-4;
  int iterations = 200;   // total steps
  int burnin = 100;       // leading steps excluded from the average
  std::uint64_t seed = 0;
  bool store_iterates = false;  // keep the full stream for diagnostics
};

struct ChainResult {
  Matrix mean;                 // posterior-mean estimate over kept iterates
  double accept_rate = 1.0;    // 1.0 by convention for unadjusted chains
  bool diverged = false;
  int iterates_kept = 0;
  std::vector<Matrix> iterates;  // populated only when store_iterates is set
};

/// One unadjusted Langevin step:
///   M + step_size * grad_log_posterior(M) + sqrt(2 * step_size) * noise.
Matrix lmc_step(const PosteriorSpec& spec, const Matrix& current,
                double step_size, const Matrix& noise);

ChainResult run_lmc(const PosteriorSpec& spec, const LmcConfig& cfg, const Matrix& init);

/// Langevin proposal for the Metropolis-adjusted chain; identical dynamics
/// to lmc_step, returned as a candidate rather than a committed state.
Matrix mala_propose(const PosteriorSpec& spec, const Matrix& current,
                    double step_size, const Matrix& noise);

/// Unnormalized log transition density of the Langevin proposal:
///   -||to - from - h * grad(from)||_F^2 / (4h).
double mala_log_q(const PosteriorSpec& spec, const Matrix& to, const Matrix& from,
                  double step_size);

/// min(1, posterior/proposal ratio), computed fully in log space. Returns 0
/// when the proposal's log density is non-finite.
double mala_accept_prob(const PosteriorSpec& spec, const Matrix& current,
                        const Matrix& proposal, double step_size);

ChainResult run_mala(const PosteriorSpec& spec, const LmcConfig& cfg, const Matrix& init);

/// Low-rank factorization baseline: M = U V^T with K columns, a shared
/// per-column variance with an inverse-gamma(a, b) prior, and conjugate
/// row-wise Gaussian updates. sigma2 is the noise variance of the Gaussian
/// data term; passing n/(2 lambda) makes the sampler target the same
/// tempered pseudo-posterior as the gradient chains. With
/// sample_noise_variance set, sigma2 is instead resampled by conjugacy from
/// an inverse-gamma(noise_shape, noise_scale) prior.
struct GibbsConfig {
  int k = 10;
  double a = 1.0;
  double b = 0.01;
  int iterations = 200;
  int burnin = 100;
  std::uint64_t seed = 0;
  bool sample_noise_variance = false;
  double noise_shape = 1.0;
  double noise_scale = 1.0;
};

struct FactorPair {
  Matrix u;  // rows x k
  Matrix v;  // cols x k
};

ChainResult run_gibbs(const Dataset& data, const GibbsConfig& cfg, double sigma2,
                      const std::optional<FactorPair>& init = std::nullopt);

/// Short factorization run used to initialize gradient chains: the mean of
/// the second half of `iterations` sweeps.
Matrix gibbs_warm_start(const Dataset& data, double sigma2, std::uint64_t seed,
                        int iterations = 200, int k = 10, double a = 1.0,
                        double b = 0.01, bool sample_noise_variance = false);

}  // namespace studentmc
