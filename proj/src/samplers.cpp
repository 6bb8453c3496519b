#include "studentmc/samplers.hpp"

#include <cmath>
#include <stdexcept>

#include "studentmc/rng.hpp"

namespace studentmc {

namespace {

bool within_guard(const Matrix& m) {
  return m.allFinite() && m.cwiseAbs().maxCoeff() <= kDivergenceGuard;
}

void require_chain_config(const LmcConfig& cfg) {
  if (!(cfg.step_size > 0.0)) {
    throw std::invalid_argument("LmcConfig: step size must be positive");
  }
  if (cfg.burnin < 0 || cfg.burnin >= cfg.iterations) {
    throw std::invalid_argument("LmcConfig: need 0 <= burnin < iterations");
  }
}

// Shared state so MALA reuses the current point's density and gradient.
struct PointInfo {
  double log_density;
  Matrix grad;
};

}  // namespace

Matrix lmc_step(const PosteriorSpec& spec, const Matrix& current,
                double step_size, const Matrix& noise) {
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("lmc_step: step size must be positive");
  }
  return current + step_size * grad_log_posterior(spec, current) +
         std::sqrt(2.0 * step_size) * noise;
}

ChainResult run_lmc(const PosteriorSpec& spec, const LmcConfig& cfg, const Matrix& init) {
  require_chain_config(cfg);
  const Shape& shape = spec.data.shape();
  if (init.rows() != shape.rows || init.cols() != shape.cols) {
    throw std::invalid_argument("run_lmc: init shape mismatch");
  }

  std::mt19937_64 rng(cfg.seed);
  Matrix state = init;
  Matrix sum = Matrix::Zero(shape.rows, shape.cols);
  ChainResult result;

  for (int k = 1; k <= cfg.iterations; ++k) {
    const Matrix noise = gaussian_matrix(shape.rows, shape.cols, rng);
    state = state + cfg.step_size * grad_log_posterior(spec, state) +
            std::sqrt(2.0 * cfg.step_size) * noise;
    if (!within_guard(state)) {
      result.diverged = true;
      break;
    }
    if (cfg.store_iterates) {
      result.iterates.push_back(state);
    }
    if (k > cfg.burnin) {
      sum += state;
      ++result.iterates_kept;
    }
  }
  result.mean = result.iterates_kept > 0 ? Matrix(sum / result.iterates_kept) : init;
  result.accept_rate = 1.0;
  return result;
}

Matrix mala_propose(const PosteriorSpec& spec, const Matrix& current,
                    double step_size, const Matrix& noise) {
  return lmc_step(spec, current, step_size, noise);
}

double mala_log_q(const PosteriorSpec& spec, const Matrix& to, const Matrix& from,
                  double step_size) {
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("mala_log_q: step size must be positive");
  }
  const Matrix deviation = to - from - step_size * grad_log_posterior(spec, from);
  return -deviation.squaredNorm() / (4.0 * step_size);
}

namespace {

double mala_log_ratio(const Matrix& current, const PointInfo& cur,
                      const Matrix& proposal, const PointInfo& prop, double h) {
  const Matrix forward = proposal - current - h * cur.grad;
  const Matrix backward = current - proposal - h * prop.grad;
  return prop.log_density - cur.log_density +
         (forward.squaredNorm() - backward.squaredNorm()) / (4.0 * h);
}

}  // namespace

double mala_accept_prob(const PosteriorSpec& spec, const Matrix& current,
                        const Matrix& proposal, double step_size) {
  if (!(step_size > 0.0)) {
    throw std::invalid_argument("mala_accept_prob: step size must be positive");
  }
  PointInfo cur{log_posterior_unnorm(spec, current), grad_log_posterior(spec, current)};
  double prop_log_density;
  try {
    prop_log_density = log_posterior_unnorm(spec, proposal);
  } catch (const std::runtime_error&) {
    return 0.0;
  }
  if (!std::isfinite(prop_log_density)) {
    return 0.0;
  }
  PointInfo prop{prop_log_density, grad_log_posterior(spec, proposal)};
  const double log_ratio = mala_log_ratio(current, cur, proposal, prop, step_size);
  if (!std::isfinite(log_ratio)) {
    return 0.0;
  }
  return std::min(1.0, std::exp(log_ratio));
}

ChainResult run_mala(const PosteriorSpec& spec, const LmcConfig& cfg, const Matrix& init) {
  require_chain_config(cfg);
  const Shape& shape = spec.data.shape();
  if (init.rows() != shape.rows || init.cols() != shape.cols) {
    throw std::invalid_argument("run_mala: init shape mismatch");
  }

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Matrix state = init;
  PointInfo cur{log_posterior_unnorm(spec, state), grad_log_posterior(spec, state)};
  Matrix sum = Matrix::Zero(shape.rows, shape.cols);
  ChainResult result;
  long accepted_kept = 0;
  long total_kept = 0;

  for (int k = 1; k <= cfg.iterations; ++k) {
    const Matrix noise = gaussian_matrix(shape.rows, shape.cols, rng);
    const Matrix proposal =
        state + cfg.step_size * cur.grad + std::sqrt(2.0 * cfg.step_size) * noise;
    const double u = uniform(rng);

    bool accept = false;
    if (within_guard(proposal)) {
      const double prop_log_density = log_posterior_unnorm(spec, proposal);
      if (std::isfinite(prop_log_density)) {
        PointInfo prop{prop_log_density, grad_log_posterior(spec, proposal)};
        const double log_ratio =
            mala_log_ratio(state, cur, proposal, prop, cfg.step_size);
        if (std::isfinite(log_ratio) && std::log(u) < log_ratio) {
          accept = true;
          state = proposal;
          cur = std::move(prop);
        }
      }
    }

    if (!within_guard(state)) {
      result.diverged = true;
      break;
    }
    if (cfg.store_iterates) {
      result.iterates.push_back(state);
    }
    if (k > cfg.burnin) {
      sum += state;
      ++result.iterates_kept;
      ++total_kept;
      if (accept) ++accepted_kept;
    }
  }
  result.mean = result.iterates_kept > 0 ? Matrix(sum / result.iterates_kept) : init;
  result.accept_rate =
      total_kept > 0 ? static_cast<double>(accepted_kept) / total_kept : 0.0;
  return result;
}

}  // namespace studentmc
