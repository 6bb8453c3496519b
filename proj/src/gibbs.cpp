#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "studentmc/rng.hpp"
#include "studentmc/samplers.hpp"

namespace studentmc {

namespace {

struct ObservedEntry {
  int index;     // row index when updating columns, column index otherwise
  double value;
};

using ObservationLists = std::vector<std::vector<ObservedEntry>>;

// One conjugate sweep over the rows of `factors`: each row gets a Gaussian
// draw with precision diag(1/psi) + (1/sigma2) * sum of outer products of
// the other factor's rows at the observed positions.
void sample_factor_rows(Matrix& factors, const Matrix& other,
                        const ObservationLists& observed, const Vector& psi,
                        double sigma2, std::mt19937_64& rng, int iteration,
                        const char* which) {
  const int k = static_cast<int>(factors.cols());
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix precision(k, k);
  Vector rhs(k), z(k);

  for (int r = 0; r < factors.rows(); ++r) {
    precision = Matrix::Zero(k, k);
    precision.diagonal() = psi.cwiseInverse();
    rhs.setZero();
    for (const auto& obs : observed[r]) {
      const auto row = other.row(obs.index);
      precision.noalias() += (row.transpose() * row) / sigma2;
      rhs.noalias() += (obs.value / sigma2) * row.transpose();
    }
    Eigen::LLT<Matrix> llt(precision);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error(std::string("run_gibbs: ") + which +
                               "-row conditional solve failed at iteration " +
                               std::to_string(iteration));
    }
    const Vector mean = llt.solve(rhs);
    for (int j = 0; j < k; ++j) z[j] = normal(rng);
    factors.row(r) = (mean + llt.matrixU().solve(z)).transpose();
  }
}

}  // namespace

ChainResult run_gibbs(const Dataset& data, const GibbsConfig& cfg, double sigma2,
                      const std::optional<FactorPair>& init) {
  const Shape& shape = data.shape();
  if (cfg.k < 1 || cfg.k > std::min(shape.rows, shape.cols)) {
    throw std::invalid_argument("GibbsConfig: need 1 <= k <= min(rows, cols)");
  }
  if (!(cfg.a > 0.0) || !(cfg.b > 0.0)) {
    throw std::invalid_argument("GibbsConfig: a and b must be positive");
  }
  if (cfg.burnin < 0 || cfg.burnin >= cfg.iterations) {
    throw std::invalid_argument("GibbsConfig: need 0 <= burnin < iterations");
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("run_gibbs: sigma2 must be positive");
  }

  std::mt19937_64 rng(cfg.seed);

  Matrix u, v;
  if (init) {
    if (init->u.rows() != shape.rows || init->u.cols() != cfg.k ||
        init->v.rows() != shape.cols || init->v.cols() != cfg.k) {
      throw std::invalid_argument("run_gibbs: init factor shape mismatch");
    }
    u = init->u;
    v = init->v;
  } else {
    u = gaussian_matrix(shape.rows, cfg.k, rng);
    v = gaussian_matrix(shape.cols, cfg.k, rng);
  }
  Vector psi = Vector::Ones(cfg.k);

  // Observed entries grouped by row and by column.
  ObservationLists by_row(shape.rows), by_col(shape.cols);
  const auto& entries = data.mask.entries();
  for (int idx = 0; idx < data.observed(); ++idx) {
    by_row[entries[idx].row].push_back({entries[idx].col, data.values[idx]});
    by_col[entries[idx].col].push_back({entries[idx].row, data.values[idx]});
  }

  std::gamma_distribution<double> unit_gamma;  // shape set per draw
  Matrix sum = Matrix::Zero(shape.rows, shape.cols);
  ChainResult result;

  for (int it = 1; it <= cfg.iterations; ++it) {
    sample_factor_rows(u, v, by_row, psi, sigma2, rng, it, "u");
    sample_factor_rows(v, u, by_col, psi, sigma2, rng, it, "v");

    // Column variances by inverse-gamma conjugacy.
    const double post_shape = cfg.a + 0.5 * (shape.rows + shape.cols);
    for (int col = 0; col < cfg.k; ++col) {
      const double post_scale =
          cfg.b + 0.5 * (u.col(col).squaredNorm() + v.col(col).squaredNorm());
      unit_gamma.param(std::gamma_distribution<double>::param_type(post_shape, 1.0));
      psi[col] = post_scale / unit_gamma(rng);
    }

    // Noise variance by inverse-gamma conjugacy over the observed residuals.
    if (cfg.sample_noise_variance) {
      double residual_sq = 0.0;
      for (int idx = 0; idx < data.observed(); ++idx) {
        const auto& e = entries[idx];
        const double r = data.values[idx] - u.row(e.row).dot(v.row(e.col));
        residual_sq += r * r;
      }
      const double post_noise_shape = cfg.noise_shape + 0.5 * data.observed();
      const double post_noise_scale = cfg.noise_scale + 0.5 * residual_sq;
      unit_gamma.param(
          std::gamma_distribution<double>::param_type(post_noise_shape, 1.0));
      sigma2 = post_noise_scale / unit_gamma(rng);
    }

    if (!u.allFinite() || !v.allFinite()) {
      result.diverged = true;
      break;
    }
    if (it > cfg.burnin) {
      sum.noalias() += u * v.transpose();
      ++result.iterates_kept;
    }
  }

  result.mean = result.iterates_kept > 0
                    ? Matrix(sum / result.iterates_kept)
                    : Matrix(u * v.transpose());
  result.accept_rate = 1.0;
  return result;
}

Matrix gibbs_warm_start(const Dataset& data, double sigma2, std::uint64_t seed,
                        int iterations, int k, double a, double b,
                        bool sample_noise_variance) {
  GibbsConfig cfg;
  cfg.k = std::min(k, std::min(data.shape().rows, data.shape().cols));
  cfg.a = a;
  cfg.b = b;
  cfg.iterations = iterations;
  cfg.burnin = iterations / 2;
  cfg.seed = seed;
  cfg.sample_noise_variance = sample_noise_variance;
  return run_gibbs(data, cfg, sigma2).mean;
}

}  // namespace studentmc
