#include "studentmc/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "studentmc/rng.hpp"

namespace studentmc {

namespace {

void require_dims(const SynthConfig& cfg) {
  if (cfg.rows < 1 || cfg.cols < 1) {
    throw std::invalid_argument("SynthConfig: shape must be at least 1x1");
  }
  if (cfg.rank < 1 || cfg.rank > std::min(cfg.rows, cfg.cols)) {
    throw std::invalid_argument("SynthConfig: need 1 <= rank <= min(rows, cols)");
  }
}

}  // namespace

LowRankFactors gen_exact_lowrank(const SynthConfig& cfg) {
  require_dims(cfg);
  std::mt19937_64 rng(cfg.seed);
  LowRankFactors out;
  out.u = gaussian_matrix(cfg.rows, cfg.rank, rng);
  out.v = gaussian_matrix(cfg.cols, cfg.rank, rng);
  out.truth = out.u * out.v.transpose();
  return out;
}

Matrix gen_approx_lowrank(const SynthConfig& cfg) {
  require_dims(cfg);
  if (cfg.perturb_cols < 1) {
    throw std::invalid_argument("SynthConfig: perturb_cols must be positive");
  }
  std::mt19937_64 rng(cfg.seed);
  const Matrix u = gaussian_matrix(cfg.rows, cfg.rank, rng);
  const Matrix v = gaussian_matrix(cfg.cols, cfg.rank, rng);
  const Matrix a = gaussian_matrix(cfg.rows, cfg.perturb_cols, rng);
  const Matrix b = gaussian_matrix(cfg.cols, cfg.perturb_cols, rng);
  return u * v.transpose() + cfg.perturb_weight * (a * b.transpose());
}

Mask gen_mask_uniform(Shape shape, double upsilon, std::uint64_t seed) {
  if (upsilon < 0.0 || upsilon >= 1.0) {
    throw std::invalid_argument("gen_mask_uniform: upsilon must lie in [0, 1)");
  }
  const long total = shape.entry_count();
  const long keep = std::lround((1.0 - upsilon) * static_cast<double>(total));
  if (keep < 1) {
    throw std::invalid_argument("gen_mask_uniform: no entries selected");
  }

  // Partial Fisher-Yates over linear indices, then row-major order.
  std::vector<long> linear(total);
  std::iota(linear.begin(), linear.end(), 0L);
  std::mt19937_64 rng(seed);
  for (long i = 0; i < keep; ++i) {
    std::uniform_int_distribution<long> pick(i, total - 1);
    std::swap(linear[i], linear[pick(rng)]);
  }
  linear.resize(keep);
  std::sort(linear.begin(), linear.end());

  std::vector<MaskEntry> entries;
  entries.reserve(keep);
  for (long idx : linear) {
    entries.push_back({static_cast<int>(idx / shape.cols),
                       static_cast<int>(idx % shape.cols)});
  }
  return Mask(shape, std::move(entries));
}

Dataset add_noise(const Matrix& truth, const Mask& mask, double noise_sd,
                  std::uint64_t seed) {
  if (truth.rows() != mask.shape().rows || truth.cols() != mask.shape().cols) {
    throw std::invalid_argument("add_noise: truth/mask shape mismatch");
  }
  if (noise_sd < 0.0) {
    throw std::invalid_argument("add_noise: noise_sd must be nonnegative");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector values(mask.size());
  const auto& entries = mask.entries();
  for (int k = 0; k < mask.size(); ++k) {
    const double z = noise_sd > 0.0 ? normal(rng) : 0.0;
    values[k] = truth(entries[k].row, entries[k].col) + noise_sd * z;
  }
  return Dataset(mask, std::move(values), truth);
}

Matrix soft_impute(const Dataset& data, double shrink, int max_iterations, double tol) {
  if (shrink < 0.0) {
    throw std::invalid_argument("soft_impute: shrink must be nonnegative");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("soft_impute: need at least one iteration");
  }
  const Shape& shape = data.shape();
  const auto& entries = data.mask.entries();

  Matrix z = Matrix::Zero(shape.rows, shape.cols);
  Matrix work(shape.rows, shape.cols);
  for (int it = 0; it < max_iterations; ++it) {
    work = z;
    for (int k = 0; k < data.observed(); ++k) {
      work(entries[k].row, entries[k].col) = data.values[k];
    }
    Eigen::BDCSVD<Matrix> svd(work, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (svd.info() != Eigen::Success) {
      throw std::runtime_error("soft_impute: SVD failed");
    }
    Vector s = svd.singularValues();
    for (int j = 0; j < s.size(); ++j) {
      s[j] = std::max(s[j] - shrink, 0.0);
    }
    Matrix next = svd.matrixU() * s.asDiagonal() * svd.matrixV().transpose();
    const double change = (next - z).norm() / std::max(1.0, z.norm());
    z = std::move(next);
    if (change < tol) {
      break;
    }
  }
  return z;
}

double default_soft_impute_shrink(Shape shape, double sigma) {
  return 2.5 * sigma * std::sqrt(static_cast<double>(std::max(shape.rows, shape.cols)));
}

Matrix column_mean_fill(const Dataset& data) {
  const Shape& shape = data.shape();
  Vector sums = Vector::Zero(shape.cols);
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(shape.cols);
  const auto& entries = data.mask.entries();
  for (int k = 0; k < data.observed(); ++k) {
    sums[entries[k].col] += data.values[k];
    counts[entries[k].col] += 1;
  }
  Matrix out(shape.rows, shape.cols);
  for (int j = 0; j < shape.cols; ++j) {
    out.col(j).setConstant(counts[j] > 0 ? sums[j] / counts[j] : 0.0);
  }
  for (int k = 0; k < data.observed(); ++k) {
    out(entries[k].row, entries[k].col) = data.values[k];
  }
  return out;
}

Matrix synthetic_smooth_image(int rows, int cols) {
  if (rows < 1 || cols < 1) {
    throw std::invalid_argument("synthetic_smooth_image: shape must be at least 1x1");
  }
  Matrix img(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const double y = rows > 1 ? static_cast<double>(i) / (rows - 1) : 0.0;
    for (int j = 0; j < cols; ++j) {
      const double x = cols > 1 ? static_cast<double>(j) / (cols - 1) : 0.0;
      const double ridge = std::sin(3.1 * x + 1.7) * std::cos(2.3 * y - 0.4);
      const double blob =
          std::exp(-((x - 0.62) * (x - 0.62) + (y - 0.38) * (y - 0.38)) / 0.08);
      const double tilt = 0.35 * x + 0.2 * y;
      img(i, j) = 120.0 + 55.0 * ridge + 60.0 * blob + 40.0 * tilt - 30.0;
    }
  }
  // Keep inside the 8-bit range without clipping structure away.
  const double lo = img.minCoeff();
  const double hi = img.maxCoeff();
  img = (img.array() - lo) * (235.0 / std::max(hi - lo, 1e-12)) + 10.0;
  return img;
}

}  // namespace studentmc
