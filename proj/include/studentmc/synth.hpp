#pragma once

#include <cstdint>

#include "studentmc/data.hpp"

namespace studentmc {

/// Configuration for the synthetic benchmark generators.
struct SynthConfig {
  int rows = 100;
  int cols = 100;
  int rank = 2;
  double upsilon = 0.2;    // missing rate in [0, 1)
  double noise_sd = 1.0;
  int setting = 1;         // 1 = exact low rank, 2 = approximate low rank
  std::uint64_t seed = 0;
  double perturb_weight = 0.1;  // setting 2 only
  int perturb_cols = 50;        // setting 2 only
};

struct LowRankFactors {
  Matrix truth;
  Matrix u;  // rows x rank
  Matrix v;  // cols x rank
};

/// Exact rank-r truth U V^T with i.i.d. standard normal factors.
LowRankFactors gen_exact_lowrank(const SynthConfig& cfg);

/// Approximately low-rank truth: U V^T plus a scaled wide perturbation
/// A B^T with perturb_cols columns.
Matrix gen_approx_lowrank(const SynthConfig& cfg);

/// Exactly round((1 - upsilon) * rows * cols) distinct positions drawn
/// uniformly without replacement, returned in row-major order.
Mask gen_mask_uniform(Shape shape, double upsilon, std::uint64_t seed);

/// Observations truth + noise_sd * z on the mask, z i.i.d. standard normal.
/// The returned dataset carries the truth for later evaluation.
Dataset add_noise(const Matrix& truth, const Mask& mask, double noise_sd,
                  std::uint64_t seed);

/// Iterative soft-thresholded SVD completion: starting from zero, repeat
/// Z <- SVT_shrink(observations on Omega, Z elsewhere) until the relative
/// change drops below tol or max_iterations is hit.
Matrix soft_impute(const Dataset& data, double shrink, int max_iterations = 100,
                   double tol = 1e-4);

/// Default soft-impute shrinkage for a given noise scale.
double default_soft_impute_shrink(Shape shape, double sigma);

/// Fills each unobserved entry with its column's observed mean (0 when a column
/// has no observations). Reference baseline for inpainting comparisons.
Matrix column_mean_fill(const Dataset& data);

/// Deterministic smooth grayscale test image with values in [0, 255].
Matrix synthetic_smooth_image(int rows, int cols);

}  // namespace studentmc
