#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "studentmc/data.hpp"
#include "studentmc/metrics.hpp"
#include "studentmc/pacbayes.hpp"
#include "studentmc/samplers.hpp"

namespace studentmc {

enum class SamplerKind { kLmc, kMala, kGibbs };
enum class InitKind { kGibbs, kSoftImpute, kZero, kRandom };
enum class LambdaConvention { kQuarterSigmaSq, kHalfSigmaSq };

std::string to_string(SamplerKind kind);
std::string to_string(InitKind kind);
std::string to_string(LambdaConvention convention);
SamplerKind parse_sampler(const std::string& name);
InitKind parse_init(const std::string& name);
LambdaConvention parse_lambda_convention(const std::string& name);

/// Chain hyperparameters shared by the experiment commands. Values at their
/// sentinel (<= 0) are resolved against the problem size.
struct ChainSettings {
  double tau = 1.0;
  double step_size = 0.0;  // <= 0: 1 / (400 * rows * cols)
  int iterations = 200;
  int burnin = 100;
  LambdaConvention lambda_convention = LambdaConvention::kQuarterSigmaSq;
  double lambda_override = 0.0;  // > 0 wins over the convention
  double sigma = 1.0;            // noise scale behind lambda and the Gibbs baseline
};

struct GibbsSettings {
  int k = 10;
  double a = 1.0;
  double b = 0.01;
  bool sample_noise_variance = false;  // optionally resample sigma^2 by conjugacy
};

struct InitSettings {
  InitKind kind = InitKind::kGibbs;
  int gibbs_iterations = 200;  // warm-start sweeps; the second half is averaged
  double soft_impute_shrink = 0.0;  // <= 0: 2.5 * sigma * sqrt(max(rows, cols))
  int soft_impute_iterations = 100;
};

double resolve_step_size(const ChainSettings& chain, Shape shape);
double resolve_lambda(const ChainSettings& chain, long n);

/// Noise variance of the factorization baseline's Gaussian data term,
/// n / (2 lambda): the variance under which its conjugate updates target the
/// same tempered pseudo-posterior exp(-lambda r(M)) as the gradient chains
/// (2 sigma^2 under the default lambda = n/(4 sigma^2) convention).
double resolve_gibbs_sigma2(const ChainSettings& chain, long n);
double resolve_soft_impute_shrink(const InitSettings& init, const ChainSettings& chain,
                                  Shape shape);

/// Initial state for a gradient chain.
Matrix make_init(const Dataset& data, const InitSettings& init,
                 const ChainSettings& chain, const GibbsSettings& gibbs,
                 std::uint64_t seed);

/// Directory used when a command has no explicit --out-dir: the
/// STUDENTMC_OUT_DIR environment variable, or the current directory.
std::filesystem::path default_out_dir();

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation (n - 1 divisor)
};
Aggregate aggregate(const std::vector<double>& values);

/// Power-of-ten prefix used when printing a metric column, chosen so the
/// scaled mean is at least 1 (0 for means already >= 1).
int table_scale(double mean);

struct ReplicateReport {
  int replicate = 0;
  EvalReport eval;
  double accept_rate = 1.0;
  bool diverged = false;
};

struct SimulateOptions {
  int setting = 1;  // 1 = exact low rank, 2 = approximate low rank
  int rows = 100;
  int cols = 100;
  int rank = 2;
  double upsilon = 0.2;
  double noise_sd = 1.0;
  int replicates = 10;
  SamplerKind sampler = SamplerKind::kLmc;
  std::uint64_t seed = 1;
  ChainSettings chain;
  GibbsSettings gibbs;
  InitSettings init;
  double rank_rel_tol = 1e-2;
  std::filesystem::path out_dir;  // empty: default_out_dir()
  std::string name = "simulate";
  bool quiet = false;
};

struct SimulateResult {
  std::vector<ReplicateReport> replicates;
  Aggregate mse, nmse, pred, est_rank;
  long n = 0;
  double lambda = 0.0;
  double step_size = 0.0;
  bool any_diverged = false;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

SimulateResult run_simulate(const SimulateOptions& options, std::ostream* log = nullptr);

/// Inpainting defaults assume raw 0..255 pixels: sigma is a small
/// gray-level noise floor rather than the unit scale of the synthetic
/// benchmarks.
inline ChainSettings inpaint_chain_defaults() {
  ChainSettings chain;
  chain.sigma = 5.0;
  return chain;
}

struct InpaintOptions {
  std::filesystem::path image;  // empty: use a synthetic test image
  int synthetic_size = 128;
  double upsilon = 0.5;
  int repeats = 1;
  SamplerKind sampler = SamplerKind::kLmc;
  std::uint64_t seed = 1;
  ChainSettings chain = inpaint_chain_defaults();
  GibbsSettings gibbs;
  InitSettings init{InitKind::kSoftImpute, 200, 0.0, 100};
  double rank_rel_tol = 1e-2;
  std::filesystem::path out_dir;
  std::string name = "inpaint";
  bool quiet = false;
  bool write_restored = true;
};

struct InpaintResult {
  std::vector<ReplicateReport> repeats;
  Aggregate mse, nmse, pred, est_rank;
  long n = 0;
  double lambda = 0.0;
  double step_size = 0.0;
  bool any_diverged = false;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
  std::filesystem::path restored_path;  // empty unless write_restored
};

InpaintResult run_inpaint(const InpaintOptions& options, std::ostream* log = nullptr);

struct BenchOptions {
  int rows = 100;
  int rank = 2;
  double upsilon = 0.2;
  std::vector<int> col_list = {50, 100, 200, 500};
  int iterations = 20;
  int runs = 1;  // timed repetitions; the median is reported
  std::uint64_t seed = 1;
  double noise_sd = 1.0;
  ChainSettings chain;
  GibbsSettings gibbs;
  std::filesystem::path out_dir;
  std::string name = "bench";
  bool quiet = false;
};

struct BenchRow {
  std::string sampler;
  int cols = 0;
  int k = 0;  // factor count for the Gibbs rows, 0 otherwise
  double seconds = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::filesystem::path csv_path;
  std::filesystem::path manifest_path;
};

BenchResult run_bench(const BenchOptions& options, std::ostream* log = nullptr);

struct BoundOptions {
  int rows = 100;
  int cols = 100;
  int rank = 2;
  long n = 1000;
  double sigma = 1.0;
  double xi = 1.0;
  double L = 1.0;
  double eps = 0.05;
  double c_margin = 1.0;
  double tau = 0.0;  // <= 0: recommended_tau
  double approx_err = 0.0;
};

struct BoundReport {
  TheoryConstants constants;  // finalized at n
  double c_threshold = 0.0;   // c2 + 1.5 * c1
  double curly_c = 0.0;       // reported universal constant, 6c + margin
  double tau = 0.0;
  double rhs = 0.0;
};

BoundReport compute_bound_report(const BoundOptions& options);

}  // namespace studentmc
