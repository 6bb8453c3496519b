// Acceptance suite: runs every release criterion end to end and prints one
// pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "studentmc/harness.hpp"
#include "studentmc/io.hpp"
#include "studentmc/metrics.hpp"
#include "studentmc/pacbayes.hpp"
#include "studentmc/posterior.hpp"
#include "studentmc/prior.hpp"
#include "studentmc/rng.hpp"
#include "studentmc/samplers.hpp"
#include "studentmc/synth.hpp"

using namespace studentmc;
namespace fs = std::filesystem;

namespace {

struct Suite {
  int failures = 0;

  void report(int index, const std::string& name, bool ok, const std::string& detail) {
    std::printf("[%s] %2d. %-28s %s\n", ok ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

  void run(int index, const std::string& name,
           const std::function<std::pair<bool, std::string>()>& body) {
    try {
      const auto [ok, detail] = body();
      report(index, name, ok, detail);
    } catch (const std::exception& err) {
      report(index, name, false, std::string("exception: ") + err.what());
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

Matrix random_matrix(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) out(i, j) = normal(rng);
  }
  return out;
}

Dataset random_dataset(Shape shape, double observed_fraction, std::mt19937_64& rng) {
  const int total = static_cast<int>(shape.entry_count());
  const int n = std::max(1, static_cast<int>(std::lround(observed_fraction * total)));
  std::vector<MaskEntry> all;
  for (int i = 0; i < shape.rows; ++i) {
    for (int j = 0; j < shape.cols; ++j) all.push_back({i, j});
  }
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(n);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector values(n);
  for (int k = 0; k < n; ++k) values[k] = normal(rng);
  return Dataset(Mask(shape, std::move(all)), std::move(values));
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return "<missing:" + path.string() + ">";
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int run_cli(const std::string& cli, const std::string& args) {
  const std::string command = "\"" + cli + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return status;
}

SimulateOptions paper_simulate(int setting, int rank, double upsilon,
                               SamplerKind sampler, std::uint64_t seed) {
  SimulateOptions options;
  options.setting = setting;
  options.rows = 100;
  options.cols = 100;
  options.rank = rank;
  options.upsilon = upsilon;
  options.replicates = 10;
  options.sampler = sampler;
  options.seed = seed;
  options.quiet = true;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path scratch = fs::temp_directory_path() / "studentmc_acceptance";
  fs::path reference_image;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) cli = argv[++i];
    if (arg == "--scratch" && i + 1 < argc) scratch = argv[++i];
    if (arg == "--image" && i + 1 < argc) reference_image = argv[++i];
  }
  if (reference_image.empty()) {
    if (const char* env = std::getenv("STUDENTMC_REFERENCE_IMAGE"); env && *env) {
      reference_image = env;
    }
  }
  fs::create_directories(scratch);

  Suite suite;

  // 1. Gradient correctness on random instances.
  suite.run(1, "gradient correctness", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    const double taus[] = {0.1, 1.0, 10.0};
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const int rows = 2 + static_cast<int>(rng() % 19);   // up to 20
      const int cols = 2 + static_cast<int>(rng() % 29);   // up to 30
      const double fraction = 0.1 + 0.7 * (rng() % 8) / 7.0;
      const Dataset data = random_dataset({rows, cols}, fraction, rng);
      const double tau = taus[trial % 3];
      const double lambda = (trial % 2 == 0) ? 1.0 : data.observed() / 4.0;
      const PosteriorSpec spec(data, PriorConfig{tau}, lambda);
      const Matrix m = random_matrix(rows, cols, rng);
      worst = std::max(worst, finite_diff_grad_check(spec, m, 1e-5));
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-5 && elapsed < 10.0;
    return {ok, fmt("max rel err %.3g (< 1e-5), %.2fs (< 10s)", worst, elapsed)};
  });

  // 2. The two log-prior forms agree.
  suite.run(2, "prior form equivalence", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1002);
    const double taus[] = {0.25, 1.0, 4.0};
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const int rows = 1 + static_cast<int>(rng() % 12);
      const int cols = 1 + static_cast<int>(rng() % 12);
      const Matrix m = random_matrix(rows, cols, rng);
      const PriorConfig cfg{taus[trial % 3]};
      const double a = log_prior_logdet(m, cfg);
      const double b = log_prior_singular(m, cfg);
      worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-9 && elapsed < 5.0;
    return {ok, fmt("max rel gap %.3g (< 1e-9), %.2fs (< 5s)", worst, elapsed)};
  });

  // 3. Iterative ridge resolvent equals the direct SPD solve.
  suite.run(3, "ridge resolvent equivalence", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1003);
    const double taus[] = {0.3, 0.5, 1.0, 2.0};
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const int rows = 5 + static_cast<int>(rng() % 46);  // up to 50
      const int cols = 4 + static_cast<int>(rng() % 37);  // up to 40
      const Matrix m = random_matrix(rows, cols, rng);
      const PriorConfig cfg{taus[trial % 4]};
      const Matrix iterative = ridge_resolvent(m, cfg);
      Matrix gram = m * m.transpose();
      gram.diagonal().array() += cfg.tau * cfg.tau;
      const Matrix direct = gram.llt().solve(m);
      worst = std::max(worst, (iterative - direct).cwiseAbs().maxCoeff());
    }
    const double elapsed = seconds_since(start);
    const bool ok = worst < 1e-8 && elapsed < 10.0;
    return {ok, fmt("max abs gap %.3g (< 1e-8), %.2fs (< 10s)", worst, elapsed)};
  });

  // 4. Closed-form constants and the beta/alpha < 2 guarantee.
  suite.run(4, "oracle-constant arithmetic", [&]() -> std::pair<bool, std::string> {
    const TheoryConstants unit = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);
    bool ok = unit.c1 == 26.0 && unit.c2 == 60.0 && (unit.c - 1.0) == 99.0;
    const double sigmas[] = {0.5, 1.0, 2.0, 4.0};
    const double ells[] = {0.5, 1.0, 2.0, 5.0, 10.0};
    const long ns[] = {100, 10000};
    int grid = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
      const NoiseBounds nb{sigmas[i % 4], ells[(i + 1) % 5], ells[i % 5]};
      const long n = ns[i % 2];
      const TheoryConstants full =
          finalize_constants(compute_constants(nb, 1.0), n);
      ok = ok && full.alpha > 0.0 && full.beta / full.alpha < 2.0;
      worst_ratio = std::max(worst_ratio, full.beta / full.alpha);
      ++grid;
    }
    return {ok, fmt("C1=26 C2=60 threshold=99; %d tuples, max beta/alpha %.4f (< 2)",
                    grid, worst_ratio)};
  });

  // 5. Exact low-rank benchmark, easy cell, all three samplers.
  double lmc_mse_cell1 = 0.0;
  suite.run(5, "benchmark cell r=2 20% missing", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    SimulateOptions lmc = paper_simulate(1, 2, 0.2, SamplerKind::kLmc, 20260801);
    lmc.out_dir = scratch / "cell1_lmc";
    const SimulateResult r_lmc = run_simulate(lmc);

    SimulateOptions mala = lmc;
    mala.sampler = SamplerKind::kMala;
    mala.out_dir = scratch / "cell1_mala";
    const SimulateResult r_mala = run_simulate(mala);

    SimulateOptions gibbs = lmc;
    gibbs.sampler = SamplerKind::kGibbs;
    gibbs.out_dir = scratch / "cell1_gibbs";
    const SimulateResult r_gibbs = run_simulate(gibbs);

    const double elapsed = seconds_since(start);
    lmc_mse_cell1 = r_lmc.mse.mean;
    const double scaled_lmc = 100.0 * r_lmc.mse.mean;
    const double scaled_mala = 100.0 * r_mala.mse.mean;
    const double scaled_gibbs = 100.0 * r_gibbs.mse.mean;
    const double rel_gap =
        std::abs(r_lmc.mse.mean - r_mala.mse.mean) / r_lmc.mse.mean;
    const auto in_gate = [](double v) { return v >= 4.2 && v <= 6.3; };
    const bool ok = in_gate(scaled_lmc) && in_gate(scaled_mala) &&
                    in_gate(scaled_gibbs) && rel_gap < 0.01 && elapsed < 300.0;
    return {ok, fmt("10^2*MSE lmc %.3f mala %.3f gibbs %.3f (gate [4.2,6.3]), "
                    "lmc-mala gap %.2g%% (< 1%%), %.1fs",
                    scaled_lmc, scaled_mala, scaled_gibbs, 100.0 * rel_gap, elapsed)};
  });

  // 6. Exact low-rank benchmark, harder cell.
  suite.run(6, "benchmark cell r=5 50% missing", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    SimulateOptions options = paper_simulate(1, 5, 0.5, SamplerKind::kLmc, 20260802);
    options.out_dir = scratch / "cell2_lmc";
    const SimulateResult result = run_simulate(options);
    const double elapsed = seconds_since(start);
    const double scaled = 100.0 * result.mse.mean;
    const bool ok = scaled >= 20.4 && scaled <= 27.4 && elapsed < 300.0;
    return {ok, fmt("10^2*MSE %.3f (gate [20.4, 27.4]), %.1fs", scaled, elapsed)};
  });

  // 7. Approximate low-rank spot check.
  suite.run(7, "approximate low-rank cell", [&]() -> std::pair<bool, std::string> {
    const auto start = std::chrono::steady_clock::now();
    SimulateOptions options = paper_simulate(2, 2, 0.2, SamplerKind::kLmc, 20260803);
    options.out_dir = scratch / "setting2_lmc";
    const SimulateResult result = run_simulate(options);
    const double elapsed = seconds_since(start);
    const double scaled = 10.0 * result.mse.mean;
    const bool ok = scaled >= 4.8 && scaled <= 5.9 && elapsed < 300.0;
    return {ok, fmt("10^1*MSE %.3f (gate [4.8, 5.9]), %.1fs", scaled, elapsed)};
  });

  // 8. MALA acceptance-rate calibration at the published step size.
  suite.run(8, "mala calibration", [&]() -> std::pair<bool, std::string> {
    SynthConfig scfg;
    scfg.rows = 100;
    scfg.cols = 100;
    scfg.rank = 2;
    scfg.seed = 31;
    const LowRankFactors factors = gen_exact_lowrank(scfg);
    const Mask mask = gen_mask_uniform({100, 100}, 0.2, 32);
    const Dataset data = add_noise(factors.truth, mask, 1.0, 33);
    const double lambda = data.observed() / 4.0;
    const PosteriorSpec spec(data, PriorConfig{1.0}, lambda);
    const Matrix init = gibbs_warm_start(data, 1.0, 34);

    const double paper_h = 1.0 / (400.0 * 100.0 * 100.0);
    LmcConfig cfg{paper_h, 200, 100, 35, false};
    const double rate_paper = run_mala(spec, cfg, init).accept_rate;
    cfg.step_size = paper_h / 100.0;
    cfg.seed = 36;
    const double rate_small = run_mala(spec, cfg, init).accept_rate;

    const bool ok = rate_paper >= 0.3 && rate_paper <= 0.7 && rate_small > 0.95;
    return {ok, fmt("acceptance %.4f at h=1/(400mp) (gate [0.3, 0.7]), %.4f at h/100 "
                    "(> 0.95)",
                    rate_paper, rate_small)};
  });

  // 9. Gradient chains beat the factorization sampler on wall clock.
  suite.run(9, "runtime ordering", [&]() -> std::pair<bool, std::string> {
    BenchOptions options;
    options.rows = 100;
    options.rank = 2;
    options.upsilon = 0.2;
    options.col_list = {500};
    options.iterations = 20;
    options.runs = 3;
    options.seed = 20260804;
    options.out_dir = scratch / "bench";
    options.quiet = true;
    const BenchResult result = run_bench(options);
    double lmc_s = -1.0, gibbs_s = -1.0;
    for (const auto& row : result.rows) {
      if (row.sampler == "lmc") lmc_s = row.seconds;
      if (row.sampler == "gibbs_kfull") gibbs_s = row.seconds;
    }
    const bool ok = lmc_s > 0.0 && gibbs_s > 0.0 && lmc_s < gibbs_s;
    return {ok, fmt("median of 3: lmc %.3fs < gibbs(k=100) %.3fs", lmc_s, gibbs_s)};
  });

  // 10. Inpainting: reference image when supplied, synthetic property otherwise.
  suite.run(10, "image inpainting", [&]() -> std::pair<bool, std::string> {
    if (!reference_image.empty()) {
      const auto start = std::chrono::steady_clock::now();
      InpaintOptions options;
      options.image = reference_image;
      options.upsilon = 0.5;
      options.repeats = 3;
      options.sampler = SamplerKind::kLmc;
      options.seed = 20260805;
      options.out_dir = scratch / "inpaint_reference";
      options.quiet = true;
      const InpaintResult result = run_inpaint(options);
      const double elapsed = seconds_since(start);
      const bool ok = result.mse.mean >= 120.0 && result.mse.mean <= 160.0 &&
                      result.nmse.mean >= 0.006 && result.nmse.mean <= 0.010 &&
                      elapsed < 900.0;
      return {ok, fmt("reference image: MSE %.2f (gate [120, 160]), NMSE %.5f "
                      "(gate [0.006, 0.010]), %.0fs",
                      result.mse.mean, result.nmse.mean, elapsed)};
    }
    // Synthetic substitute: the chain restores a smooth image at least three
    // times better than column-mean filling under the same masks.
    const Matrix image = synthetic_smooth_image(128, 128);
    const Shape shape{128, 128};
    double worst_ratio = 0.0;
    double lmc_nmse = 0.0, fill_nmse = 0.0;
    for (std::uint64_t seed : {51ull, 52ull}) {
      const Mask mask = gen_mask_uniform(shape, 0.5, seed);
      const Dataset data = add_noise(image, mask, 0.0, 0);
      ChainSettings chain;
      InitSettings init;
      init.kind = InitKind::kSoftImpute;
      const Matrix start = make_init(data, init, chain, GibbsSettings{}, 0);
      const PosteriorSpec spec(data, PriorConfig{1.0},
                               resolve_lambda(chain, data.observed()));
      LmcConfig cfg{resolve_step_size(chain, shape), 200, 100, seed + 100, false};
      const ChainResult result = run_lmc(spec, cfg, start);
      lmc_nmse = metric_nmse(result.mean, image);
      fill_nmse = metric_nmse(column_mean_fill(data), image);
      worst_ratio = std::max(worst_ratio, lmc_nmse / fill_nmse);
    }
    const bool ok = worst_ratio < 1.0 / 3.0;
    return {ok, fmt("synthetic 128x128: NMSE lmc %.3g vs column-mean %.3g, "
                    "ratio %.3g (< 1/3)",
                    lmc_nmse, fill_nmse, worst_ratio)};
  });

  // 11. CLI determinism: repeated runs are byte identical.
  suite.run(11, "seeded determinism", [&]() -> std::pair<bool, std::string> {
    if (cli.empty()) {
      return {false, "no --cli path provided"};
    }
    const fs::path dir_a = scratch / "det_a";
    const fs::path dir_b = scratch / "det_b";
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
    const std::string sim_args =
        "simulate --m 30 --p 25 --rank 2 --upsilon 0.3 --replicates 2 "
        "--sampler lmc --seed 42 -T 50 --burnin 25 --quiet --name det --out-dir ";
    if (run_cli(cli, sim_args + dir_a.string()) != 0) return {false, "simulate run failed"};
    if (run_cli(cli, sim_args + dir_b.string()) != 0) return {false, "simulate run failed"};
    const bool sim_ok = slurp(dir_a / "det_replicates.csv") ==
                        slurp(dir_b / "det_replicates.csv");

    const std::string inp_args =
        "inpaint --synthetic-size 32 --upsilon 0.4 --repeats 2 --seed 7 "
        "-T 20 --burnin 10 --quiet --name det --out-dir ";
    const fs::path dir_c = scratch / "det_c";
    const fs::path dir_d = scratch / "det_d";
    fs::remove_all(dir_c);
    fs::remove_all(dir_d);
    if (run_cli(cli, inp_args + dir_c.string()) != 0) return {false, "inpaint run failed"};
    if (run_cli(cli, inp_args + dir_d.string()) != 0) return {false, "inpaint run failed"};
    const bool inp_ok =
        slurp(dir_c / "det_repeats.csv") == slurp(dir_d / "det_repeats.csv") &&
        slurp(dir_c / "det_restored.pgm") == slurp(dir_d / "det_restored.pgm");

    return {sim_ok && inp_ok,
            fmt("simulate CSV identical: %s; inpaint CSV+PGM identical: %s",
                sim_ok ? "yes" : "no", inp_ok ? "yes" : "no")};
  });

  // 12. The bound evaluator decreases with the sample size.
  suite.run(12, "bound monotone in n", [&]() -> std::pair<bool, std::string> {
    const TheoryConstants tc = compute_constants(NoiseBounds{1.0, 1.0, 1.0}, 1.0);
    double previous = std::numeric_limits<double>::infinity();
    bool ok = true;
    std::string values;
    for (long n : {1000L, 10000L, 100000L, 1000000L}) {
      const double rhs = oracle_bound_rhs(0.0, 2, 100, 100, n, 0.05, tc);
      ok = ok && rhs > 0.0 && rhs < previous;
      previous = rhs;
      values += fmt("%.4g ", rhs);
    }
    return {ok, "rhs over n in {1e3..1e6}: " + values + "(strictly decreasing, positive)"};
  });

  std::printf("%d of 12 criteria passed\n", 12 - suite.failures);
  return suite.failures;
}
