// Command-line front end: simulate | inpaint | bench | bound | sample.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "studentmc/harness.hpp"
#include "studentmc/io.hpp"
#include "studentmc/posterior.hpp"
#include "studentmc/rng.hpp"
#include "studentmc/synth.hpp"
#include "studentmc/version.hpp"

namespace {

using namespace studentmc;

struct ChainFlags {
  double tau = 1.0;
  double step_size = 0.0;
  int iterations = 200;
  int burnin = 100;
  std::string lambda_convention = "n4sigma2";
  double lambda_override = 0.0;
  double sigma = 1.0;
  int gibbs_k = 10;
  double gibbs_a = 1.0;
  double gibbs_b = 0.01;
  std::string init = "gibbs";
  bool gibbs_fixed_noise = false;
  int gibbs_init_iters = 50;
  double shrink = 0.0;
  int si_iters = 100;
};

void add_chain_flags(CLI::App* cmd, ChainFlags& flags) {
  cmd->add_option("--tau", flags.tau, "Prior scale tau")->capture_default_str();
  cmd->add_option("--step-size", flags.step_size,
                  "Langevin step size h (default 1/(400*m*p))");
  cmd->add_option("--iters,-T", flags.iterations, "Chain iterations")
      ->capture_default_str();
  cmd->add_option("--burnin", flags.burnin, "Burn-in iterations")->capture_default_str();
  cmd->add_option("--lambda", flags.lambda_override,
                  "Absolute inverse temperature (overrides the convention)");
  cmd->add_option("--lambda-convention", flags.lambda_convention,
                  "Lambda rule: n4sigma2 = n/(4 sigma^2), n2sigma2 = n/(2 sigma^2)")
      ->check(CLI::IsMember({"n4sigma2", "n2sigma2"}))
      ->capture_default_str();
  cmd->add_option("--sigma", flags.sigma,
                  "Noise scale sigma entering lambda and the Gibbs baseline")
      ->capture_default_str();
  cmd->add_option("--gibbs-k", flags.gibbs_k, "Gibbs factor count K")
      ->capture_default_str();
  cmd->add_option("--gibbs-a", flags.gibbs_a, "Inverse-gamma shape a")
      ->capture_default_str();
  cmd->add_option("--gibbs-b", flags.gibbs_b, "Inverse-gamma scale b")
      ->capture_default_str();
  cmd->add_flag("--gibbs-fixed-noise", flags.gibbs_fixed_noise,
                "Keep the Gibbs noise variance fixed at sigma^2 instead of "
                "resampling it");
  cmd->add_option("--init", flags.init, "Chain initializer")
      ->check(CLI::IsMember({"gibbs", "softimpute", "zero", "random"}))
      ->capture_default_str();
  cmd->add_option("--gibbs-init-iters", flags.gibbs_init_iters,
                  "Warm-start Gibbs sweeps")
      ->capture_default_str();
  cmd->add_option("--shrink", flags.shrink,
                  "Soft-impute shrinkage (default 2.5*sigma*sqrt(max(m,p)))");
  cmd->add_option("--si-iters", flags.si_iters, "Soft-impute iteration cap")
      ->capture_default_str();
}

ChainSettings to_chain(const ChainFlags& flags) {
  ChainSettings chain;
  chain.tau = flags.tau;
  chain.step_size = flags.step_size;
  chain.iterations = flags.iterations;
  chain.burnin = flags.burnin;
  chain.lambda_convention = parse_lambda_convention(flags.lambda_convention);
  chain.lambda_override = flags.lambda_override;
  chain.sigma = flags.sigma;
  return chain;
}

GibbsSettings to_gibbs(const ChainFlags& flags) {
  return {flags.gibbs_k, flags.gibbs_a, flags.gibbs_b, !flags.gibbs_fixed_noise};
}

InitSettings to_init(const ChainFlags& flags) {
  InitSettings init;
  init.kind = parse_init(flags.init);
  init.gibbs_iterations = flags.gibbs_init_iters;
  init.soft_impute_shrink = flags.shrink;
  init.soft_impute_iterations = flags.si_iters;
  return init;
}

int run_sample_command(const std::string& data_path, const std::string& truth_path,
                       int rows, int cols, const std::string& sampler_name,
                       std::uint64_t seed, const ChainFlags& flags,
                       const std::string& out_dir, const std::string& name,
                       double rank_tol) {
  const Shape shape{rows, cols};
  Dataset data = read_observations_csv(data_path, shape);
  if (!truth_path.empty()) {
    data.truth = read_matrix_csv(truth_path);
    if (data.truth->rows() != rows || data.truth->cols() != cols) {
      throw std::runtime_error("sample: truth matrix does not match --m/--p");
    }
  }

  const ChainSettings chain = to_chain(flags);
  const GibbsSettings gibbs = to_gibbs(flags);
  const InitSettings init = to_init(flags);
  const SamplerKind sampler = parse_sampler(sampler_name);
  const double lambda = resolve_lambda(chain, data.observed());
  const double step = resolve_step_size(chain, shape);

  ChainResult chain_result;
  if (sampler == SamplerKind::kGibbs) {
    GibbsConfig gc;
    gc.k = gibbs.k;
    gc.a = gibbs.a;
    gc.b = gibbs.b;
    gc.iterations = chain.iterations;
    gc.burnin = chain.burnin;
    gc.seed = seed;
    gc.sample_noise_variance = gibbs.sample_noise_variance;
    chain_result = run_gibbs(data, gc, chain.sigma * chain.sigma);
  } else {
    const Matrix start = make_init(data, init, chain, gibbs,
                                   derive_seed(seed, /*stream=*/4, /*index=*/0));
    PosteriorSpec spec(data, PriorConfig{chain.tau}, lambda);
    LmcConfig lc{step, chain.iterations, chain.burnin,
                 derive_seed(seed, /*stream=*/5, /*index=*/0), false};
    chain_result = sampler == SamplerKind::kLmc ? run_lmc(spec, lc, start)
                                                : run_mala(spec, lc, start);
  }

  const std::filesystem::path dir =
      out_dir.empty() ? default_out_dir() : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  const std::filesystem::path estimate_path = dir / (name + "_estimate.csv");
  write_matrix_csv(estimate_path, chain_result.mean);

  nlohmann::json manifest{
      {"command", "sample"},
      {"version", kVersion},
      {"config",
       {{"data", data_path},
        {"truth", truth_path},
        {"m", rows},
        {"p", cols},
        {"sampler", sampler_name},
        {"seed", seed},
        {"n", data.observed()},
        {"rank_rel_tol", rank_tol},
        {"chain",
         {{"tau", chain.tau},
          {"step_size", step},
          {"iterations", chain.iterations},
          {"burnin", chain.burnin},
          {"lambda",
           {{"convention", chain.lambda_override > 0.0
                               ? "absolute"
                               : to_string(chain.lambda_convention)},
            {"sigma", chain.sigma},
            {"value", lambda}}}}},
        {"gibbs",
         {{"k", gibbs.k},
          {"a", gibbs.a},
          {"b", gibbs.b},
          {"sample_noise_variance", gibbs.sample_noise_variance}}},
        {"init", to_string(init.kind)}}},
      {"result",
       {{"accept_rate", chain_result.accept_rate},
        {"diverged", chain_result.diverged},
        {"iterates_kept", chain_result.iterates_kept}}},
      {"outputs", {{"estimate_csv", estimate_path.string()}}}};

  if (data.truth) {
    const EvalReport eval =
        evaluate_estimate(chain_result.mean, *data.truth, data.mask, rank_tol);
    manifest["result"]["mse"] = eval.mse;
    manifest["result"]["nmse"] = eval.nmse;
    manifest["result"]["pred"] = eval.pred;
    manifest["result"]["est_rank"] = eval.est_rank;
    std::printf("MSE %.6g  NMSE %.6g  Pred %.6g  rank %d\n", eval.mse, eval.nmse,
                eval.pred, eval.est_rank);
  }
  if (chain_result.diverged) {
    std::printf("warning: chain diverged; try a smaller --step-size\n");
  }

  const std::filesystem::path manifest_path = dir / (name + "_manifest.json");
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << '\n';
  std::printf("wrote %s\n", estimate_path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-rank matrix completion with a spectral scaled Student prior"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // --- simulate ------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Synthetic benchmark replicates");
  SimulateOptions sim;
  ChainFlags sim_chain;
  std::string sim_sampler = "lmc";
  std::string sim_out_dir, sim_name = "simulate";
  simulate->add_option("--setting", sim.setting, "1 = exact low rank, 2 = approximate")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();
  simulate->add_option("--m", sim.rows, "Rows")->capture_default_str();
  simulate->add_option("--p", sim.cols, "Columns")->capture_default_str();
  simulate->add_option("--rank", sim.rank, "Target rank r")->capture_default_str();
  simulate->add_option("--upsilon", sim.upsilon, "Missing rate in [0,1)")
      ->capture_default_str();
  simulate->add_option("--noise-sd", sim.noise_sd, "Observation noise sd")
      ->capture_default_str();
  simulate->add_option("--replicates", sim.replicates, "Simulation replicates")
      ->capture_default_str();
  simulate->add_option("--sampler", sim_sampler, "lmc | mala | gibbs")
      ->check(CLI::IsMember({"lmc", "mala", "gibbs"}))
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "Master seed")->capture_default_str();
  simulate->add_option("--rank-tol", sim.rank_rel_tol, "Rank estimate threshold")
      ->capture_default_str();
  simulate->add_option("--out-dir", sim_out_dir, "Output directory");
  simulate->add_option("--name", sim_name, "Output file prefix")->capture_default_str();
  simulate->add_flag("--quiet", sim.quiet, "Suppress the summary printout");
  add_chain_flags(simulate, sim_chain);

  // --- inpaint -------------------------------------------------------------
  auto* inpaint = app.add_subcommand("inpaint", "Grayscale image inpainting");
  InpaintOptions inp;
  ChainFlags inp_chain;
  inp_chain.init = "softimpute";
  inp_chain.sigma = 5.0;  // gray-level noise floor for 0..255 images
  std::string inp_image, inp_sampler = "lmc";
  std::string inp_out_dir, inp_name = "inpaint";
  inpaint->add_option("--image", inp_image, "Input PGM image (P2 or P5)");
  inpaint->add_option("--synthetic-size", inp.synthetic_size,
                      "Generated test image size when --image is omitted")
      ->capture_default_str();
  inpaint->add_option("--upsilon", inp.upsilon, "Missing pixel rate")
      ->capture_default_str();
  inpaint->add_option("--repeats", inp.repeats, "Masking repeats to average")
      ->capture_default_str();
  inpaint->add_option("--sampler", inp_sampler, "lmc | mala | gibbs")
      ->check(CLI::IsMember({"lmc", "mala", "gibbs"}))
      ->capture_default_str();
  inpaint->add_option("--seed", inp.seed, "Master seed")->capture_default_str();
  inpaint->add_option("--rank-tol", inp.rank_rel_tol, "Rank estimate threshold")
      ->capture_default_str();
  inpaint->add_option("--out-dir", inp_out_dir, "Output directory");
  inpaint->add_option("--name", inp_name, "Output file prefix")->capture_default_str();
  inpaint->add_flag("--quiet", inp.quiet, "Suppress the summary printout");
  add_chain_flags(inpaint, inp_chain);

  // --- bench ---------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "Wall-clock comparison of the samplers");
  BenchOptions ben;
  ChainFlags ben_chain;
  std::string ben_out_dir, ben_name = "bench";
  bench->add_option("--m", ben.rows, "Rows")->capture_default_str();
  bench->add_option("--rank", ben.rank, "Target rank r")->capture_default_str();
  bench->add_option("--upsilon", ben.upsilon, "Missing rate")->capture_default_str();
  bench->add_option("--p-list", ben.col_list, "Column counts to sweep")
      ->delimiter(',')
      ->capture_default_str();
  bench->add_option("--iters,-T", ben.iterations, "Iterations per timed chain")
      ->capture_default_str();
  bench->add_option("--runs", ben.runs, "Timed repetitions (median reported)")
      ->capture_default_str();
  bench->add_option("--seed", ben.seed, "Master seed")->capture_default_str();
  bench->add_option("--noise-sd", ben.noise_sd, "Observation noise sd")
      ->capture_default_str();
  bench->add_option("--tau", ben_chain.tau, "Prior scale tau")->capture_default_str();
  bench->add_option("--step-size", ben_chain.step_size, "Langevin step size");
  bench->add_option("--sigma", ben_chain.sigma, "Noise scale sigma")
      ->capture_default_str();
  bench->add_option("--out-dir", ben_out_dir, "Output directory");
  bench->add_option("--name", ben_name, "Output file prefix")->capture_default_str();
  bench->add_flag("--quiet", ben.quiet, "Suppress the summary printout");

  // --- bound ---------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "Oracle-inequality constants and bound");
  BoundOptions bnd;
  bound->add_option("--m", bnd.rows, "Rows")->capture_default_str();
  bound->add_option("--p", bnd.cols, "Columns")->capture_default_str();
  bound->add_option("--rank", bnd.rank, "Rank r of the comparison matrix")
      ->capture_default_str();
  bound->add_option("--n", bnd.n, "Sample size")->capture_default_str();
  bound->add_option("--sigma", bnd.sigma, "Noise bound sigma")->capture_default_str();
  bound->add_option("--xi", bnd.xi, "Moment-growth constant xi")->capture_default_str();
  bound->add_option("--L", bnd.L, "Sup-norm bound L")->capture_default_str();
  bound->add_option("--eps", bnd.eps, "Confidence level epsilon")->capture_default_str();
  bound->add_option("--c-margin", bnd.c_margin, "Margin above the c threshold")
      ->capture_default_str();
  bound->add_option("--tau", bnd.tau, "Prior scale (default: recommended)");
  bound->add_option("--approx-err", bnd.approx_err,
                    "Weighted approximation error of the comparison matrix")
      ->capture_default_str();

  // --- sample --------------------------------------------------------------
  auto* sample = app.add_subcommand("sample", "One chain on one dataset");
  std::string smp_data, smp_truth, smp_sampler = "lmc";
  std::string smp_out_dir, smp_name = "sample";
  int smp_rows = 0, smp_cols = 0;
  std::uint64_t smp_seed = 1;
  double smp_rank_tol = 1e-2;
  ChainFlags smp_chain;
  sample->add_option("--data", smp_data, "Observations CSV (header i,j,value)")
      ->required();
  sample->add_option("--m", smp_rows, "Rows")->required();
  sample->add_option("--p", smp_cols, "Columns")->required();
  sample->add_option("--truth", smp_truth, "Dense truth CSV for evaluation");
  sample->add_option("--sampler", smp_sampler, "lmc | mala | gibbs")
      ->check(CLI::IsMember({"lmc", "mala", "gibbs"}))
      ->capture_default_str();
  sample->add_option("--seed", smp_seed, "Seed")->capture_default_str();
  sample->add_option("--rank-tol", smp_rank_tol, "Rank estimate threshold")
      ->capture_default_str();
  sample->add_option("--out-dir", smp_out_dir, "Output directory");
  sample->add_option("--name", smp_name, "Output file prefix")->capture_default_str();
  add_chain_flags(sample, smp_chain);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      sim.sampler = parse_sampler(sim_sampler);
      sim.chain = to_chain(sim_chain);
      sim.gibbs = to_gibbs(sim_chain);
      sim.init = to_init(sim_chain);
      sim.out_dir = sim_out_dir;
      sim.name = sim_name;
      run_simulate(sim, &std::cout);
      return 0;
    }
    if (inpaint->parsed()) {
      inp.sampler = parse_sampler(inp_sampler);
      inp.image = inp_image;
      inp.chain = to_chain(inp_chain);
      inp.gibbs = to_gibbs(inp_chain);
      inp.init = to_init(inp_chain);
      inp.out_dir = inp_out_dir;
      inp.name = inp_name;
      run_inpaint(inp, &std::cout);
      return 0;
    }
    if (bench->parsed()) {
      ben.chain = to_chain(ben_chain);
      ben.gibbs = to_gibbs(ben_chain);
      ben.out_dir = ben_out_dir;
      ben.name = ben_name;
      run_bench(ben, &std::cout);
      return 0;
    }
    if (bound->parsed()) {
      const BoundReport report = compute_bound_report(bnd);
      std::printf("C1          = %.10g\n", report.constants.c1);
      std::printf("C2          = %.10g\n", report.constants.c2);
      std::printf("C threshold = %.10g (C2 + 1.5*C1)\n", report.c_threshold);
      std::printf("C           = %.10g\n", report.constants.c);
      std::printf("curly C     = %.10g (reported as 6C + margin)\n", report.curly_c);
      std::printf("lambda*     = %.10g\n", report.constants.lambda_star);
      std::printf("alpha       = %.10g\n", report.constants.alpha);
      std::printf("beta        = %.10g\n", report.constants.beta);
      std::printf("delta       = %.10g\n", report.constants.delta);
      std::printf("tau         = %.10g\n", report.tau);
      std::printf("bound RHS   = %.10g\n", report.rhs);
      return 0;
    }
    if (sample->parsed()) {
      return run_sample_command(smp_data, smp_truth, smp_rows, smp_cols, smp_sampler,
                                smp_seed, smp_chain, smp_out_dir, smp_name,
                                smp_rank_tol);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
