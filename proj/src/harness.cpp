#include "studentmc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "studentmc/io.hpp"
#include "studentmc/posterior.hpp"
#include "studentmc/rng.hpp"
#include "studentmc/synth.hpp"
#include "studentmc/version.hpp"

namespace studentmc {

namespace {

using nlohmann::json;

// Stream labels for per-replicate seed derivation.
constexpr std::uint64_t kStreamTruth = 1;
constexpr std::uint64_t kStreamMask = 2;
constexpr std::uint64_t kStreamNoise = 3;
constexpr std::uint64_t kStreamInit = 4;
constexpr std::uint64_t kStreamChain = 5;

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_report_csv(const std::filesystem::path& path, const char* index_name,
                      const std::vector<ReplicateReport>& reports) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  out << index_name << ",mse,nmse,pred,est_rank,accept_rate,diverged\n";
  for (const auto& r : reports) {
    out << r.replicate << ',' << fmt(r.eval.mse) << ',' << fmt(r.eval.nmse) << ','
        << fmt(r.eval.pred) << ',' << r.eval.est_rank << ',' << fmt(r.accept_rate)
        << ',' << (r.diverged ? 1 : 0) << '\n';
  }
}

json reports_to_json(const std::vector<ReplicateReport>& reports,
                     const std::vector<json>& seeds) {
  json arr = json::array();
  for (size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    json item{{"index", r.replicate},
              {"mse", r.eval.mse},
              {"nmse", r.eval.nmse},
              {"pred", r.eval.pred},
              {"est_rank", r.eval.est_rank},
              {"accept_rate", r.accept_rate},
              {"diverged", r.diverged},
              {"runtime_seconds", r.eval.runtime_seconds}};
    if (i < seeds.size()) item["seeds"] = seeds[i];
    arr.push_back(std::move(item));
  }
  return arr;
}

json aggregate_json(const Aggregate& a) { return {{"mean", a.mean}, {"std", a.stddev}}; }

void write_manifest(const std::filesystem::path& path, const json& manifest) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error(path.string() + ": cannot open for writing");
  }
  out << manifest.dump(2) << '\n';
}

json chain_json(const ChainSettings& chain, double resolved_lambda,
                double resolved_step) {
  return {{"tau", chain.tau},
          {"step_size", resolved_step},
          {"iterations", chain.iterations},
          {"burnin", chain.burnin},
          {"lambda",
           {{"convention",
             chain.lambda_override > 0.0 ? "absolute" : to_string(chain.lambda_convention)},
            {"sigma", chain.sigma},
            {"value", resolved_lambda}}}};
}

json gibbs_json(const GibbsSettings& gibbs, double sigma2) {
  return {{"k", gibbs.k},
          {"a", gibbs.a},
          {"b", gibbs.b},
          {"sigma2", sigma2},
          {"sample_noise_variance", gibbs.sample_noise_variance}};
}

json init_json(const InitSettings& init, double resolved_shrink) {
  json j{{"kind", to_string(init.kind)}};
  if (init.kind == InitKind::kGibbs) {
    j["gibbs_iterations"] = init.gibbs_iterations;
  } else if (init.kind == InitKind::kSoftImpute) {
    j["soft_impute_shrink"] = resolved_shrink;
    j["soft_impute_iterations"] = init.soft_impute_iterations;
  }
  return j;
}

void print_metric(std::ostream& log, const char* label, const Aggregate& a) {
  const int scale = table_scale(a.mean);
  const double factor = std::pow(10.0, scale);
  char buf[128];
  if (scale > 0) {
    std::snprintf(buf, sizeof(buf), "10^%d x %-5s: %.3f (%.3f)", scale, label,
                  a.mean * factor, a.stddev * factor);
  } else {
    std::snprintf(buf, sizeof(buf), "%-11s: %.3f (%.3f)", label, a.mean, a.stddev);
  }
  log << buf << '\n';
}

struct MetricColumns {
  std::vector<double> mse, nmse, pred, rank;
};

MetricColumns collect(const std::vector<ReplicateReport>& reports) {
  MetricColumns cols;
  for (const auto& r : reports) {
    cols.mse.push_back(r.eval.mse);
    cols.nmse.push_back(r.eval.nmse);
    cols.pred.push_back(r.eval.pred);
    cols.rank.push_back(r.eval.est_rank);
  }
  return cols;
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::kLmc: return "lmc";
    case SamplerKind::kMala: return "mala";
    case SamplerKind::kGibbs: return "gibbs";
  }
  return "?";
}

std::string to_string(InitKind kind) {
  switch (kind) {
    case InitKind::kGibbs: return "gibbs";
    case InitKind::kSoftImpute: return "softimpute";
    case InitKind::kZero: return "zero";
    case InitKind::kRandom: return "random";
  }
  return "?";
}

std::string to_string(LambdaConvention convention) {
  return convention == LambdaConvention::kQuarterSigmaSq ? "n/(4*sigma^2)"
                                                         : "n/(2*sigma^2)";
}

SamplerKind parse_sampler(const std::string& name) {
  if (name == "lmc") return SamplerKind::kLmc;
  if (name == "mala") return SamplerKind::kMala;
  if (name == "gibbs") return SamplerKind::kGibbs;
  throw std::invalid_argument("unknown sampler '" + name + "'");
}

InitKind parse_init(const std::string& name) {
  if (name == "gibbs") return InitKind::kGibbs;
  if (name == "softimpute") return InitKind::kSoftImpute;
  if (name == "zero") return InitKind::kZero;
  if (name == "random") return InitKind::kRandom;
  throw std::invalid_argument("unknown initializer '" + name + "'");
}

LambdaConvention parse_lambda_convention(const std::string& name) {
  if (name == "n4sigma2") return LambdaConvention::kQuarterSigmaSq;
  if (name == "n2sigma2") return LambdaConvention::kHalfSigmaSq;
  throw std::invalid_argument("unknown lambda convention '" + name + "'");
}

double resolve_step_size(const ChainSettings& chain, Shape shape) {
  if (chain.step_size > 0.0) return chain.step_size;
  return 1.0 / (400.0 * static_cast<double>(shape.rows) * shape.cols);
}

double resolve_lambda(const ChainSettings& chain, long n) {
  if (chain.lambda_override > 0.0) return chain.lambda_override;
  const double sigma2 = chain.sigma * chain.sigma;
  const double divisor = chain.lambda_convention == LambdaConvention::kQuarterSigmaSq
                             ? 4.0 * sigma2
                             : 2.0 * sigma2;
  return static_cast<double>(n) / divisor;
}

double resolve_gibbs_sigma2(const ChainSettings& chain, long n) {
  return static_cast<double>(n) / (2.0 * resolve_lambda(chain, n));
}

double resolve_soft_impute_shrink(const InitSettings& init, const ChainSettings& chain,
                                  Shape shape) {
  if (init.soft_impute_shrink > 0.0) return init.soft_impute_shrink;
  return default_soft_impute_shrink(shape, chain.sigma);
}

Matrix make_init(const Dataset& data, const InitSettings& init,
                 const ChainSettings& chain, const GibbsSettings& gibbs,
                 std::uint64_t seed) {
  const Shape& shape = data.shape();
  switch (init.kind) {
    case InitKind::kGibbs:
      return gibbs_warm_start(data, resolve_gibbs_sigma2(chain, data.observed()),
                              seed, init.gibbs_iterations, gibbs.k, gibbs.a,
                              gibbs.b, gibbs.sample_noise_variance);
    case InitKind::kSoftImpute:
      return soft_impute(data, resolve_soft_impute_shrink(init, chain, shape),
                         init.soft_impute_iterations);
    case InitKind::kZero:
      return Matrix::Zero(shape.rows, shape.cols);
    case InitKind::kRandom: {
      std::mt19937_64 rng(seed);
      return gaussian_matrix(shape.rows, shape.cols, rng);
    }
  }
  throw std::logic_error("make_init: unreachable");
}

std::filesystem::path default_out_dir() {
  if (const char* env = std::getenv("STUDENTMC_OUT_DIR"); env && *env) {
    return env;
  }
  return ".";
}

Aggregate aggregate(const std::vector<double>& values) {
  Aggregate a;
  if (values.empty()) return a;
  double sum = 0.0;
  for (double v : values) sum += v;
  a.mean = sum / values.size();
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.stddev = std::sqrt(ss / (values.size() - 1));
  }
  return a;
}

int table_scale(double mean) {
  if (!(mean > 0.0) || !std::isfinite(mean)) return 0;
  int scale = 0;
  double scaled = mean;
  while (scaled < 1.0 && scale < 4) {
    scaled *= 10.0;
    ++scale;
  }
  return scale;
}

namespace {

struct ChainOutcome {
  Matrix estimate;
  double accept_rate = 1.0;
  bool diverged = false;
};

ChainOutcome run_chain(SamplerKind sampler, const Dataset& data,
                       const ChainSettings& chain, const GibbsSettings& gibbs,
                       const InitSettings& init, double lambda, double step,
                       std::uint64_t init_seed, std::uint64_t chain_seed) {
  ChainOutcome outcome;
  if (sampler == SamplerKind::kGibbs) {
    GibbsConfig gc;
    gc.k = gibbs.k;
    gc.a = gibbs.a;
    gc.b = gibbs.b;
    gc.iterations = chain.iterations;
    gc.burnin = chain.burnin;
    gc.seed = chain_seed;
    gc.sample_noise_variance = gibbs.sample_noise_variance;
    const ChainResult cr =
        run_gibbs(data, gc, resolve_gibbs_sigma2(chain, data.observed()));
    outcome.estimate = cr.mean;
    outcome.accept_rate = cr.accept_rate;
    outcome.diverged = cr.diverged;
    return outcome;
  }
  const Matrix start = make_init(data, init, chain, gibbs, init_seed);
  PosteriorSpec spec(data, PriorConfig{chain.tau}, lambda);
  LmcConfig lc;
  lc.step_size = step;
  lc.iterations = chain.iterations;
  lc.burnin = chain.burnin;
  lc.seed = chain_seed;
  const ChainResult cr = sampler == SamplerKind::kLmc ? run_lmc(spec, lc, start)
                                                      : run_mala(spec, lc, start);
  outcome.estimate = cr.mean;
  outcome.accept_rate = cr.accept_rate;
  outcome.diverged = cr.diverged;
  return outcome;
}

}  // namespace

SimulateResult run_simulate(const SimulateOptions& options, std::ostream* log) {
  if (options.setting != 1 && options.setting != 2) {
    throw std::invalid_argument("run_simulate: setting must be 1 or 2");
  }
  if (options.replicates < 1) {
    throw std::invalid_argument("run_simulate: need at least one replicate");
  }

  const Shape shape{options.rows, options.cols};
  SimulateResult result;
  result.step_size = resolve_step_size(options.chain, shape);

  std::vector<json> seeds;
  for (int rep = 0; rep < options.replicates; ++rep) {
    const std::uint64_t s_truth = derive_seed(options.seed, kStreamTruth, rep);
    const std::uint64_t s_mask = derive_seed(options.seed, kStreamMask, rep);
    const std::uint64_t s_noise = derive_seed(options.seed, kStreamNoise, rep);
    const std::uint64_t s_init = derive_seed(options.seed, kStreamInit, rep);
    const std::uint64_t s_chain = derive_seed(options.seed, kStreamChain, rep);

    SynthConfig scfg;
    scfg.rows = options.rows;
    scfg.cols = options.cols;
    scfg.rank = options.rank;
    scfg.upsilon = options.upsilon;
    scfg.noise_sd = options.noise_sd;
    scfg.setting = options.setting;
    scfg.seed = s_truth;
    const Matrix truth =
        options.setting == 1 ? gen_exact_lowrank(scfg).truth : gen_approx_lowrank(scfg);
    const Mask mask = gen_mask_uniform(shape, options.upsilon, s_mask);
    const Dataset data = add_noise(truth, mask, options.noise_sd, s_noise);

    result.n = data.observed();
    result.lambda = resolve_lambda(options.chain, result.n);

    const auto start = std::chrono::steady_clock::now();
    const ChainOutcome outcome =
        run_chain(options.sampler, data, options.chain, options.gibbs, options.init,
                  result.lambda, result.step_size, s_init, s_chain);

    ReplicateReport report;
    report.replicate = rep + 1;
    report.eval = evaluate_estimate(outcome.estimate, truth, mask, options.rank_rel_tol);
    report.eval.runtime_seconds = elapsed_seconds(start);
    report.accept_rate = outcome.accept_rate;
    report.diverged = outcome.diverged;
    result.any_diverged = result.any_diverged || outcome.diverged;
    result.replicates.push_back(report);
    seeds.push_back(json{{"truth", s_truth},
                         {"mask", s_mask},
                         {"noise", s_noise},
                         {"init", s_init},
                         {"chain", s_chain}});
  }

  const MetricColumns cols = collect(result.replicates);
  result.mse = aggregate(cols.mse);
  result.nmse = aggregate(cols.nmse);
  result.pred = aggregate(cols.pred);
  result.est_rank = aggregate(cols.rank);

  const std::filesystem::path dir =
      options.out_dir.empty() ? default_out_dir() : options.out_dir;
  std::filesystem::create_directories(dir);
  result.csv_path = dir / (options.name + "_replicates.csv");
  result.manifest_path = dir / (options.name + "_manifest.json");
  write_report_csv(result.csv_path, "replicate", result.replicates);

  json manifest{
      {"command", "simulate"},
      {"version", kVersion},
      {"config",
       {{"setting", options.setting},
        {"m", options.rows},
        {"p", options.cols},
        {"rank", options.rank},
        {"upsilon", options.upsilon},
        {"noise_sd", options.noise_sd},
        {"replicates", options.replicates},
        {"sampler", to_string(options.sampler)},
        {"seed", options.seed},
        {"n", result.n},
        {"rank_rel_tol", options.rank_rel_tol},
        {"chain", chain_json(options.chain, result.lambda, result.step_size)},
        {"gibbs", gibbs_json(options.gibbs, resolve_gibbs_sigma2(options.chain, result.n))},
        {"init", init_json(options.init,
                           resolve_soft_impute_shrink(options.init, options.chain, shape))}}},
      {"replicates", reports_to_json(result.replicates, seeds)},
      {"aggregate",
       {{"mse", aggregate_json(result.mse)},
        {"nmse", aggregate_json(result.nmse)},
        {"pred", aggregate_json(result.pred)},
        {"est_rank", aggregate_json(result.est_rank)}}},
      {"outputs", {{"replicates_csv", result.csv_path.string()}}}};
  write_manifest(result.manifest_path, manifest);

  if (log && !options.quiet) {
    *log << "simulate: setting=" << options.setting << " m=" << options.rows
         << " p=" << options.cols << " rank=" << options.rank
         << " upsilon=" << options.upsilon << " sampler=" << to_string(options.sampler)
         << " replicates=" << options.replicates << '\n';
    *log << "n=" << result.n << " lambda=" << result.lambda
         << " step=" << result.step_size << " T=" << options.chain.iterations
         << " burnin=" << options.chain.burnin << " tau=" << options.chain.tau
         << " init=" << to_string(options.init.kind) << '\n';
    print_metric(*log, "MSE", result.mse);
    print_metric(*log, "NMSE", result.nmse);
    print_metric(*log, "Pred", result.pred);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "Rank       : %.2f (%.2f)", result.est_rank.mean,
                  result.est_rank.stddev);
    *log << buf << '\n';
    if (options.sampler == SamplerKind::kMala) {
      std::vector<double> rates;
      for (const auto& r : result.replicates) rates.push_back(r.accept_rate);
      std::snprintf(buf, sizeof(buf), "accept rate: %.3f", aggregate(rates).mean);
      *log << buf << '\n';
    }
    if (result.any_diverged) {
      *log << "warning: at least one chain diverged; try a smaller --step-size\n";
    }
    *log << "wrote " << result.csv_path.string() << " and "
         << result.manifest_path.string() << '\n';
  }
  return result;
}

InpaintResult run_inpaint(const InpaintOptions& options, std::ostream* log) {
  if (options.repeats < 1) {
    throw std::invalid_argument("run_inpaint: need at least one repeat");
  }
  Matrix image;
  std::string source;
  if (!options.image.empty()) {
    image = read_image_pgm(options.image);
    source = options.image.string();
  } else {
    image = synthetic_smooth_image(options.synthetic_size, options.synthetic_size);
    source = "synthetic:" + std::to_string(options.synthetic_size);
  }
  const Shape shape{static_cast<int>(image.rows()), static_cast<int>(image.cols())};

  InpaintResult result;
  result.step_size = resolve_step_size(options.chain, shape);

  std::vector<json> seeds;
  Matrix first_estimate;
  for (int rep = 0; rep < options.repeats; ++rep) {
    const std::uint64_t s_mask = derive_seed(options.seed, kStreamMask, rep);
    const std::uint64_t s_init = derive_seed(options.seed, kStreamInit, rep);
    const std::uint64_t s_chain = derive_seed(options.seed, kStreamChain, rep);

    const Mask mask = gen_mask_uniform(shape, options.upsilon, s_mask);
    const Dataset data = add_noise(image, mask, 0.0, 0);
    result.n = data.observed();
    result.lambda = resolve_lambda(options.chain, result.n);

    const auto start = std::chrono::steady_clock::now();
    const ChainOutcome outcome =
        run_chain(options.sampler, data, options.chain, options.gibbs, options.init,
                  result.lambda, result.step_size, s_init, s_chain);

    ReplicateReport report;
    report.replicate = rep + 1;
    report.eval = evaluate_estimate(outcome.estimate, image, mask, options.rank_rel_tol);
    report.eval.runtime_seconds = elapsed_seconds(start);
    report.accept_rate = outcome.accept_rate;
    report.diverged = outcome.diverged;
    result.any_diverged = result.any_diverged || outcome.diverged;
    result.repeats.push_back(report);
    seeds.push_back(json{{"mask", s_mask}, {"init", s_init}, {"chain", s_chain}});
    if (rep == 0) first_estimate = outcome.estimate;
  }

  const MetricColumns cols = collect(result.repeats);
  result.mse = aggregate(cols.mse);
  result.nmse = aggregate(cols.nmse);
  result.pred = aggregate(cols.pred);
  result.est_rank = aggregate(cols.rank);

  const std::filesystem::path dir =
      options.out_dir.empty() ? default_out_dir() : options.out_dir;
  std::filesystem::create_directories(dir);
  result.csv_path = dir / (options.name + "_repeats.csv");
  result.manifest_path = dir / (options.name + "_manifest.json");
  write_report_csv(result.csv_path, "repeat", result.repeats);
  if (options.write_restored) {
    result.restored_path = dir / (options.name + "_restored.pgm");
    write_image_pgm(result.restored_path, first_estimate);
  }

  json manifest{
      {"command", "inpaint"},
      {"version", kVersion},
      {"config",
       {{"image", source},
        {"height", shape.rows},
        {"width", shape.cols},
        {"upsilon", options.upsilon},
        {"repeats", options.repeats},
        {"sampler", to_string(options.sampler)},
        {"seed", options.seed},
        {"n", result.n},
        {"rank_rel_tol", options.rank_rel_tol},
        {"pixel_scale", "raw [0,255], no centering"},
        {"chain", chain_json(options.chain, result.lambda, result.step_size)},
        {"gibbs", gibbs_json(options.gibbs, resolve_gibbs_sigma2(options.chain, result.n))},
        {"init", init_json(options.init,
                           resolve_soft_impute_shrink(options.init, options.chain, shape))}}},
      {"repeats", reports_to_json(result.repeats, seeds)},
      {"aggregate",
       {{"mse", aggregate_json(result.mse)},
        {"nmse", aggregate_json(result.nmse)},
        {"pred", aggregate_json(result.pred)},
        {"est_rank", aggregate_json(result.est_rank)}}},
      {"outputs",
       {{"repeats_csv", result.csv_path.string()},
        {"restored_image", result.restored_path.string()}}}};
  write_manifest(result.manifest_path, manifest);

  if (log && !options.quiet) {
    *log << "inpaint: image=" << source << " upsilon=" << options.upsilon
         << " sampler=" << to_string(options.sampler) << " repeats=" << options.repeats
         << '\n';
    *log << "n=" << result.n << " lambda=" << result.lambda
         << " step=" << result.step_size << " init=" << to_string(options.init.kind)
         << '\n';
    print_metric(*log, "MSE", result.mse);
    print_metric(*log, "NMSE", result.nmse);
    print_metric(*log, "Pred", result.pred);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "Rank       : %.2f (%.2f)", result.est_rank.mean,
                  result.est_rank.stddev);
    *log << buf << '\n';
    if (result.any_diverged) {
      *log << "warning: at least one chain diverged; try a smaller --step-size\n";
    }
    *log << "wrote " << result.csv_path.string() << " and "
         << result.manifest_path.string() << '\n';
  }
  return result;
}

BenchResult run_bench(const BenchOptions& options, std::ostream* log) {
  if (options.iterations < 1 || options.runs < 1) {
    throw std::invalid_argument("run_bench: iterations and runs must be positive");
  }

  BenchResult result;
  const std::filesystem::path dir =
      options.out_dir.empty() ? default_out_dir() : options.out_dir;
  std::filesystem::create_directories(dir);
  result.csv_path = dir / (options.name + "_timings.csv");
  result.manifest_path = dir / (options.name + "_manifest.json");

  const auto median_time = [&](const std::function<void()>& body) {
    std::vector<double> times;
    for (int run = 0; run < options.runs; ++run) {
      const auto start = std::chrono::steady_clock::now();
      body();
      times.push_back(elapsed_seconds(start));
    }
    std::sort(times.begin(), times.end());
    return times[times.size() / 2];
  };

  for (size_t pi = 0; pi < options.col_list.size(); ++pi) {
    const int cols = options.col_list[pi];
    const Shape shape{options.rows, cols};
    SynthConfig scfg;
    scfg.rows = options.rows;
    scfg.cols = cols;
    scfg.rank = options.rank;
    scfg.upsilon = options.upsilon;
    scfg.noise_sd = options.noise_sd;
    scfg.seed = derive_seed(options.seed, kStreamTruth, pi);
    const Matrix truth = gen_exact_lowrank(scfg).truth;
    const Mask mask =
        gen_mask_uniform(shape, options.upsilon, derive_seed(options.seed, kStreamMask, pi));
    const Dataset data =
        add_noise(truth, mask, options.noise_sd, derive_seed(options.seed, kStreamNoise, pi));

    const double lambda = resolve_lambda(options.chain, data.observed());
    const double gibbs_sigma2 = resolve_gibbs_sigma2(options.chain, data.observed());
    const double step = resolve_step_size(options.chain, shape);
    PosteriorSpec spec(data, PriorConfig{options.chain.tau}, lambda);
    LmcConfig lc;
    lc.step_size = step;
    lc.iterations = options.iterations;
    lc.burnin = 0;
    lc.seed = derive_seed(options.seed, kStreamChain, pi);
    const Matrix zero = Matrix::Zero(shape.rows, shape.cols);

    result.rows.push_back(
        {"lmc", cols, 0, median_time([&] { run_lmc(spec, lc, zero); })});
    result.rows.push_back(
        {"mala", cols, 0, median_time([&] { run_mala(spec, lc, zero); })});

    const int k_full = std::min(options.rows, cols);
    const int k_half = std::max(1, k_full / 2);
    for (const int k : {k_full, k_half}) {
      GibbsConfig gc;
      gc.k = k;
      gc.a = options.gibbs.a;
      gc.b = options.gibbs.b;
      gc.iterations = options.iterations;
      gc.burnin = 0;
      gc.seed = derive_seed(options.seed, kStreamChain, pi);
      gc.sample_noise_variance = options.gibbs.sample_noise_variance;
      result.rows.push_back({k == k_full ? "gibbs_kfull" : "gibbs_khalf", cols, k,
                             median_time([&] { run_gibbs(data, gc, gibbs_sigma2); })});
    }
  }

  std::ofstream csv(result.csv_path);
  if (!csv) {
    throw std::runtime_error(result.csv_path.string() + ": cannot open for writing");
  }
  csv << "sampler,p,k,seconds\n";
  for (const auto& row : result.rows) {
    csv << row.sampler << ',' << row.cols << ',' << row.k << ',' << fmt(row.seconds)
        << '\n';
  }

  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back({{"sampler", row.sampler},
                    {"p", row.cols},
                    {"k", row.k},
                    {"seconds", row.seconds}});
  }
  json manifest{{"command", "bench"},
                {"version", kVersion},
                {"config",
                 {{"m", options.rows},
                  {"rank", options.rank},
                  {"upsilon", options.upsilon},
                  {"p_list", options.col_list},
                  {"iterations", options.iterations},
                  {"runs", options.runs},
                  {"seed", options.seed},
                  {"noise_sd", options.noise_sd},
                  {"chain", chain_json(options.chain, 0.0, 0.0)},
                  {"gibbs", gibbs_json(options.gibbs, 0.0)}}},
                {"timings", rows},
                {"outputs", {{"timings_csv", result.csv_path.string()}}}};
  write_manifest(result.manifest_path, manifest);

  if (log && !options.quiet) {
    *log << "bench: m=" << options.rows << " rank=" << options.rank
         << " upsilon=" << options.upsilon << " iterations=" << options.iterations
         << " runs=" << options.runs << '\n';
    for (const auto& row : result.rows) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%-12s p=%-4d k=%-4d %.3fs", row.sampler.c_str(),
                    row.cols, row.k, row.seconds);
      *log << buf << '\n';
    }
    *log << "wrote " << result.csv_path.string() << '\n';
  }
  return result;
}

BoundReport compute_bound_report(const BoundOptions& options) {
  NoiseBounds nb{options.sigma, options.xi, options.L};
  const TheoryConstants base = compute_constants(nb, options.c_margin);
  BoundReport report;
  report.constants = finalize_constants(base, options.n);
  report.c_threshold = base.c2 + 1.5 * base.c1;
  report.curly_c = 6.0 * base.c + options.c_margin;
  report.tau = options.tau > 0.0
                   ? options.tau
                   : recommended_tau(options.rank, options.rows, options.cols, options.n);
  report.rhs = oracle_bound_rhs(options.approx_err, options.rank, options.rows,
                                options.cols, options.n, options.eps, base, report.tau);
  return report;
}

}  // namespace studentmc
