// Python bindings for the core operations.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "studentmc/data.hpp"
#include "studentmc/harness.hpp"
#include "studentmc/io.hpp"
#include "studentmc/metrics.hpp"
#include "studentmc/pacbayes.hpp"
#include "studentmc/posterior.hpp"
#include "studentmc/prior.hpp"
#include "studentmc/samplers.hpp"
#include "studentmc/synth.hpp"
#include "studentmc/version.hpp"

namespace py = pybind11;
using namespace studentmc;

namespace {

Mask make_mask(int rows, int cols, const std::vector<std::pair<int, int>>& entries) {
  std::vector<MaskEntry> converted;
  converted.reserve(entries.size());
  for (const auto& [i, j] : entries) {
    converted.push_back({i, j});
  }
  return Mask(Shape{rows, cols}, std::move(converted));
}

std::vector<std::pair<int, int>> mask_entries(const Mask& mask) {
  std::vector<std::pair<int, int>> out;
  out.reserve(mask.entries().size());
  for (const auto& e : mask.entries()) {
    out.emplace_back(e.row, e.col);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Matrix completion with a spectral scaled Student prior, sampled by "
            "Langevin Monte Carlo";
  m.attr("__version__") = kVersion;

  py::class_<Mask>(m, "Mask")
      .def(py::init(&make_mask), py::arg("rows"), py::arg("cols"), py::arg("entries"))
      .def_property_readonly("rows", [](const Mask& mk) { return mk.shape().rows; })
      .def_property_readonly("cols", [](const Mask& mk) { return mk.shape().cols; })
      .def_property_readonly("entries", &mask_entries)
      .def("__len__", &Mask::size);

  py::class_<Dataset>(m, "Dataset")
      .def(py::init([](const Mask& mask, const Vector& values,
                       const std::optional<Matrix>& truth) {
             return Dataset(mask, values, truth);
           }),
           py::arg("mask"), py::arg("values"), py::arg("truth") = std::nullopt)
      .def_readonly("mask", &Dataset::mask)
      .def_readonly("values", &Dataset::values)
      .def_readonly("truth", &Dataset::truth)
      .def_property_readonly("n", &Dataset::observed)
      .def("zero_filled", &Dataset::zero_filled);

  py::class_<PriorConfig>(m, "PriorConfig")
      .def(py::init([](double tau) { return PriorConfig{tau}; }), py::arg("tau") = 1.0)
      .def_readwrite("tau", &PriorConfig::tau);

  py::class_<PosteriorSpec>(m, "PosteriorSpec")
      .def(py::init<Dataset, PriorConfig, double>(), py::arg("data"), py::arg("prior"),
           py::arg("lam"))
      .def_readonly("data", &PosteriorSpec::data)
      .def_readonly("prior", &PosteriorSpec::prior)
      .def_readonly("lam", &PosteriorSpec::lambda);

  py::class_<LmcConfig>(m, "LmcConfig")
      .def(py::init([](double step_size, int iterations, int burnin, std::uint64_t seed,
                       bool store_iterates) {
             return LmcConfig{step_size, iterations, burnin, seed, store_iterates};
           }),
           py::arg("step_size"), py::arg("iterations"), py::arg("burnin"),
           py::arg("seed") = 0, py::arg("store_iterates") = false)
      .def_readwrite("step_size", &LmcConfig::step_size)
      .def_readwrite("iterations", &LmcConfig::iterations)
      .def_readwrite("burnin", &LmcConfig::burnin)
      .def_readwrite("seed", &LmcConfig::seed);

  py::class_<GibbsConfig>(m, "GibbsConfig")
      .def(py::init([](int k, double a, double b, int iterations, int burnin,
                       std::uint64_t seed, bool sample_noise_variance) {
             GibbsConfig cfg{k, a, b, iterations, burnin, seed};
             cfg.sample_noise_variance = sample_noise_variance;
             return cfg;
           }),
           py::arg("k") = 10, py::arg("a") = 1.0, py::arg("b") = 0.01,
           py::arg("iterations") = 200, py::arg("burnin") = 100, py::arg("seed") = 0,
           py::arg("sample_noise_variance") = true)
      .def_readwrite("k", &GibbsConfig::k)
      .def_readwrite("a", &GibbsConfig::a)
      .def_readwrite("b", &GibbsConfig::b)
      .def_readwrite("iterations", &GibbsConfig::iterations)
      .def_readwrite("burnin", &GibbsConfig::burnin)
      .def_readwrite("seed", &GibbsConfig::seed)
      .def_readwrite("sample_noise_variance", &GibbsConfig::sample_noise_variance);

  py::class_<ChainResult>(m, "ChainResult")
      .def_readonly("mean", &ChainResult::mean)
      .def_readonly("accept_rate", &ChainResult::accept_rate)
      .def_readonly("diverged", &ChainResult::diverged)
      .def_readonly("iterates_kept", &ChainResult::iterates_kept)
      .def_readonly("iterates", &ChainResult::iterates);

  py::class_<EvalReport>(m, "EvalReport")
      .def_readonly("mse", &EvalReport::mse)
      .def_readonly("nmse", &EvalReport::nmse)
      .def_readonly("pred", &EvalReport::pred)
      .def_readonly("est_rank", &EvalReport::est_rank);

  py::class_<NoiseBounds>(m, "NoiseBounds")
      .def(py::init([](double sigma, double xi, double L) {
             return NoiseBounds{sigma, xi, L};
           }),
           py::arg("sigma") = 1.0, py::arg("xi") = 1.0, py::arg("L") = 1.0)
      .def_readwrite("sigma", &NoiseBounds::sigma)
      .def_readwrite("xi", &NoiseBounds::xi)
      .def_readwrite("L", &NoiseBounds::L);

  py::class_<TheoryConstants>(m, "TheoryConstants")
      .def_readonly("c1", &TheoryConstants::c1)
      .def_readonly("c2", &TheoryConstants::c2)
      .def_readonly("c", &TheoryConstants::c)
      .def_readonly("lambda_star", &TheoryConstants::lambda_star)
      .def_readonly("alpha", &TheoryConstants::alpha)
      .def_readonly("beta", &TheoryConstants::beta)
      .def_readonly("delta", &TheoryConstants::delta);

  // Masked projection and metrics.
  m.def("project_omega", &project_omega, py::arg("m"), py::arg("mask"));
  m.def("empirical_risk", &empirical_risk, py::arg("m"), py::arg("data"));
  m.def("weighted_frobenius_sq",
        py::overload_cast<const Matrix&>(&weighted_frobenius_sq), py::arg("a"));
  m.def("weighted_frobenius_sq",
        py::overload_cast<const Matrix&, const Matrix&>(&weighted_frobenius_sq),
        py::arg("a"), py::arg("weights"));
  m.def("metric_mse", &metric_mse, py::arg("est"), py::arg("truth"));
  m.def("metric_nmse", &metric_nmse, py::arg("est"), py::arg("truth"));
  m.def("metric_pred", &metric_pred, py::arg("est"), py::arg("truth"), py::arg("mask"));
  m.def("estimate_rank", &estimate_rank, py::arg("m"), py::arg("rel_tol") = 1e-2);

  // Prior and posterior.
  m.def("log_prior_logdet", &log_prior_logdet, py::arg("m"), py::arg("prior"));
  m.def("log_prior_singular", &log_prior_singular, py::arg("m"), py::arg("prior"));
  m.def("grad_log_prior", &grad_log_prior, py::arg("m"), py::arg("prior"));
  m.def(
      "ridge_resolvent",
      [](const Matrix& mat, const PriorConfig& prior) {
        return ridge_resolvent(mat, prior);
      },
      py::arg("m"), py::arg("prior"));
  m.def("log_posterior_unnorm", &log_posterior_unnorm, py::arg("spec"), py::arg("m"));
  m.def("grad_log_posterior", &grad_log_posterior, py::arg("spec"), py::arg("m"));
  m.def("finite_diff_grad_check", &finite_diff_grad_check, py::arg("spec"),
        py::arg("m"), py::arg("eps") = 1e-5);

  // Chains.
  m.def("lmc_step", &lmc_step, py::arg("spec"), py::arg("current"),
        py::arg("step_size"), py::arg("noise"));
  m.def("run_lmc", &run_lmc, py::arg("spec"), py::arg("config"), py::arg("init"));
  m.def("mala_propose", &mala_propose, py::arg("spec"), py::arg("current"),
        py::arg("step_size"), py::arg("noise"));
  m.def("mala_log_q", &mala_log_q, py::arg("spec"), py::arg("to"), py::arg("from_"),
        py::arg("step_size"));
  m.def("mala_accept_prob", &mala_accept_prob, py::arg("spec"), py::arg("current"),
        py::arg("proposal"), py::arg("step_size"));
  m.def("run_mala", &run_mala, py::arg("spec"), py::arg("config"), py::arg("init"));
  m.def(
      "run_gibbs",
      [](const Dataset& data, const GibbsConfig& cfg, double sigma2) {
        return run_gibbs(data, cfg, sigma2);
      },
      py::arg("data"), py::arg("config"), py::arg("sigma2"));
  m.def("gibbs_warm_start", &gibbs_warm_start, py::arg("data"), py::arg("sigma2"),
        py::arg("seed"), py::arg("iterations") = 50, py::arg("k") = 10,
        py::arg("a") = 1.0, py::arg("b") = 0.01,
        py::arg("sample_noise_variance") = true);

  // Synthetic data and initializers.
  m.def(
      "gen_exact_lowrank",
      [](int rows, int cols, int rank, std::uint64_t seed) {
        SynthConfig cfg;
        cfg.rows = rows;
        cfg.cols = cols;
        cfg.rank = rank;
        cfg.seed = seed;
        const LowRankFactors out = gen_exact_lowrank(cfg);
        return py::make_tuple(out.truth, out.u, out.v);
      },
      py::arg("rows"), py::arg("cols"), py::arg("rank"), py::arg("seed"));
  m.def(
      "gen_approx_lowrank",
      [](int rows, int cols, int rank, std::uint64_t seed, double perturb_weight,
         int perturb_cols) {
        SynthConfig cfg;
        cfg.rows = rows;
        cfg.cols = cols;
        cfg.rank = rank;
        cfg.seed = seed;
        cfg.setting = 2;
        cfg.perturb_weight = perturb_weight;
        cfg.perturb_cols = perturb_cols;
        return gen_approx_lowrank(cfg);
      },
      py::arg("rows"), py::arg("cols"), py::arg("rank"), py::arg("seed"),
      py::arg("perturb_weight") = 0.1, py::arg("perturb_cols") = 50);
  m.def(
      "gen_mask_uniform",
      [](int rows, int cols, double upsilon, std::uint64_t seed) {
        return gen_mask_uniform(Shape{rows, cols}, upsilon, seed);
      },
      py::arg("rows"), py::arg("cols"), py::arg("upsilon"), py::arg("seed"));
  m.def("add_noise", &add_noise, py::arg("truth"), py::arg("mask"),
        py::arg("noise_sd"), py::arg("seed"));
  m.def("soft_impute", &soft_impute, py::arg("data"), py::arg("shrink"),
        py::arg("max_iterations") = 100, py::arg("tol") = 1e-4);
  m.def("column_mean_fill", &column_mean_fill, py::arg("data"));
  m.def("synthetic_smooth_image", &synthetic_smooth_image, py::arg("rows"),
        py::arg("cols"));

  // Oracle-inequality arithmetic.
  m.def("compute_constants", &compute_constants, py::arg("noise_bounds"),
        py::arg("c_margin") = 1.0);
  m.def("lambda_star", &lambda_star, py::arg("n"), py::arg("constants"));
  m.def(
      "alpha_beta",
      [](double lam, long n, const TheoryConstants& tc) {
        const AlphaBeta ab = alpha_beta(lam, n, tc);
        return py::make_tuple(ab.alpha, ab.beta);
      },
      py::arg("lam"), py::arg("n"), py::arg("constants"));
  m.def("finalize_constants", &finalize_constants, py::arg("constants"), py::arg("n"));
  m.def("kl_translation_bound", &kl_translation_bound, py::arg("r"), py::arg("m"),
        py::arg("p"), py::arg("frob_mbar"), py::arg("tau"));
  m.def("recommended_tau", &recommended_tau, py::arg("r"), py::arg("m"), py::arg("p"),
        py::arg("n"));
  m.def("oracle_bound_rhs", &oracle_bound_rhs, py::arg("approx_err"), py::arg("r"),
        py::arg("m"), py::arg("p"), py::arg("n"), py::arg("eps"), py::arg("constants"),
        py::arg("tau") = 0.0);

  // File formats.
  m.def("read_matrix_csv", &read_matrix_csv, py::arg("path"));
  m.def("write_matrix_csv", &write_matrix_csv, py::arg("path"), py::arg("m"));
  m.def(
      "read_image_pgm", [](const std::filesystem::path& p) { return read_image_pgm(p); },
      py::arg("path"));
  m.def("write_image_pgm", &write_image_pgm, py::arg("path"), py::arg("image"),
        py::arg("binary") = true);
}
