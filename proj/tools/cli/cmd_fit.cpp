#include <fstream>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "mmc/baselines.hpp"
#include "mmc/errors.hpp"
#include "mmc/eval.hpp"
#include "mmc/format.hpp"
#include "mmc/log.hpp"
#include "mmc/model_io.hpp"

namespace mmc::cli {
namespace {

struct FitOptions {
  InputOptions input;
  SolverOptions solver;
  BaselineOptions baseline;
  std::string method = "mmc";
  std::string model_path;
  std::string trace_path;
};

void write_baseline_trace(std::ostream& out, const BaselineTrace& trace,
                          std::size_t observed) {
  // objective = 1/2 ||P_Omega(X - Z)||_F^2 recovered from the relative residual.
  out << "iter,objective,step,unorm,vnorm\n";
  for (std::size_t t = 0; t < trace.relative_residuals.size(); ++t) {
    const double r = trace.relative_residuals[t];
    out << (t + 1) << ',' << format_double(0.5 * r * r * static_cast<double>(observed)) << ','
        << format_double(trace.step) << ",,\n";
  }
}

int run_fit(const FitOptions& o, Context&) {
  const MethodKind kind = validated([&] { return parse_method(o.method); });
  MmcConfig config;
  BaselineConfig baseline;
  validated([&] {
    if (kind == MethodKind::Mmc) {
      config = o.solver.to_config();
      config.check();
    } else {
      baseline.method = kind == MethodKind::Svt ? BaselineMethod::Svt : BaselineMethod::Svp;
      baseline.rank = o.solver.rank;
      baseline.step = o.baseline.step;
      baseline.threshold = o.baseline.threshold;
      baseline.max_iters = o.baseline.iters;
      baseline.tolerance = o.baseline.tolerance;
      if (baseline.rank < 1) throw InputError("--rank must be positive");
    }
    return 0;
  });

  const SignedObservations obs = load_observations(o.input);
  if (obs.empty()) throw InputError("training set is empty: no observed entries in " + o.input.path);

  const std::string trace_path = o.trace_path.empty() ? o.model_path + ".trace.csv" : o.trace_path;
  std::ostringstream trace_text;
  FactorPair model;
  if (kind == MethodKind::Mmc) {
    FitResult result = fit(obs, config);
    write_trace_csv(trace_text, result.trace);
    log::info("mmc: " + std::to_string(result.trace.iterations.size()) + " iterations, " +
              std::string(to_string(result.trace.reason)) + ", objective " +
              format_double(result.trace.iterations.empty()
                                ? result.trace.initial_objective
                                : result.trace.iterations.back().objective));
    model = std::move(result.factors);
  } else {
    BaselineTrace trace;
    if (kind == MethodKind::Svp) {
      model = svp_fit(obs, baseline, trace);
    } else {
      model = factorize(svt_fit(obs, baseline, trace));
    }
    write_baseline_trace(trace_text, trace, obs.size());
    log::info(std::string(to_string(kind)) + ": " + std::to_string(trace.iterations) +
              " iterations, converged=" + (trace.converged ? "yes" : "no"));
  }
  save_model(o.model_path, model);
  write_text_file(trace_path, trace_text.str());
  return 0;
}

}  // namespace

Command register_fit(CLI::App& root) {
  auto opts = std::make_shared<FitOptions>();
  CLI::App* app = root.add_subcommand("fit", "Fit a completion model to a signed edge list");
  add_input_options(app, opts->input);
  add_solver_options(app, opts->solver, "--rank");
  add_baseline_options(app, opts->baseline, "baseline-");
  app->add_option("--threshold", opts->baseline.threshold, "SVT singular value threshold (0 = default)");
  app->add_option("--method", opts->method, "mmc, svp or svt")
      ->check(CLI::IsMember({"mmc", "svp", "svt"}));
  app->add_option("-o,--model", opts->model_path, "Output model file")->required();
  app->add_option("--trace", opts->trace_path, "Trace CSV (default: <model>.trace.csv)");
  return {app, [opts](Context& ctx) { return run_fit(*opts, ctx); }};
}

}  // namespace mmc::cli
