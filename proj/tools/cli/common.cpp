#include "cli/common.hpp"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "mmc/data_io.hpp"
#include "mmc/errors.hpp"
#include "mmc/log.hpp"

namespace mmc::cli {

void add_input_options(CLI::App* app, InputOptions& opts) {
  app->add_option("-i,--input", opts.path, "Signed edge list (src dst sign)")->required();
  app->add_option("--top-k", opts.top_k, "Keep only the k highest-degree nodes")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--rows", opts.rows, "Matrix rows (overrides the '# shape' header)")
      ->check(CLI::NonNegativeNumber);
  app->add_option("--cols", opts.cols, "Matrix columns (overrides the '# shape' header)")
      ->check(CLI::NonNegativeNumber);
}

SignedObservations load_observations(const InputOptions& opts) {
  const EdgeList edges = load_edge_list(opts.path);
  log::info("loaded " + std::to_string(edges.records.size()) + " edges (" +
            std::to_string(edges.summary.trust_edges) + " trust, " +
            std::to_string(edges.summary.distrust_edges) + " distrust, " +
            std::to_string(edges.summary.users) + " users) from " + opts.path);
  if (opts.top_k > 0) {
    const auto obs = top_k_degree_subgraph(edges.records, opts.top_k);
    log::info("top-" + std::to_string(opts.top_k) + " subgraph keeps " +
              std::to_string(obs.size()) + " entries (" + std::to_string(obs.positive_count()) +
              " trust)");
    return obs;
  }
  Index rows = opts.rows;
  Index cols = opts.cols;
  if (rows == 0 || cols == 0) {
    if (edges.shape) {
      if (rows == 0) rows = edges.shape->first;
      if (cols == 0) cols = edges.shape->second;
    } else {
      std::int64_t max_src = -1;
      std::int64_t max_dst = -1;
      for (const auto& r : edges.records) {
        max_src = std::max(max_src, r.src);
        max_dst = std::max(max_dst, r.dst);
      }
      if (rows == 0) rows = max_src + 1;
      if (cols == 0) cols = max_dst + 1;
      log::warn("no '# shape' header in " + opts.path + "; inferring " + std::to_string(rows) +
                " x " + std::to_string(cols) + " from the largest ids");
    }
  }
  return observations_from_records(edges.records, rows, cols);
}

MmcConfig SolverOptions::to_config() const {
  MmcConfig c;
  c.lambda = lambda;
  c.rank = rank;
  c.max_iters = iters;
  c.armijo_beta = beta;
  c.armijo_sigma = sigma;
  c.initial_step = initial_step;
  c.min_step = min_step;
  c.projection = parse_projection_mode(projection);
  c.init_scale = init_scale;
  c.seed = seed;
  return c;
}

void add_solver_options(CLI::App* app, SolverOptions& opts, const std::string& rank_flag) {
  app->add_option("--lambda", opts.lambda, "Row-norm budget (max-norm bound lambda^2)");
  app->add_option(rank_flag, opts.rank, "Factor rank d");
  app->add_option("--iters", opts.iters, "Maximum iterations");
  app->add_option("--armijo-beta", opts.beta, "Backtracking factor");
  app->add_option("--armijo-sigma", opts.sigma, "Sufficient-decrease constant");
  app->add_option("--initial-step", opts.initial_step, "First trial step of each line search");
  app->add_option("--min-step", opts.min_step, "Smallest step before declaring stationarity");
  app->add_option("--projection", opts.projection, "per-row or whole-matrix")
      ->check(CLI::IsMember({"per-row", "whole-matrix"}));
  app->add_option("--init-scale", opts.init_scale, "Initial entry scale relative to lambda/sqrt(d)");
  app->add_option("--seed", opts.seed, "Random seed");
}

void add_baseline_options(CLI::App* app, BaselineOptions& opts, const std::string& prefix) {
  app->add_option("--" + prefix + "step", opts.step, "Baseline step size (0 = default)");
  app->add_option("--" + prefix + "iters", opts.iters, "Baseline maximum iterations");
  app->add_option("--" + prefix + "tolerance", opts.tolerance,
                  "Baseline relative Omega-residual tolerance");
}

unsigned resolve_threads(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("MMC_THREADS")) {
    try {
      const int value = std::stoi(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
    }
    log::warn(std::string("ignoring invalid MMC_THREADS='") + env + "'");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

}  // namespace mmc::cli
