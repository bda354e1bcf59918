#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mmc/baselines.hpp"
#include "mmc/observations.hpp"
#include "mmc/solver.hpp"

namespace mmc::cli {

/// Invalid flag combination or parameter value; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  unsigned threads = 1;
};

/// Where observations come from: an edge list, optionally reduced to its
/// top-k degree subgraph, with an optional explicit shape.
struct InputOptions {
  std::string path;
  long long top_k = 0;
  long long rows = 0;
  long long cols = 0;
};

void add_input_options(CLI::App* app, InputOptions& opts);
SignedObservations load_observations(const InputOptions& opts);

struct SolverOptions {
  double lambda = 1.2;
  long long rank = 10;
  int iters = 500;
  double beta = 0.5;
  double sigma = 1e-4;
  double initial_step = 1.0;
  double min_step = 1e-10;
  std::string projection = "per-row";
  double init_scale = 0.5;
  unsigned long long seed = 0;

  MmcConfig to_config() const;
};

/// `rank_flag` names the option carrying d ("--rank" for fit, "--mmc-rank" for bench).
void add_solver_options(CLI::App* app, SolverOptions& opts, const std::string& rank_flag);

struct BaselineOptions {
  double step = 0.0;
  double threshold = 0.0;
  int iters = 500;
  double tolerance = 1e-4;
};

void add_baseline_options(CLI::App* app, BaselineOptions& opts, const std::string& prefix);

/// Thread count: --threads if positive, else MMC_THREADS, else the hardware count.
unsigned resolve_threads(int flag);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mmc::cli
