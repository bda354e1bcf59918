#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "mmc/data_io.hpp"
#include "mmc/errors.hpp"
#include "mmc/format.hpp"
#include "mmc/log.hpp"

namespace mmc::cli {
namespace {

struct GenOptions {
  long long rows = 100;
  long long cols = 100;
  long long rank = 2;
  long long observed = 0;
  double noise = 0.0;
  std::string scheme = "uniform";
  double gamma = 1.0;
  unsigned long long seed = 0;
  std::string out_dir;
  bool truth = false;
};

int run_gen(const GenOptions& o, Context& ctx) {
  const auto scheme = validated([&] {
    if (o.rows < 1 || o.cols < 1) throw InputError("--rows and --cols must be positive");
    if (o.rank < 1 || o.rank > std::min(o.rows, o.cols)) {
      throw InputError("--rank must lie in [1, min(rows, cols)] = [1, " +
                       std::to_string(std::min(o.rows, o.cols)) + "]");
    }
    if (o.observed < 1 || o.observed > o.rows * o.cols) {
      throw InputError("--observed must lie in [1, rows * cols]");
    }
    if (!(o.noise >= 0.0 && o.noise < 1.0)) throw InputError("--noise must lie in [0, 1)");
    // Weights get their own stream so the truth draw stays comparable across schemes.
    return o.scheme == "degree" ? SamplingScheme::degree_weighted(o.rows, o.cols, o.gamma, o.seed ^ 0xa5a5a5a5ULL)
                                : SamplingScheme::uniform();
  });

  const SyntheticData data = gen_synthetic(o.rows, o.cols, o.rank, o.noise, scheme,
                                           static_cast<std::size_t>(o.observed), o.seed);
  const std::filesystem::path dir(o.out_dir);
  std::filesystem::create_directories(dir);
  const std::pair<Index, Index> shape{o.rows, o.cols};
  save_edge_list(dir / "observations.txt", to_records(data.observations), shape);

  Metadata meta{{"format", "mmc-synthetic v1"},
                {"rows", std::to_string(o.rows)},
                {"cols", std::to_string(o.cols)},
                {"rank", std::to_string(o.rank)},
                {"observed", std::to_string(o.observed)},
                {"flip_noise", format_double(o.noise)},
                {"scheme", o.scheme == "degree" ? "degree-weighted" : "uniform"},
                {"gamma", o.scheme == "degree" ? format_double(o.gamma) : "0"},
                {"seed", std::to_string(o.seed)},
                {"positive", std::to_string(data.observations.positive_count())}};
  std::ostringstream sidecar;
  write_metadata(sidecar, meta);
  write_text_file(dir / "metadata.txt", sidecar.str());

  if (o.truth) {
    std::vector<EdgeRecord> all;
    all.reserve(static_cast<std::size_t>(data.truth.size()));
    for (Index i = 0; i < data.truth.rows(); ++i) {
      for (Index j = 0; j < data.truth.cols(); ++j) {
        all.push_back({i, j, static_cast<std::int8_t>(data.truth(i, j) > 0 ? 1 : -1)});
      }
    }
    save_edge_list(dir / "truth.txt", all, shape);
  }
  log::info("wrote " + std::to_string(data.observations.size()) + " observations to " +
            (dir / "observations.txt").string());
  (void)ctx;
  return 0;
}

}  // namespace

Command register_gen(CLI::App& root) {
  auto opts = std::make_shared<GenOptions>();
  CLI::App* app = root.add_subcommand("gen", "Generate a synthetic signed low-rank dataset");
  app->add_option("--rows", opts->rows, "Rows p");
  app->add_option("--cols", opts->cols, "Columns n");
  app->add_option("--rank", opts->rank, "Rank of the latent real matrix");
  app->add_option("--observed", opts->observed, "Number of observed entries")->required();
  app->add_option("--noise", opts->noise, "Sign flip probability");
  app->add_option("--scheme", opts->scheme, "Sampling scheme: uniform or degree")
      ->check(CLI::IsMember({"uniform", "degree"}));
  app->add_option("--gamma", opts->gamma, "Degree-weighted exponent (w_i ~ i^-gamma)");
  app->add_option("--seed", opts->seed, "Random seed");
  app->add_option("-o,--out", opts->out_dir, "Output directory")->required();
  app->add_flag("--truth", opts->truth, "Also write the full ground-truth matrix as truth.txt");
  return {app, [opts](Context& ctx) { return run_gen(*opts, ctx); }};
}

}  // namespace mmc::cli
