#include <fstream>
#include <memory>
#include <sstream>

#include "cli/commands.hpp"
#include "mmc/errors.hpp"
#include "mmc/format.hpp"
#include "mmc/model_io.hpp"

namespace mmc::cli {
namespace {

struct PredictOptions {
  std::string model_path;
  std::string query_path;  // empty or "-" reads standard input
  std::string out_path;
};

// Queries are "i j" lines; blank lines and '#' comments are skipped. Bad
// lines produce a "# error line N: ..." record and a nonzero exit.
int predict_stream(const FactorPair& model, std::istream& in, std::ostream& out, std::ostream& err) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t errors = 0;
  auto fail = [&](const std::string& why) {
    ++errors;
    out << "# error line " << line_no << ": " << why << '\n';
    err << "predict: line " << line_no << ": " << why << '\n';
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::vector<std::string> tokens;
    for (std::string t; fields >> t;) tokens.push_back(t);
    if (tokens.empty() || tokens.front().front() == '#') continue;
    if (tokens.size() != 2) {
      fail("expected 'i j'");
      continue;
    }
    long long i = 0;
    long long j = 0;
    try {
      std::size_t used_i = 0;
      std::size_t used_j = 0;
      i = std::stoll(tokens[0], &used_i);
      j = std::stoll(tokens[1], &used_j);
      if (used_i != tokens[0].size() || used_j != tokens[1].size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      fail("malformed indices '" + line + "'");
      continue;
    }
    if (i < 0 || i >= model.rows() || j < 0 || j >= model.cols()) {
      fail("index (" + std::to_string(i) + ", " + std::to_string(j) + ") outside " +
           std::to_string(model.rows()) + " x " + std::to_string(model.cols()));
      continue;
    }
    const double value = predict(model, i, j);
    out << i << ' ' << j << ' ' << format_double(value) << ' ' << (value >= 0.0 ? 1 : -1) << '\n';
  }
  return errors == 0 ? 0 : 1;
}

int run_predict(const PredictOptions& o, Context& ctx) {
  const FactorPair model = load_model(o.model_path);
  std::ifstream file;
  std::istream* in = &ctx.in;
  if (!o.query_path.empty() && o.query_path != "-") {
    file.open(o.query_path);
    if (!file) throw InputError("cannot open queries '" + o.query_path + "'");
    in = &file;
  }
  if (o.out_path.empty()) return predict_stream(model, *in, ctx.out, ctx.err);
  std::ofstream out(o.out_path);
  if (!out) throw InputError("cannot write '" + o.out_path + "'");
  return predict_stream(model, *in, out, ctx.err);
}

}  // namespace

Command register_predict(CLI::App& root) {
  auto opts = std::make_shared<PredictOptions>();
  CLI::App* app = root.add_subcommand("predict", "Predict entries of a fitted model");
  app->add_option("-m,--model", opts->model_path, "Model file")->required();
  app->add_option("-q,--queries", opts->query_path, "Query file of 'i j' lines (default: stdin)");
  app->add_option("-o,--out", opts->out_path, "Output file (default: stdout)");
  return {app, [opts](Context& ctx) { return run_predict(*opts, ctx); }};
}

}  // namespace mmc::cli
