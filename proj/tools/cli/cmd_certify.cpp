#include <memory>

#include "cli/commands.hpp"
#include "mmc/certificate.hpp"
#include "mmc/errors.hpp"
#include "mmc/format.hpp"
#include "mmc/model_io.hpp"

namespace mmc::cli {
namespace {

struct CertifyOptions {
  std::string model_path;
  double lambda = 0.0;  // 0 = the model's own budget
  double tol = 1e-9;
};

int run_certify(const CertifyOptions& o, Context& ctx) {
  validated([&] {
    if (o.lambda < 0.0) throw InputError("--lambda must be positive");
    if (!(o.tol >= 0.0)) throw InputError("--tol must be nonnegative");
    return 0;
  });
  const FactorPair model = load_model(o.model_path);
  const double lambda = o.lambda > 0.0 ? o.lambda : model.lambda;
  const WitnessCheck check = check_witness(witness_from_factors(model), lambda, o.tol);

  ctx.out << "status: " << (check.passed ? "pass" : "fail") << '\n'
          << "lambda: " << format_double(lambda) << '\n'
          << "max_diagonal: " << format_double(check.max_diagonal) << '\n'
          << "diagonal_limit: " << format_double(check.diagonal_limit) << '\n'
          << "min_eigenvalue: " << format_double(check.min_eigenvalue) << '\n'
          << "psd_tolerance: " << format_double(check.psd_tolerance) << '\n'
          << "maxnorm_upper_bound: " << format_double(maxnorm_upper_bound(model)) << '\n'
          << "diagnostic: " << check.diagnostic << '\n';
  return check.passed ? 0 : 1;
}

}  // namespace

Command register_certify(CLI::App& root) {
  auto opts = std::make_shared<CertifyOptions>();
  CLI::App* app = root.add_subcommand("certify", "Check the max-norm witness of a model");
  app->add_option("-m,--model", opts->model_path, "Model file")->required();
  app->add_option("--lambda", opts->lambda, "Budget to certify against (default: model lambda)");
  app->add_option("--tol", opts->tol, "Diagonal slack; PSD slack is tol * max(1, trace)");
  return {app, [opts](Context& ctx) { return run_certify(*opts, ctx); }};
}

}  // namespace mmc::cli
