#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mmc/baselines.hpp"
#include "mmc/data_io.hpp"
#include "mmc/factor_pair.hpp"
#include "mmc/observations.hpp"
#include "mmc/solver.hpp"

namespace mmc {

// Metrics over held-out entries. Each throws InputError on empty or
// mismatched inputs.

/// Mean of |prediction - truth|.
double mae(std::span<const double> predictions, std::span<const double> truths);
/// Mean of (prediction - truth), the diagnostic signed variant of mae.
double mean_signed_error(std::span<const double> predictions, std::span<const double> truths);
/// sqrt(mean of (prediction - truth)^2).
double rmse(std::span<const double> predictions, std::span<const double> truths);
/// Fraction of entries whose predicted sign (0 counts as +1) equals the truth.
double sign_accuracy(std::span<const double> predictions, std::span<const double> truths);

enum class MethodKind { Mmc, Svp, Svt };

std::string_view to_string(MethodKind kind);
MethodKind parse_method(std::string_view text);

struct MethodSpec {
  std::string label;
  MethodKind kind = MethodKind::Mmc;
  MmcConfig mmc;
  BaselineConfig baseline;

  static MethodSpec make_mmc(const MmcConfig& config, std::string label = "mmc");
  static MethodSpec make_svp(const BaselineConfig& config, std::string label = "svp");
  static MethodSpec make_svt(const BaselineConfig& config, std::string label = "svt");

  /// Rank column of the report: d for MMC, r for SVP, 0 for SVT.
  Index rank() const;
};

/// A fitted completion, either factored (MMC, SVP) or dense (SVT).
class CompletedMatrix {
 public:
  explicit CompletedMatrix(FactorPair f) : model_(std::move(f)) {}
  explicit CompletedMatrix(DenseMatrix x) : model_(std::move(x)) {}

  double operator()(Index i, Index j) const;
  std::vector<double> predict(const SignedObservations& at) const;
  /// Factored form; SVT output is factorized on demand.
  FactorPair factors() const;

 private:
  std::variant<FactorPair, DenseMatrix> model_;
};

/// Fits one method on the training entries. `seed` reseeds MMC's start.
/// Does not log the lambda < 1 warning; run_benchmark logs it once per method.
CompletedMatrix fit_method(const MethodSpec& method, const SignedObservations& train,
                           std::uint64_t seed);

struct Evaluation {
  double mae = 0.0;
  double rmse = 0.0;
  double accuracy = 0.0;
  double seconds = 0.0;
};

Evaluation evaluate(const CompletedMatrix& model, const SignedObservations& test);

struct EvalCell {
  std::string method;
  double fraction = 0.0;
  Index rank = 0;
  std::size_t trials = 0;  // successful trials
  std::size_t failed = 0;
  double mae_mean = 0.0, mae_std = 0.0;
  double rmse_mean = 0.0, rmse_std = 0.0;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double seconds_mean = 0.0;
  std::vector<std::string> failures;  // "trial <t>: <message>"
  std::vector<Evaluation> per_trial;  // successful trials in trial order
};

struct EvalReport {
  std::vector<EvalCell> cells;

  const EvalCell* find(std::string_view method, double fraction, Index rank) const;

  /// One row per cell: method,fraction,rank,trials,failed,mae_mean,mae_std,
  /// rmse_mean,rmse_std,accuracy_mean,accuracy_std[,seconds_mean].
  /// Numbers use the shortest round-trip decimal form. Timing is excluded
  /// unless asked for so repeated runs compare byte-identical.
  void write_csv(std::ostream& out, bool include_timing = false) const;
  std::string to_json() const;
};

struct BenchmarkPlan {
  std::vector<double> fractions;
  std::vector<std::uint64_t> seeds;  // one per trial
  unsigned workers = 1;
};

/// For every fraction and trial: one seeded split shared by all methods,
/// fit on train, score on test; cells aggregate mean and sample std over
/// trials. A failing fit is recorded in the cell and that trial is skipped
/// for that method only.
EvalReport run_benchmark(const SignedObservations& obs, const std::vector<MethodSpec>& methods,
                         const BenchmarkPlan& plan);

/// MMC at each rank d with the rest of `base` fixed.
EvalReport rank_sweep(const SignedObservations& obs, const MmcConfig& base,
                      const std::vector<Index>& ranks, double fraction,
                      const std::vector<std::uint64_t>& seeds, unsigned workers = 1);

/// Seeds base, base+1, ... for `trials` trials.
std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, std::size_t trials);

}  // namespace mmc
