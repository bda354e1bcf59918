#include "mmc/eval.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include <json.hpp>

#include "mmc/errors.hpp"
#include "mmc/format.hpp"

namespace mmc {
namespace {

void check_pair(std::span<const double> p, std::span<const double> t) {
  if (p.size() != t.size()) throw InputError("predictions and truths differ in length");
  if (p.empty()) throw InputError("metrics need a non-empty test set");
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

template <typename Get>
MeanStd mean_std(const std::vector<Evaluation>& xs, Get get) {
  MeanStd out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (const auto& x : xs) sum += get(x);
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double sq = 0.0;
    for (const auto& x : xs) {
      const double d = get(x) - out.mean;
      sq += d * d;
    }
    out.std = std::sqrt(sq / static_cast<double>(xs.size() - 1));
  }
  return out;
}

std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <typename Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
  if (workers <= 1) {
    for (std::size_t k = 0; k < count; ++k) job(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          job(k);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct TrialResult {
  bool ok = false;
  Evaluation eval;
  std::string failure;
};

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

bool parse_double(std::string_view token, double& value) {
  if (token.empty()) return false;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (*first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

double mae(std::span<const double> p, std::span<const double> t) {
  check_pair(p, t);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += std::abs(p[k] - t[k]);
  return sum / static_cast<double>(p.size());
}

double mean_signed_error(std::span<const double> p, std::span<const double> t) {
  check_pair(p, t);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += p[k] - t[k];
  return sum / static_cast<double>(p.size());
}

double rmse(std::span<const double> p, std::span<const double> t) {
  check_pair(p, t);
  double sum = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sum += (p[k] - t[k]) * (p[k] - t[k]);
  return std::sqrt(sum / static_cast<double>(p.size()));
}

double sign_accuracy(std::span<const double> p, std::span<const double> t) {
  check_pair(p, t);
  std::size_t hits = 0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double predicted = p[k] >= 0.0 ? 1.0 : -1.0;
    const double truth = t[k] >= 0.0 ? 1.0 : -1.0;
    if (predicted == truth) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(p.size());
}

std::string_view to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::Mmc: return "mmc";
    case MethodKind::Svp: return "svp";
    case MethodKind::Svt: return "svt";
  }
  return "unknown";
}

MethodKind parse_method(std::string_view text) {
  if (text == "mmc") return MethodKind::Mmc;
  if (text == "svp") return MethodKind::Svp;
  if (text == "svt") return MethodKind::Svt;
  throw InputError("unknown method '" + std::string(text) + "' (expected mmc, svp or svt)");
}

MethodSpec MethodSpec::make_mmc(const MmcConfig& config, std::string label) {
  MethodSpec m;
  m.label = std::move(label);
  m.kind = MethodKind::Mmc;
  m.mmc = config;
  return m;
}

MethodSpec MethodSpec::make_svp(const BaselineConfig& config, std::string label) {
  MethodSpec m;
  m.label = std::move(label);
  m.kind = MethodKind::Svp;
  m.baseline = config;
  m.baseline.method = BaselineMethod::Svp;
  return m;
}

MethodSpec MethodSpec::make_svt(const BaselineConfig& config, std::string label) {
  MethodSpec m;
  m.label = std::move(label);
  m.kind = MethodKind::Svt;
  m.baseline = config;
  m.baseline.method = BaselineMethod::Svt;
  return m;
}

Index MethodSpec::rank() const {
  switch (kind) {
    case MethodKind::Mmc: return mmc.rank;
    case MethodKind::Svp: return baseline.rank;
    case MethodKind::Svt: return 0;
  }
  return 0;
}

double CompletedMatrix::operator()(Index i, Index j) const {
  if (const auto* f = std::get_if<FactorPair>(&model_)) return mmc::predict(*f, i, j);
  const auto& x = std::get<DenseMatrix>(model_);
  if (i < 0 || i >= x.rows() || j < 0 || j >= x.cols()) {
    throw DimensionError("prediction index out of range");
  }
  return x(i, j);
}

std::vector<double> CompletedMatrix::predict(const SignedObservations& at) const {
  std::vector<double> out;
  out.reserve(at.size());
  for (const auto& e : at.entries()) out.push_back((*this)(e.row, e.col));
  return out;
}

FactorPair CompletedMatrix::factors() const {
  if (const auto* f = std::get_if<FactorPair>(&model_)) return *f;
  return factorize(std::get<DenseMatrix>(model_));
}

CompletedMatrix fit_method(const MethodSpec& method, const SignedObservations& train,
                           std::uint64_t seed) {
  switch (method.kind) {
    case MethodKind::Mmc: {
      MmcConfig config = method.mmc;
      config.seed = mix(config.seed, seed);
      return CompletedMatrix(fit(train, config, Warnings::Suppress).factors);
    }
    case MethodKind::Svp: return CompletedMatrix(svp_fit(train, method.baseline));
    case MethodKind::Svt: return CompletedMatrix(svt_fit(train, method.baseline));
  }
  throw InputError("unknown method");
}

Evaluation evaluate(const CompletedMatrix& model, const SignedObservations& test) {
  const auto predictions = model.predict(test);
  std::vector<double> truths;
  truths.reserve(test.size());
  for (const auto& e : test.entries()) truths.push_back(e.sign);
  Evaluation out;
  out.mae = mae(predictions, truths);
  out.rmse = rmse(predictions, truths);
  out.accuracy = sign_accuracy(predictions, truths);
  return out;
}

const EvalCell* EvalReport::find(std::string_view method, double fraction, Index rank) const {
  for (const auto& c : cells) {
    if (c.method == method && c.fraction == fraction && c.rank == rank) return &c;
  }
  return nullptr;
}

void EvalReport::write_csv(std::ostream& out, bool include_timing) const {
  out << "method,fraction,rank,trials,failed,mae_mean,mae_std,rmse_mean,rmse_std,"
         "accuracy_mean,accuracy_std";
  if (include_timing) out << ",seconds_mean";
  out << '\n';
  for (const auto& c : cells) {
    out << c.method << ',' << format_double(c.fraction) << ',' << c.rank << ',' << c.trials << ','
        << c.failed << ',' << format_double(c.mae_mean) << ',' << format_double(c.mae_std) << ','
        << format_double(c.rmse_mean) << ',' << format_double(c.rmse_std) << ','
        << format_double(c.accuracy_mean) << ',' << format_double(c.accuracy_std);
    if (include_timing) out << ',' << format_double(c.seconds_mean);
    out << '\n';
  }
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json root;
  root["cells"] = nlohmann::ordered_json::array();
  for (const auto& c : cells) {
    nlohmann::ordered_json cell;
    cell["method"] = c.method;
    cell["fraction"] = c.fraction;
    cell["rank"] = c.rank;
    cell["trials"] = c.trials;
    cell["failed"] = c.failed;
    cell["mae"] = {{"mean", c.mae_mean}, {"std", c.mae_std}};
    cell["rmse"] = {{"mean", c.rmse_mean}, {"std", c.rmse_std}};
    cell["accuracy"] = {{"mean", c.accuracy_mean}, {"std", c.accuracy_std}};
    cell["seconds"] = {{"mean", c.seconds_mean}};
    auto trials = nlohmann::ordered_json::array();
    for (const auto& e : c.per_trial) {
      trials.push_back({{"mae", e.mae}, {"rmse", e.rmse}, {"accuracy", e.accuracy},
                        {"seconds", e.seconds}});
    }
    cell["per_trial"] = std::move(trials);
    cell["failures"] = c.failures;
    root["cells"].push_back(std::move(cell));
  }
  return root.dump(2);
}

EvalReport run_benchmark(const SignedObservations& obs, const std::vector<MethodSpec>& methods,
                         const BenchmarkPlan& plan) {
  if (methods.empty()) throw InputError("benchmark needs at least one method");
  if (plan.fractions.empty()) throw InputError("benchmark needs at least one fraction");
  if (plan.seeds.empty()) throw InputError("benchmark needs at least one trial");
  for (double f : plan.fractions) {
    if (!(f > 0.0 && f < 1.0)) throw InputError("benchmark fractions must lie in (0, 1)");
  }
  for (const auto& m : methods) {
    if (m.kind == MethodKind::Mmc) m.mmc.validate();
  }
  const std::size_t trials = plan.seeds.size();
  const std::size_t jobs = plan.fractions.size() * trials;
  // results[job][method], job = fraction_index * trials + trial
  std::vector<std::vector<TrialResult>> results(jobs, std::vector<TrialResult>(methods.size()));

  parallel_for(jobs, plan.workers, [&](std::size_t job) {
    const double fraction = plan.fractions[job / trials];
    const std::uint64_t seed = plan.seeds[job % trials];
    const TrainTest split = split_train_test(obs, SplitSpec{fraction, seed});
    for (std::size_t m = 0; m < methods.size(); ++m) {
      TrialResult& r = results[job][m];
      try {
        const auto start = std::chrono::steady_clock::now();
        const CompletedMatrix model = fit_method(methods[m], split.train, seed);
        const auto stop = std::chrono::steady_clock::now();
        r.eval = evaluate(model, split.test);
        r.eval.seconds = std::chrono::duration<double>(stop - start).count();
        r.ok = true;
      } catch (const std::exception& e) {
        r.failure = e.what();
      }
    }
  });

  EvalReport report;
  for (std::size_t m = 0; m < methods.size(); ++m) {
    for (std::size_t fi = 0; fi < plan.fractions.size(); ++fi) {
      EvalCell cell;
      cell.method = methods[m].label;
      cell.fraction = plan.fractions[fi];
      cell.rank = methods[m].rank();
      for (std::size_t t = 0; t < trials; ++t) {
        const TrialResult& r = results[fi * trials + t][m];
        if (r.ok) {
          cell.per_trial.push_back(r.eval);
        } else {
          ++cell.failed;
          cell.failures.push_back("trial " + std::to_string(t) + ": " + r.failure);
        }
      }
      cell.trials = cell.per_trial.size();
      const auto mae_s = mean_std(cell.per_trial, [](const Evaluation& e) { return e.mae; });
      const auto rmse_s = mean_std(cell.per_trial, [](const Evaluation& e) { return e.rmse; });
      const auto acc_s = mean_std(cell.per_trial, [](const Evaluation& e) { return e.accuracy; });
      const auto sec_s = mean_std(cell.per_trial, [](const Evaluation& e) { return e.seconds; });
      cell.mae_mean = mae_s.mean;
      cell.mae_std = mae_s.std;
      cell.rmse_mean = rmse_s.mean;
      cell.rmse_std = rmse_s.std;
      cell.accuracy_mean = acc_s.mean;
      cell.accuracy_std = acc_s.std;
      cell.seconds_mean = sec_s.mean;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

EvalReport rank_sweep(const SignedObservations& obs, const MmcConfig& base,
                      const std::vector<Index>& ranks, double fraction,
                      const std::vector<std::uint64_t>& seeds, unsigned workers) {
  if (ranks.empty()) throw InputError("rank sweep needs at least one rank");
  std::vector<MethodSpec> methods;
  for (Index d : ranks) {
    MmcConfig c = base;
    c.rank = d;
    methods.push_back(MethodSpec::make_mmc(c));
  }
  return run_benchmark(obs, methods, BenchmarkPlan{{fraction}, seeds, workers});
}

std::vector<std::uint64_t> consecutive_seeds(std::uint64_t base, std::size_t trials) {
  std::vector<std::uint64_t> out(trials);
  for (std::size_t t = 0; t < trials; ++t) out[t] = base + t;
  return out;
}

}  // namespace mmc
