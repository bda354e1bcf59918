// Acceptance checks. One line per criterion: "AC<k> PASS|FAIL|SKIP <summary>".
// Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmc/mmc.hpp"
#include "support/oracles.hpp"
#include "support/regression.hpp"

namespace fs = std::filesystem;
using namespace mmc;

namespace {

struct Outcome {
  enum Status { Pass, Fail, Skip } status;
  std::string summary;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Outcome gradient_correctness() {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  double worst = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const Index p = 2 + static_cast<Index>(rng() % 9);
    const Index n = 2 + static_cast<Index>(rng() % 9);
    const Index d = 1 + static_cast<Index>(rng() % 4);
    const auto obs = testing::random_observations(p, n, 0.3, rng);
    const FactorPair f{testing::random_matrix(p, d, rng), testing::random_matrix(n, d, rng), 1.0};
    worst = std::max(worst, testing::max_relative_error(grad_u(obs, f), testing::fd_grad_u(obs, f.u, f.v)));
    worst = std::max(worst, testing::max_relative_error(grad_v(obs, f), testing::fd_grad_v(obs, f.u, f.v)));
  }
  const double t = seconds_since(start);
  const bool ok = worst < 1e-6 && t < 5.0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("gradient vs finite differences, 50 instances: max rel err %.3g (< 1e-6), %.2f s (< 5 s)", worst, t)};
}

SyntheticData rank_two_200(std::uint64_t seed) {
  return gen_synthetic(200, 200, 2, 0.0, SamplingScheme::uniform(), 200 * 200 * 3 / 10, seed);
}

Outcome monotone_descent() {
  const auto data = rank_two_200(2024);
  MmcConfig c;
  c.rank = 10;
  c.lambda = 1.2;
  c.max_iters = 500;
  const auto start = std::chrono::steady_clock::now();
  const FitResult r = fit(data.observations, c);
  const double t = seconds_since(start);
  std::size_t increases = 0;
  double worst_norm = 0.0;
  double prev = r.trace.initial_objective;
  for (const auto& it : r.trace.iterations) {
    if (it.objective > prev) ++increases;
    prev = it.objective;
    worst_norm = std::max({worst_norm, it.u_norm, it.v_norm});
  }
  worst_norm = std::max({worst_norm, max_row_norm(r.factors.u), max_row_norm(r.factors.v)});
  const bool ok = increases == 0 && worst_norm <= c.lambda * (1 + 1e-12) && t < 30.0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("%zu iterations (%s): %zu objective increases, max row norm %.17g (<= lambda 1.2), %.2f s (< 30 s)",
              r.trace.iterations.size(), std::string(to_string(r.trace.reason)).c_str(), increases,
              worst_norm, t)};
}

Outcome certificate_property() {
  std::mt19937_64 rng(77);
  int fits = 0, passed = 0;
  double worst_eig = 0.0;
  std::string first_failure;
  for (int k = 0; k < 24; ++k) {
    const Index p = 20 + static_cast<Index>(rng() % 60);
    const Index n = 20 + static_cast<Index>(rng() % 60);
    const std::size_t m = static_cast<std::size_t>(0.1 * static_cast<double>(p * n)) +
                          rng() % static_cast<std::size_t>(0.3 * static_cast<double>(p * n));
    const auto scheme = k % 2 ? SamplingScheme::uniform() : SamplingScheme::degree_weighted(p, n, 1.0, rng());
    const auto data = gen_synthetic(p, n, 1 + static_cast<Index>(rng() % 3), 0.1 * (k % 3), scheme, m, rng());
    MmcConfig c;
    c.rank = 1 + static_cast<Index>(rng() % 12);
    c.lambda = 0.8 + 0.1 * static_cast<double>(rng() % 10);
    c.max_iters = 150;
    c.projection = k % 4 == 3 ? ProjectionMode::WholeMatrix : ProjectionMode::PerRow;
    c.seed = rng();
    const FitResult r = fit(data.observations, c, Warnings::Suppress);
    const WitnessCheck check = check_witness(witness_from_factors(r.factors), c.lambda, 1e-9);
    ++fits;
    if (check.passed) {
      ++passed;
    } else if (first_failure.empty()) {
      first_failure = " first failure: " + check.diagnostic;
    }
    worst_eig = std::min(worst_eig, check.min_eigenvalue);
  }
  return {passed == fits ? Outcome::Pass : Outcome::Fail,
          fmt("check_witness on %d random fits: %d passed, most negative eigenvalue %.3g", fits, passed, worst_eig) +
              first_failure};
}

Outcome oracle_sanity() {
  std::mt19937_64 rng(4242);
  std::normal_distribution<double> normal;
  double worst_rel = 0.0;
  double worst_lower_gap = 0.0;  // min over matrices of oracle - max|m|
  auto lower = [&](const DenseMatrix& m, double value) {
    worst_lower_gap = std::min(worst_lower_gap, value - m.cwiseAbs().maxCoeff());
  };
  for (int k = 0; k < 20; ++k) {
    const Index p = 1 + static_cast<Index>(rng() % 5);
    const Index n = 1 + static_cast<Index>(rng() % 5);
    Vector a(p), b(n);
    for (Index i = 0; i < p; ++i) a(i) = normal(rng);
    for (Index j = 0; j < n; ++j) b(j) = normal(rng);
    const DenseMatrix m = a * b.transpose();
    const double closed = a.cwiseAbs().maxCoeff() * b.cwiseAbs().maxCoeff();
    const double value = maxnorm_oracle_small(m, 32, static_cast<std::uint64_t>(k));
    worst_rel = std::max(worst_rel, std::abs(value - closed) / closed);
    lower(m, value);
  }
  for (int k = 0; k < 10; ++k) {
    const Index p = 2 + static_cast<Index>(rng() % 4);
    const Index n = 2 + static_cast<Index>(rng() % 4);
    const DenseMatrix m = testing::random_matrix(p, n, rng);
    lower(m, maxnorm_oracle_small(m, 32, static_cast<std::uint64_t>(100 + k)));
  }
  const bool ok = worst_rel < 1e-3 && worst_lower_gap >= 0.0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("oracle vs |a|_inf |b|_inf on 20 rank-1 matrices: max rel err %.3g (< 1e-3); "
              "min(oracle - max|m_ij|) over 30 matrices %.3g (>= 0)",
              worst_rel, worst_lower_gap)};
}

Outcome synthetic_recovery() {
  const auto data = rank_two_200(2024);
  MmcConfig c;
  c.rank = 10;
  c.lambda = 1.2;
  c.max_iters = 500;
  const auto start = std::chrono::steady_clock::now();
  const FitResult r = fit(data.observations, c);
  const double t = seconds_since(start);
  std::vector<char> seen(200 * 200, 0);
  for (const auto& e : data.observations.entries()) seen[static_cast<std::size_t>(e.row) * 200 + e.col] = 1;
  std::size_t correct = 0, held = 0;
  for (Index i = 0; i < 200; ++i)
    for (Index j = 0; j < 200; ++j)
      if (!seen[static_cast<std::size_t>(i) * 200 + j]) {
        ++held;
        correct += predict_sign(r.factors, i, j) == data.truth(i, j);
      }
  const double acc = static_cast<double>(correct) / static_cast<double>(held);
  const double floor = testing::kRecordedSyntheticAccuracy - 0.005;
  const bool ok = acc >= 0.9 && acc >= floor && t < 60.0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("held-out sign accuracy %.4f (>= 0.9, pinned floor %.4f), %.2f s (< 60 s)", acc, floor, t)};
}

Outcome nonuniform_trend() {
  // 200 x 200 rank-2 truth; 40% of entries known under degree-weighted
  // sampling (gamma = 1); each trial trains on half of them (20% of the matrix).
  const auto scheme = SamplingScheme::degree_weighted(200, 200, 1.0, 6);
  const auto data = gen_synthetic(200, 200, 2, 0.0, scheme, 200 * 200 * 2 / 5, 6);
  MmcConfig mmc;
  mmc.rank = 10;
  BaselineConfig svp;
  svp.rank = 2;
  const auto start = std::chrono::steady_clock::now();
  const EvalReport report = run_benchmark(
      data.observations, {MethodSpec::make_mmc(mmc), MethodSpec::make_svp(svp)},
      BenchmarkPlan{{0.5}, consecutive_seeds(0, 20), 1});
  const double t = seconds_since(start);
  const EvalCell& a = report.cells[0];
  const EvalCell& b = report.cells[1];
  const bool complete = a.failed == 0 && b.failed == 0;
  const bool ok = complete && a.rmse_mean <= b.rmse_mean && t < 600.0;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("20 paired trials: MMC RMSE %.4f +- %.4f vs SVP RMSE %.4f +- %.4f (failed trials %zu / %zu), %.1f s (< 600 s)",
              a.rmse_mean, a.rmse_std, b.rmse_mean, b.rmse_std, a.failed, b.failed, t)};
}

Outcome epinions() {
  const char* path = std::getenv("MMC_EPINIONS_PATH");
  if (path == nullptr || !fs::exists(path)) {
    return {Outcome::Skip, "Epinions comparison: set MMC_EPINIONS_PATH to a local soc-sign-epinions edge list"};
  }
  const auto start = std::chrono::steady_clock::now();
  const EdgeList list = load_edge_list(path);
  const SignedObservations obs = top_k_degree_subgraph(list.records, 2000);
  const MmcConfig c;
  const EvalReport report = run_benchmark(obs, {MethodSpec::make_mmc(c)},
                                          BenchmarkPlan{{0.1}, consecutive_seeds(0, 20), 1});
  const EvalCell& cell = report.cells[0];
  const bool ok = cell.failed == 0 && std::abs(cell.mae_mean - 0.254) <= 0.05 &&
                  std::abs(cell.rmse_mean - 0.466) <= 0.05;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("top-2000 subgraph (%zu trust, %zu distrust of %zu edges): MAE %.4f (0.254 +- 0.05), "
              "RMSE %.4f (0.466 +- 0.05), %.1f s",
              obs.positive_count(), obs.size() - obs.positive_count(), list.records.size(), cell.mae_mean,
              cell.rmse_mean, seconds_since(start))};
}

Outcome efficiency() {
  const Index size = 2000;
  const auto data = gen_synthetic(size, size, 5, 0.0, SamplingScheme::uniform(),
                                  static_cast<std::size_t>(size * size / 10), 8);
  MmcConfig c;
  c.rank = 50;
  c.max_iters = 200;
  const auto start = std::chrono::steady_clock::now();
  const FitResult r = fit(data.observations, c);
  const double t = seconds_since(start);
  return {t < 60.0 ? Outcome::Pass : Outcome::Fail,
          fmt("2000 x 2000, 10%% observed, d = 50: %zu iterations (%s) in %.2f s (< 60 s)",
              r.trace.iterations.size(), std::string(to_string(r.trace.reason)).c_str(), t)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome determinism(const std::string& cli, const fs::path& work) {
  if (cli.empty()) return {Outcome::Fail, "no --cli binary given"};
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string data = (work / "data").string();
  auto sh = [](const std::string& cmd) { return std::system(cmd.c_str()); };
  if (sh("'" + cli + "' gen --rows 120 --cols 120 --rank 2 --observed 4000 --scheme degree --seed 7 -o '" +
         data + "'") != 0) {
    return {Outcome::Fail, "gen failed"};
  }
  const std::string bench = "'" + cli + "' bench -i '" + data +
                            "/observations.txt' --methods mmc,svp,svt --fractions 0.2,0.4 --trials 3 "
                            "--iters 100 --threads 2 --csv ";
  const fs::path a = work / "a.csv", b = work / "b.csv";
  if (sh(bench + "'" + a.string() + "'") != 0 || sh(bench + "'" + b.string() + "'") != 0) {
    return {Outcome::Fail, "bench failed"};
  }
  const std::string first = slurp(a), second = slurp(b);
  const bool ok = !first.empty() && first == second;
  return {ok ? Outcome::Pass : Outcome::Fail,
          fmt("two bench runs: %zu and %zu bytes, %s", first.size(), second.size(),
              ok ? "byte-identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  fs::path work = fs::temp_directory_path() / "mmc_acceptance";
  std::vector<std::string> only;
  for (int k = 1; k < argc; ++k) {
    const std::string arg = argv[k];
    if (arg == "--cli" && k + 1 < argc) {
      cli = argv[++k];
    } else if (arg == "--workdir" && k + 1 < argc) {
      work = argv[++k];
    } else if (arg == "--only" && k + 1 < argc) {
      only.push_back(argv[++k]);
    } else {
      std::fprintf(stderr, "usage: %s [--cli PATH] [--workdir DIR] [--only ACk]...\n", argv[0]);
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", gradient_correctness},
      {"AC2", monotone_descent},
      {"AC3", certificate_property},
      {"AC4", oracle_sanity},
      {"AC5", synthetic_recovery},
      {"AC6", nonuniform_trend},
      {"AC7", epinions},
      {"AC8", efficiency},
      {"AC9", [&] { return determinism(cli, work); }},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), name) == only.end()) continue;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {Outcome::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.status == Outcome::Pass ? "PASS" : o.status == Outcome::Fail ? "FAIL" : "SKIP";
    failures += o.status == Outcome::Fail;
    std::printf("%s %s %s\n", name.c_str(), tag, o.summary.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
