#include "mmc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <cctype>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "mmc/errors.hpp"
#include "mmc/log.hpp"

namespace mmc {
namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    const std::size_t start = k;
    while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) ++k;
    if (k > start) out.push_back(line.substr(start, k - start));
  }
  return out;
}

template <typename Int>
bool parse_int(std::string_view token, Int& value) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  return ec == std::errc() && ptr == last;
}

bool parse_sign(std::string_view token, std::int8_t& sign) {
  if (token == "1" || token == "+1") {
    sign = 1;
    return true;
  }
  if (token == "-1") {
    sign = -1;
    return true;
  }
  return false;
}

std::uint64_t key_of(std::int64_t a, std::int64_t b) {
  return (static_cast<std::uint64_t>(a) << 32) ^ static_cast<std::uint64_t>(b);
}

}  // namespace

DatasetSummary summarize(const std::vector<EdgeRecord>& records) {
  DatasetSummary s;
  std::unordered_set<std::int64_t> users;
  for (const auto& r : records) {
    users.insert(r.src);
    users.insert(r.dst);
    if (r.sign > 0) {
      ++s.trust_edges;
    } else {
      ++s.distrust_edges;
    }
  }
  s.users = users.size();
  return s;
}

EdgeList parse_edge_list(std::istream& in, const std::string& source_name) {
  EdgeList out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.front().front() == '#') {
      // "# shape <rows> <cols>" declares the matrix size; other comments are ignored.
      std::vector<std::string_view> rest(tokens.begin(), tokens.end());
      if (rest.front() == "#") rest.erase(rest.begin());
      else rest.front().remove_prefix(1);
      if (rest.size() == 3 && rest[0] == "shape") {
        Index rows = 0;
        Index cols = 0;
        if (!parse_int(rest[1], rows) || !parse_int(rest[2], cols) || rows < 0 || cols < 0) {
          throw ParseError(source_name, line_no, "malformed shape header");
        }
        out.shape = std::make_pair(rows, cols);
      }
      continue;
    }
    if (tokens.size() != 3) {
      throw ParseError(source_name, line_no,
                       "expected 'src dst sign', got " + std::to_string(tokens.size()) + " fields");
    }
    EdgeRecord r;
    if (!parse_int(tokens[0], r.src) || r.src < 0) {
      throw ParseError(source_name, line_no, "invalid source id '" + std::string(tokens[0]) + "'");
    }
    if (!parse_int(tokens[1], r.dst) || r.dst < 0) {
      throw ParseError(source_name, line_no, "invalid target id '" + std::string(tokens[1]) + "'");
    }
    if (!parse_sign(tokens[2], r.sign)) {
      throw ParseError(source_name, line_no,
                       "sign must be 1, +1 or -1, got '" + std::string(tokens[2]) + "'");
    }
    out.records.push_back(r);
  }
  out.summary = summarize(out.records);
  return out;
}

EdgeList load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open edge list '" + path.string() + "'");
  return parse_edge_list(in, path.string());
}

void write_edge_list(std::ostream& out, const std::vector<EdgeRecord>& records,
                     std::optional<std::pair<Index, Index>> shape) {
  if (shape) out << "# shape " << shape->first << ' ' << shape->second << '\n';
  for (const auto& r : records) {
    out << r.src << '\t' << r.dst << '\t' << static_cast<int>(r.sign) << '\n';
  }
}

void save_edge_list(const std::filesystem::path& path, const std::vector<EdgeRecord>& records,
                    std::optional<std::pair<Index, Index>> shape) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write edge list '" + path.string() + "'");
  write_edge_list(out, records, shape);
  if (!out) throw InputError("failed writing edge list '" + path.string() + "'");
}

std::vector<EdgeRecord> to_records(const SignedObservations& obs) {
  std::vector<EdgeRecord> out;
  out.reserve(obs.size());
  for (const auto& e : obs.entries()) out.push_back({e.row, e.col, e.sign});
  return out;
}

SignedObservations observations_from_records(const std::vector<EdgeRecord>& records, Index rows,
                                             Index cols) {
  std::vector<SignedEntry> entries;
  entries.reserve(records.size());
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(records.size() * 2);
  std::size_t duplicates = 0;
  for (const auto& r : records) {
    if (r.src >= rows || r.dst >= cols) {
      throw InputError("edge (" + std::to_string(r.src) + ", " + std::to_string(r.dst) +
                       ") outside declared shape " + std::to_string(rows) + " x " +
                       std::to_string(cols));
    }
    if (!seen.insert(key_of(r.src, r.dst)).second) {
      ++duplicates;
      continue;
    }
    entries.push_back({static_cast<std::int32_t>(r.src), static_cast<std::int32_t>(r.dst), r.sign});
  }
  if (duplicates > 0) {
    log::warn("dropped " + std::to_string(duplicates) +
              " duplicate edge(s), keeping the first occurrence of each");
  }
  return SignedObservations(rows, cols, std::move(entries));
}

SignedObservations top_k_degree_subgraph(const std::vector<EdgeRecord>& records, Index k) {
  if (k < 1) throw InputError("top-k subgraph needs k >= 1");
  std::unordered_map<std::int64_t, std::size_t> degree;
  for (const auto& r : records) {
    ++degree[r.src];
    ++degree[r.dst];
  }
  if (static_cast<std::size_t>(k) > degree.size()) {
    throw InputError("top-k subgraph: k = " + std::to_string(k) + " exceeds the " +
                     std::to_string(degree.size()) + " nodes present");
  }
  std::vector<std::pair<std::int64_t, std::size_t>> nodes(degree.begin(), degree.end());
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  std::unordered_map<std::int64_t, std::int64_t> relabel;
  relabel.reserve(static_cast<std::size_t>(k) * 2);
  for (Index r = 0; r < k; ++r) relabel.emplace(nodes[static_cast<std::size_t>(r)].first, r);

  std::vector<EdgeRecord> kept;
  for (const auto& r : records) {
    const auto s = relabel.find(r.src);
    const auto d = relabel.find(r.dst);
    if (s == relabel.end() || d == relabel.end()) continue;
    kept.push_back({s->second, d->second, r.sign});
  }
  return observations_from_records(kept, k, k);
}

TrainTest split_train_test(const SignedObservations& obs, const SplitSpec& spec) {
  if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
    throw InputError("train fraction must lie strictly between 0 and 1");
  }
  const std::size_t total = obs.size();
  const auto train_size =
      static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(total)));
  if (train_size == 0 || train_size == total) {
    throw InputError("split of " + std::to_string(total) + " entries at fraction " +
                     std::to_string(spec.train_fraction) + " leaves an empty side");
  }
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(spec.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<SignedEntry> train;
  std::vector<SignedEntry> test;
  train.reserve(train_size);
  test.reserve(total - train_size);
  for (std::size_t k = 0; k < total; ++k) {
    (k < train_size ? train : test).push_back(obs[order[k]]);
  }
  return TrainTest{SignedObservations(obs.rows(), obs.cols(), std::move(train)),
                   SignedObservations(obs.rows(), obs.cols(), std::move(test))};
}

SamplingScheme SamplingScheme::uniform() { return SamplingScheme{}; }

SamplingScheme SamplingScheme::degree_weighted(Index rows, Index cols, double gamma,
                                               std::uint64_t seed) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw InputError("gamma must be nonnegative");
  SamplingScheme s;
  s.kind = SamplingKind::DegreeWeighted;
  s.gamma = gamma;
  std::mt19937_64 rng(seed);
  auto make = [&](Index count) {
    std::vector<std::size_t> perm(static_cast<std::size_t>(count));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> w(static_cast<std::size_t>(count));
    for (std::size_t r = 0; r < perm.size(); ++r) {
      w[perm[r]] = std::pow(static_cast<double>(r + 1), -gamma);
    }
    return w;
  };
  s.row_weights = make(rows);
  s.col_weights = make(cols);
  return s;
}

SyntheticData gen_synthetic(Index rows, Index cols, Index rank, double flip_noise,
                            const SamplingScheme& scheme, std::size_t m_observed,
                            std::uint64_t seed) {
  if (rows < 1 || cols < 1) throw InputError("synthetic matrix needs positive dimensions");
  if (rank < 1 || rank > std::min(rows, cols)) {
    throw InputError("synthetic rank must lie in [1, min(rows, cols)]");
  }
  if (!(flip_noise >= 0.0 && flip_noise < 1.0)) throw InputError("flip_noise must lie in [0, 1)");
  const auto cells = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  if (m_observed > cells) throw InputError("cannot observe more entries than the matrix holds");
  const bool weighted = scheme.kind == SamplingKind::DegreeWeighted;
  if (weighted && (scheme.row_weights.size() != static_cast<std::size_t>(rows) ||
                   scheme.col_weights.size() != static_cast<std::size_t>(cols))) {
    throw InputError("sampling weights do not match the matrix shape");
  }
  if (weighted) {
    auto bad = [](double w) { return !(w > 0.0) || !std::isfinite(w); };
    if (std::any_of(scheme.row_weights.begin(), scheme.row_weights.end(), bad) ||
        std::any_of(scheme.col_weights.begin(), scheme.col_weights.end(), bad)) {
      throw InputError("sampling weights must be positive and finite");
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix product;
  for (;;) {
    DenseMatrix a(rows, rank);
    DenseMatrix b(cols, rank);
    for (Index k = 0; k < a.size(); ++k) a.data()[k] = normal(rng);
    for (Index k = 0; k < b.size(); ++k) b.data()[k] = normal(rng);
    product = a * b.transpose();
    if ((product.array() != 0.0).all()) break;  // a zero entry has no sign; redraw
  }
  SyntheticData out;
  out.truth = product.unaryExpr([](double x) { return x > 0.0 ? 1.0 : -1.0; });
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index k = 0; k < out.truth.size(); ++k) {
    if (unit(rng) < flip_noise) out.truth.data()[k] = -out.truth.data()[k];
  }

  // Weighted sampling without replacement via exponential keys E / w: the
  // m smallest keys form the sample.
  std::exponential_distribution<double> exponential(1.0);
  std::vector<std::pair<double, std::size_t>> keys(cells);
  for (std::size_t c = 0; c < cells; ++c) {
    double key = exponential(rng);
    if (weighted) {
      key /= scheme.row_weights[c / static_cast<std::size_t>(cols)] *
             scheme.col_weights[c % static_cast<std::size_t>(cols)];
    }
    keys[c] = {key, c};
  }
  if (m_observed < cells) {
    std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(m_observed),
                     keys.end());
  }
  std::vector<SignedEntry> entries;
  entries.reserve(m_observed);
  for (std::size_t k = 0; k < m_observed; ++k) {
    const std::size_t c = keys[k].second;
    const auto i = static_cast<Index>(c / static_cast<std::size_t>(cols));
    const auto j = static_cast<Index>(c % static_cast<std::size_t>(cols));
    entries.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j),
                       static_cast<std::int8_t>(out.truth(i, j) > 0.0 ? 1 : -1)});
  }
  out.observations = SignedObservations(rows, cols, std::move(entries));
  return out;
}

void write_metadata(std::ostream& out, const Metadata& meta) {
  for (const auto& [key, value] : meta) out << key << '=' << value << '\n';
}

Metadata read_metadata(std::istream& in, const std::string& source_name) {
  Metadata meta;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ParseError(source_name, line_no, "expected key=value");
    }
    meta.emplace_back(line.substr(0, eq), line.substr(eq + 1));
  }
  return meta;
}

}  // namespace mmc
