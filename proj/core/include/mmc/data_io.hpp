#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mmc/matrix.hpp"
#include "mmc/observations.hpp"

namespace mmc {

/// One signed link from a raw edge list, using the dataset's own node ids.
struct EdgeRecord {
  std::int64_t src = 0;
  std::int64_t dst = 0;
  std::int8_t sign = 1;

  friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

struct DatasetSummary {
  std::size_t users = 0;
  std::size_t trust_edges = 0;
  std::size_t distrust_edges = 0;

  std::size_t total_edges() const { return trust_edges + distrust_edges; }
  friend bool operator==(const DatasetSummary&, const DatasetSummary&) = default;
};

struct EdgeList {
  std::vector<EdgeRecord> records;
  DatasetSummary summary;
  // Declared matrix shape from a "# shape <rows> <cols>" header, if present.
  std::optional<std::pair<Index, Index>> shape;
};

/// Parses whitespace-separated "src dst sign" lines. Lines starting with '#'
/// are comments; sign tokens 1, +1 and -1 are accepted. Throws ParseError
/// with the line number on anything else.
EdgeList parse_edge_list(std::istream& in, const std::string& source_name = "<stream>");
EdgeList load_edge_list(const std::filesystem::path& path);

DatasetSummary summarize(const std::vector<EdgeRecord>& records);

/// Writes a "# shape" header followed by one "src dst sign" line per record.
void write_edge_list(std::ostream& out, const std::vector<EdgeRecord>& records,
                     std::optional<std::pair<Index, Index>> shape = std::nullopt);
void save_edge_list(const std::filesystem::path& path, const std::vector<EdgeRecord>& records,
                    std::optional<std::pair<Index, Index>> shape = std::nullopt);

std::vector<EdgeRecord> to_records(const SignedObservations& obs);

/// Builds observations over ids 0..rows-1 x 0..cols-1. A repeated (src, dst)
/// keeps its first occurrence and logs a warning; ids out of range throw InputError.
SignedObservations observations_from_records(const std::vector<EdgeRecord>& records, Index rows,
                                             Index cols);

/// Keeps the k nodes of largest total degree (in + out, ties to the smaller
/// id), relabels them 0..k-1 by descending degree and returns the k x k
/// observations among them. Throws InputError if k < 1 or k exceeds the node count.
SignedObservations top_k_degree_subgraph(const std::vector<EdgeRecord>& records, Index k);

struct SplitSpec {
  double train_fraction = 0.5;
  std::uint64_t seed = 0;
};

struct TrainTest {
  SignedObservations train;
  SignedObservations test;
};

/// Seeded uniform split: floor(fraction * |T|) entries go to train, the rest to
/// test. Throws InputError if either side would be empty.
TrainTest split_train_test(const SignedObservations& obs, const SplitSpec& spec);

enum class SamplingKind { Uniform, DegreeWeighted };

/// Position (i, j) is drawn with weight row_weights[i] * col_weights[j]
/// (without replacement). Uniform ignores the weights.
struct SamplingScheme {
  SamplingKind kind = SamplingKind::Uniform;
  std::vector<double> row_weights;
  std::vector<double> col_weights;
  double gamma = 0.0;  // recorded for metadata only

  static SamplingScheme uniform();
  /// w proportional to (rank + 1)^-gamma over a seeded random permutation of rows and of columns.
  static SamplingScheme degree_weighted(Index rows, Index cols, double gamma, std::uint64_t seed);
};

struct SyntheticData {
  DenseMatrix truth;  // p x n, entries -1 / +1
  SignedObservations observations;
};

/// Truth M = sign(A B^T) for seeded Gaussian A (p x rank), B (n x rank), each
/// entry flipped with probability flip_noise, then m_observed distinct
/// positions drawn per the scheme.
SyntheticData gen_synthetic(Index rows, Index cols, Index rank, double flip_noise,
                            const SamplingScheme& scheme, std::size_t m_observed,
                            std::uint64_t seed);

/// Sidecar metadata, one "key=value" per line in insertion order.
using Metadata = std::vector<std::pair<std::string, std::string>>;
void write_metadata(std::ostream& out, const Metadata& meta);
Metadata read_metadata(std::istream& in, const std::string& source_name = "<stream>");

}  // namespace mmc
