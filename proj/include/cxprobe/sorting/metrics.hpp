#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cxprobe/sorting/trial.hpp"

namespace cxprobe::sorting {

struct PairStat {
  std::size_t together = 0;  // both returned or both left out
  std::size_t apart = 0;

  std::size_t total() const { return together + apart; }
};

using PairKey = std::pair<std::string, std::string>;  // ordered: first < second

// Together/apart counts for every stimulus pair over non-degenerate trials.
std::map<PairKey, PairStat> pair_statistics(const std::vector<SortingTrial>& trials);

struct ConsistencyResult {
  double percentage = 0.0;        // mean pair agreement x 100
  std::size_t qualifying_pairs = 0;
  std::size_t trials_used = 0;
};

// Pairs sharing at least two non-degenerate trials; agreement of a pair is
// max(together, apart) / (together + apart). Throws UndefinedMetricError
// when no pair qualifies.
ConsistencyResult consistency_accuracy(const std::vector<SortingTrial>& trials);

enum class MatrixMode { PositivesOnly, BothSides };
// RowNormalized scales each row to unit Euclidean length.
enum class VectorMode { Raw, Binary, RowNormalized };

std::string_view to_string(MatrixMode m);
std::optional<MatrixMode> parse_matrix_mode(std::string_view s);
std::string_view to_string(VectorMode m);
std::optional<VectorMode> parse_vector_mode(std::string_view s);

struct CooccurrenceMatrix {
  std::vector<std::string> sentence_ids;  // sorted
  std::vector<std::vector<std::size_t>> counts;
  MatrixMode mode = MatrixMode::PositivesOnly;

  bool has_pairing(std::size_t i) const;
};

// Pair counts over non-degenerate trials. PositivesOnly counts joint
// membership in the returned set; BothSides also counts joint membership in
// the set left out.
CooccurrenceMatrix build_cooccurrence(const std::vector<SortingTrial>& trials,
                                      MatrixMode mode = MatrixMode::PositivesOnly);

struct ClusterAccuracy {
  std::vector<int> labels;  // per sentence; -1 for sentences with no pairing
  double percentage = 0.0;
  std::size_t consistent = 0;
  std::size_t paired = 0;
};

// Two-way k-means over the rows of sentences that have at least one pairing.
// A sentence is consistent when all of its partners share its cluster.
ClusterAccuracy cluster_accuracy(const CooccurrenceMatrix& matrix, std::uint64_t seed,
                                 VectorMode vectors = VectorMode::RowNormalized, std::size_t restarts = 10);

}  // namespace cxprobe::sorting
