#include "cxprobe/sorting/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cxprobe/common/error.hpp"
#include "cxprobe/probe/kmeans.hpp"

namespace cxprobe::sorting {

namespace {

PairKey make_key(const std::string& a, const std::string& b) {
  return a < b ? PairKey{a, b} : PairKey{b, a};
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

std::map<PairKey, PairStat> pair_statistics(const std::vector<SortingTrial>& trials) {
  std::map<PairKey, PairStat> stats;
  for (const SortingTrial& t : trials) {
    if (t.degenerate) continue;
    const auto& ids = t.stimuli_ids;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const bool ri = contains(t.returned_ids, ids[i]);
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        const bool rj = contains(t.returned_ids, ids[j]);
        PairStat& s = stats[make_key(ids[i], ids[j])];
        if (ri == rj) ++s.together;
        else ++s.apart;
      }
    }
  }
  return stats;
}

ConsistencyResult consistency_accuracy(const std::vector<SortingTrial>& trials) {
  ConsistencyResult result;
  for (const SortingTrial& t : trials) {
    if (!t.degenerate) ++result.trials_used;
  }
  double sum = 0.0;
  for (const auto& [key, s] : pair_statistics(trials)) {
    if (s.total() < 2) continue;
    sum += static_cast<double>(std::max(s.together, s.apart)) / static_cast<double>(s.total());
    ++result.qualifying_pairs;
  }
  if (result.qualifying_pairs == 0) {
    throw UndefinedMetricError("no sentence pair shares two or more non-degenerate trials");
  }
  result.percentage = 100.0 * sum / static_cast<double>(result.qualifying_pairs);
  return result;
}

std::string_view to_string(MatrixMode m) {
  return m == MatrixMode::PositivesOnly ? "positives-only" : "both-sides";
}

std::optional<MatrixMode> parse_matrix_mode(std::string_view s) {
  if (s == "positives-only") return MatrixMode::PositivesOnly;
  if (s == "both-sides") return MatrixMode::BothSides;
  return std::nullopt;
}

std::string_view to_string(VectorMode m) {
  switch (m) {
    case VectorMode::Raw: return "raw";
    case VectorMode::Binary: return "binary";
    case VectorMode::RowNormalized: return "row-normalized";
  }
  return "?";
}

std::optional<VectorMode> parse_vector_mode(std::string_view s) {
  if (s == "raw") return VectorMode::Raw;
  if (s == "binary") return VectorMode::Binary;
  if (s == "row-normalized") return VectorMode::RowNormalized;
  return std::nullopt;
}

bool CooccurrenceMatrix::has_pairing(std::size_t i) const {
  return std::any_of(counts[i].begin(), counts[i].end(), [](std::size_t c) { return c > 0; });
}

CooccurrenceMatrix build_cooccurrence(const std::vector<SortingTrial>& trials, MatrixMode mode) {
  std::set<std::string> ids;
  for (const SortingTrial& t : trials) ids.insert(t.stimuli_ids.begin(), t.stimuli_ids.end());

  CooccurrenceMatrix m;
  m.mode = mode;
  m.sentence_ids.assign(ids.begin(), ids.end());
  const std::size_t n = m.sentence_ids.size();
  m.counts.assign(n, std::vector<std::size_t>(n, 0));
  auto index_of = [&](const std::string& id) {
    return static_cast<std::size_t>(
        std::lower_bound(m.sentence_ids.begin(), m.sentence_ids.end(), id) -
        m.sentence_ids.begin());
  };
  auto count_group = [&](const std::vector<std::string>& group) {
    for (std::size_t a = 0; a < group.size(); ++a) {
      for (std::size_t b = a + 1; b < group.size(); ++b) {
        const std::size_t i = index_of(group[a]), j = index_of(group[b]);
        ++m.counts[i][j];
        ++m.counts[j][i];
      }
    }
  };

  for (const SortingTrial& t : trials) {
    if (t.degenerate) continue;
    count_group(t.returned_ids);
    if (mode == MatrixMode::BothSides) {
      std::vector<std::string> left_out;
      for (const auto& id : t.stimuli_ids) {
        if (!contains(t.returned_ids, id)) left_out.push_back(id);
      }
      count_group(left_out);
    }
  }
  return m;
}

ClusterAccuracy cluster_accuracy(const CooccurrenceMatrix& matrix, std::uint64_t seed,
                                 VectorMode vectors, std::size_t restarts) {
  const std::size_t n = matrix.sentence_ids.size();
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix.has_pairing(i)) active.push_back(i);
  }
  if (active.size() < 2) {
    throw DegenerateInputError("cluster_accuracy needs at least two paired sentences");
  }

  probe::Matrix points(active.size(), n);
  for (std::size_t r = 0; r < active.size(); ++r) {
    const auto& row = matrix.counts[active[r]];
    double norm = 0.0;
    for (std::size_t c : row) norm += static_cast<double>(c) * static_cast<double>(c);
    norm = std::sqrt(norm);
    for (std::size_t j = 0; j < n; ++j) {
      const double c = static_cast<double>(row[j]);
      switch (vectors) {
        case VectorMode::Raw: points(r, j) = c; break;
        case VectorMode::Binary: points(r, j) = c > 0 ? 1.0 : 0.0; break;
        case VectorMode::RowNormalized: points(r, j) = c / norm; break;
      }
    }
  }
  const probe::ClusterAssignment clusters =
      probe::kmeans(points, probe::KMeansOptions{.k = 2, .seed = seed, .restarts = restarts});

  ClusterAccuracy out;
  out.labels.assign(n, -1);
  for (std::size_t r = 0; r < active.size(); ++r) {
    out.labels[active[r]] = static_cast<int>(clusters.labels[r]);
  }
  out.paired = active.size();
  for (std::size_t i : active) {
    bool consistent = true;
    for (std::size_t j = 0; j < n && consistent; ++j) {
      if (matrix.counts[i][j] > 0 && out.labels[j] != out.labels[i]) consistent = false;
    }
    if (consistent) ++out.consistent;
  }
  out.percentage = 100.0 * static_cast<double>(out.consistent) / static_cast<double>(out.paired);
  return out;
}

}  // namespace cxprobe::sorting
