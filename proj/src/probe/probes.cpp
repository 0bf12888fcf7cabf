#include "cxprobe/probe/probes.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/probe/kmeans.hpp"
#include "cxprobe/probe/logistic.hpp"

namespace cxprobe::probe {

Standardizer Standardizer::fit(const Matrix& x, std::span<const std::size_t> rows) {
  const std::size_t d = x.cols();
  Standardizer s{std::vector<double>(d, 0.0), std::vector<double>(d, 1.0)};
  const double n = static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    auto row = x.row(r);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += row[j];
  }
  for (double& m : s.mean) m /= n;
  std::vector<double> var(d, 0.0);
  for (std::size_t r : rows) {
    auto row = x.row(r);
    for (std::size_t j = 0; j < d; ++j) {
      const double c = row[j] - s.mean[j];
      var[j] += c * c;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    const double sd = std::sqrt(var[j] / n);
    s.scale[j] = sd > 1e-12 ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& x, std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto src = x.row(rows[i]);
    auto dst = out.row(i);
    for (std::size_t j = 0; j < x.cols(); ++j) dst[j] = (src[j] - mean[j]) / scale[j];
  }
  return out;
}

std::vector<double> cross_validated_f(const Matrix& x, std::span<const int> labels,
                                      std::uint64_t seed, const ProbeOptions& opts,
                                      int positive) {
  const FoldSplit split = kfold_split(labels, opts.folds, seed, /*stratified=*/true);
  std::vector<double> per_fold;
  per_fold.reserve(opts.folds);
  for (std::size_t f = 0; f < opts.folds; ++f) {
    const auto train = split.train_indices(f);
    const auto test = split.test_indices(f);
    const Standardizer z = Standardizer::fit(x, train);
    std::vector<int> y_train, y_test;
    for (std::size_t i : train) y_train.push_back(labels[i]);
    for (std::size_t i : test) y_test.push_back(labels[i]);
    const LinearClassifier clf = train_classifier(z.apply(x, train), y_train, opts.regularization);
    per_fold.push_back(f_score(clf.predict(z.apply(x, test)), y_test, positive));
  }
  return per_fold;
}

Matrix to_matrix(const std::vector<embedding::EmbeddingVector>& vectors) {
  std::vector<std::vector<double>> rows;
  rows.reserve(vectors.size());
  for (const auto& v : vectors) rows.push_back(v.values);
  return Matrix::from_rows(rows);
}

namespace {

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct PuppetSplit {
  std::vector<int> labels;  // 1 = positive (smaller) cluster
  std::vector<std::size_t> sizes;
  int positive_cluster = 1;
  bool na = false;
};

PuppetSplit puppet_split(const Matrix& x, std::uint64_t seed, const ProbeOptions& opts) {
  if (x.rows() < 2 * opts.folds) {
    throw DegenerateInputError("false_positive_probe needs at least " +
                               std::to_string(2 * opts.folds) + " items, got " +
                               std::to_string(x.rows()));
  }
  const ClusterAssignment clusters =
      kmeans(x, KMeansOptions{.k = 2,
                              .seed = derive_seed(seed, "probe.kmeans"),
                              .restarts = opts.kmeans_restarts});
  PuppetSplit split;
  split.sizes = clusters.cluster_sizes();
  // Smaller cluster is positive; on a tie, cluster 1.
  split.positive_cluster = split.sizes[0] < split.sizes[1] ? 0 : 1;
  split.na = split.sizes[static_cast<std::size_t>(split.positive_cluster)] < opts.folds;
  split.labels.resize(x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    split.labels[i] = static_cast<int>(clusters.labels[i]) == split.positive_cluster ? 1 : 0;
  }
  return split;
}

ProbeReport probe_labels(const Matrix& x, const PuppetSplit& split, std::uint64_t seed,
                         const ProbeOptions& opts) {
  ProbeReport report;
  report.cluster_sizes = split.sizes;
  report.positive_class = split.positive_cluster;
  if (split.na) {
    report.na = true;
    report.na_reason = "single cluster";
    report.mean_f = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  report.per_fold_f = cross_validated_f(x, split.labels, derive_seed(seed, "probe.cv"), opts);
  report.mean_f = mean_of(report.per_fold_f);
  return report;
}

}  // namespace

ValidationReport validation_probe(const CategoryEmbeddings& embeddings,
                                  embedding::EmbeddingCondition condition, std::uint64_t seed,
                                  const ProbeOptions& opts) {
  const std::size_t n = embeddings[0].size();
  for (const auto& group : embeddings) {
    if (group.empty() || group.size() != n) {
      throw DegenerateInputError("validation_probe needs equal, non-zero counts per category");
    }
  }
  std::array<Matrix, corpus::kAllCategories.size()> features;
  for (std::size_t c = 0; c < features.size(); ++c) features[c] = to_matrix(embeddings[c]);
  const std::size_t dim = features[0].cols();
  for (const auto& m : features) {
    if (m.cols() != dim) throw DimensionError("categories have different embedding dims");
  }

  ValidationReport report;
  report.condition = condition;
  const std::size_t k = features.size();
  for (std::size_t c = 0; c < k; ++c) {
    double sum = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
      if (d == c) {
        report.task_f[c][d] = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      Matrix x(2 * n, dim);
      std::vector<int> labels(2 * n);
      for (std::size_t i = 0; i < n; ++i) {
        std::copy_n(features[c].row(i).begin(), dim, x.row(i).begin());
        std::copy_n(features[d].row(i).begin(), dim, x.row(n + i).begin());
        labels[i] = 1;
        labels[n + i] = 0;
      }
      const auto folds = cross_validated_f(x, labels, derive_seed(seed, "validation", {c, d}), opts);
      report.task_f[c][d] = mean_of(folds);
      sum += report.task_f[c][d];
    }
    report.cells[c] = sum / static_cast<double>(k - 1);
  }
  return report;
}

ProbeReport false_positive_probe(const Matrix& x, std::uint64_t seed, const ProbeOptions& opts) {
  return probe_labels(x, puppet_split(x, seed, opts), seed, opts);
}

ProbeReport false_positive_probe(const std::vector<embedding::EmbeddingVector>& embeddings,
                                 std::uint64_t seed, const ProbeOptions& opts) {
  return false_positive_probe(to_matrix(embeddings), seed, opts);
}

ProbeReport permuted_label_probe(const Matrix& x, std::uint64_t seed, const ProbeOptions& opts) {
  PuppetSplit split = puppet_split(x, seed, opts);
  Rng rng(derive_seed(seed, "probe.permute"));
  rng.shuffle(std::span<int>(split.labels));
  return probe_labels(x, split, seed, opts);
}

ProbeReport length_baseline_probe(const Matrix& x, std::span<const double> lengths,
                                  std::uint64_t seed, const ProbeOptions& opts) {
  if (lengths.size() != x.rows()) throw DimensionError("one length per item required");
  const PuppetSplit split = puppet_split(x, seed, opts);
  Matrix len(lengths.size(), 1);
  for (std::size_t i = 0; i < lengths.size(); ++i) len(i, 0) = lengths[i];
  return probe_labels(len, split, seed, opts);
}

}  // namespace cxprobe::probe
