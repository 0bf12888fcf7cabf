#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cxprobe/corpus/category.hpp"
#include "cxprobe/embedding/types.hpp"
#include "cxprobe/probe/crossval.hpp"
#include "cxprobe/probe/matrix.hpp"

namespace cxprobe::probe {

struct ProbeOptions {
  std::size_t folds = 5;
  double regularization = 1.0;
  std::size_t kmeans_restarts = 10;
};

struct ProbeReport {
  std::vector<double> per_fold_f;
  double mean_f = 0.0;
  int positive_class = 1;
  bool na = false;
  std::string na_reason;
  std::vector<std::size_t> cluster_sizes;
};

// Per-dimension z-scoring. Dimensions with zero spread are centred only.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer fit(const Matrix& x, std::span<const std::size_t> rows);
  Matrix apply(const Matrix& x, std::span<const std::size_t> rows) const;
};

// Stratified k-fold logistic probe of binary labels. Each fold standardizes
// on its training rows only. Returns the f-score of `positive` per fold.
std::vector<double> cross_validated_f(const Matrix& x, std::span<const int> labels,
                                      std::uint64_t seed, const ProbeOptions& opts,
                                      int positive = 1);

Matrix to_matrix(const std::vector<embedding::EmbeddingVector>& vectors);

using CategoryEmbeddings =
    std::array<std::vector<embedding::EmbeddingVector>, corpus::kAllCategories.size()>;

struct ValidationReport {
  embedding::EmbeddingCondition condition = embedding::EmbeddingCondition::Direct;
  // cells[c]: mean over the four "c vs d" tasks of each task's mean fold f,
  // with c as the positive class.
  std::array<double, corpus::kAllCategories.size()> cells{};
  // task_f[c][d]: mean fold f of the c-vs-d task; diagonal unused (NaN).
  std::array<std::array<double, corpus::kAllCategories.size()>, corpus::kAllCategories.size()>
      task_f{};
};

// True-construction check: every category against every other category.
// Throws DegenerateInputError unless all categories have the same nonzero
// count.
ValidationReport validation_probe(const CategoryEmbeddings& embeddings,
                                  embedding::EmbeddingCondition condition, std::uint64_t seed,
                                  const ProbeOptions& opts = {});

// Puppet-hypothesis check on one category: split it in two with k-means and
// probe whether a linear classifier confirms the split. The smaller cluster
// is the positive class. When it has fewer members than there are folds the
// report is NA ("single cluster").
ProbeReport false_positive_probe(const std::vector<embedding::EmbeddingVector>& embeddings,
                                 std::uint64_t seed, const ProbeOptions& opts = {});
ProbeReport false_positive_probe(const Matrix& x, std::uint64_t seed,
                                 const ProbeOptions& opts = {});

// Same pipeline with the cluster labels randomly permuted before probing;
// a probe that reads real structure should fall to chance here.
ProbeReport permuted_label_probe(const Matrix& x, std::uint64_t seed,
                                 const ProbeOptions& opts = {});

// Diagnostic: probe the k-means split using sentence length (word count) as
// the only feature.
ProbeReport length_baseline_probe(const Matrix& x, std::span<const double> lengths,
                                  std::uint64_t seed, const ProbeOptions& opts = {});

}  // namespace cxprobe::probe
