#include "cxprobe/probe/crossval.hpp"

#include <map>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"

namespace cxprobe::probe {

std::vector<std::size_t> FoldSplit::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldSplit::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldSplit::fold_sizes() const {
  std::vector<std::size_t> sizes(k, 0);
  for (std::size_t a : assignments) ++sizes[a];
  return sizes;
}

FoldSplit kfold_split(std::span<const int> labels, std::size_t k, std::uint64_t seed,
                      bool stratified) {
  if (k < 2) throw std::invalid_argument("kfold_split: k must be at least 2");
  FoldSplit split{k, std::vector<std::size_t>(labels.size(), 0)};
  Rng rng(derive_seed(seed, "kfold"));

  std::map<int, std::vector<std::size_t>> groups;
  if (stratified) {
    for (std::size_t i = 0; i < labels.size(); ++i) groups[labels[i]].push_back(i);
    for (const auto& [label, members] : groups) {
      if (members.size() < k) {
        throw StratificationError("class " + std::to_string(label) + " has " +
                                  std::to_string(members.size()) + " members, fewer than " +
                                  std::to_string(k) + " folds");
      }
    }
  } else {
    auto& all = groups[0];
    for (std::size_t i = 0; i < labels.size(); ++i) all.push_back(i);
  }

  std::size_t counter = 0;
  for (auto& [label, members] : groups) {
    rng.shuffle(std::span<std::size_t>(members));
    for (std::size_t idx : members) split.assignments[idx] = counter++ % k;
  }
  return split;
}

double f_score(std::span<const int> predicted, std::span<const int> gold, int positive) {
  if (predicted.size() != gold.size()) {
    throw DimensionError("f_score: " + std::to_string(predicted.size()) + " predictions for " +
                         std::to_string(gold.size()) + " gold labels");
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool p = predicted[i] == positive, g = gold[i] == positive;
    if (p && g) ++tp;
    else if (p) ++fp;
    else if (g) ++fn;
  }
  // F1 = 2TP / (2TP + FP + FN); zero exactly when precision + recall is zero.
  if (tp == 0) return 0.0;
  return 2.0 * static_cast<double>(tp) / static_cast<double>(2 * tp + fp + fn);
}

}  // namespace cxprobe::probe
