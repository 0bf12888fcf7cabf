#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cxprobe::probe {

struct FoldSplit {
  std::size_t k = 0;
  std::vector<std::size_t> assignments;  // fold index per item

  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> fold_sizes() const;
};

// Seeded shuffle, then round-robin fold assignment. When stratified, items
// are dealt class by class (ascending label) with the fold counter carried
// over between classes, which balances both per-class and overall fold
// sizes. Throws StratificationError when a class has fewer than k members.
FoldSplit kfold_split(std::span<const int> labels, std::size_t k, std::uint64_t seed,
                      bool stratified);

// F1 of `positive`; 0 when precision + recall is 0. Throws DimensionError
// on length mismatch.
double f_score(std::span<const int> predicted, std::span<const int> gold, int positive = 1);

}  // namespace cxprobe::probe
