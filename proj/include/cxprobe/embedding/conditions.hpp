#pragma once

#include <cstdint>
#include <vector>

#include "cxprobe/corpus/dataset.hpp"
#include "cxprobe/embedding/provider.hpp"
#include "cxprobe/embedding/types.hpp"

namespace cxprobe::embedding {

// One pooled vector per dataset entry, in dataset order.
//   Direct          pooled original sentence
//   GrammarFocused  pooled original minus the mean of `shuffles` pooled
//                   word-shuffled variants
// Shuffles for an entry are seeded from (seed, sentence_id).
std::vector<EmbeddingVector> build_condition_set(const corpus::Dataset& dataset,
                                                 EmbeddingAcquirer& acquirer,
                                                 EmbeddingCondition condition,
                                                 std::uint64_t seed,
                                                 std::size_t shuffles = 1);

// Texts (originals followed by shuffles) that build_condition_set will
// request for the given condition; used to warm a cache.
std::vector<std::string> condition_texts(const corpus::Dataset& dataset,
                                         EmbeddingCondition condition, std::uint64_t seed,
                                         std::size_t shuffles = 1);

}  // namespace cxprobe::embedding
