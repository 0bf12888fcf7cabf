#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cxprobe/common/rng.hpp"
#include "cxprobe/embedding/types.hpp"

namespace cxprobe::embedding {

// Mean over token positions within each layer, then mean across layers.
// Each mean is summed in sorted order, so the result is bitwise independent
// of token order and of layer order.
std::vector<double> pool_token_layers(const LayerTokenMatrix& matrix);

// Uniform permutation of whitespace-delimited words, rejoined with single
// spaces. The identity permutation is a possible outcome.
std::string shuffle_words(std::string_view text, Rng& rng);

// direct - shuffled, elementwise. Throws DimensionError on length mismatch.
std::vector<double> grammar_focus(std::span<const double> direct,
                                  std::span<const double> shuffled);

}  // namespace cxprobe::embedding
