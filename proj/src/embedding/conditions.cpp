#include "cxprobe/embedding/conditions.hpp"

#include <cmath>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/text.hpp"
#include "cxprobe/embedding/pooling.hpp"

namespace cxprobe::embedding {

namespace {

std::vector<std::vector<std::string>> shuffled_variants(const corpus::Dataset& dataset,
                                                        std::uint64_t seed,
                                                        std::size_t shuffles) {
  std::vector<std::vector<std::string>> out;
  out.reserve(dataset.entries.size());
  for (const auto& e : dataset.entries) {
    Rng rng(derive_seed(seed, "embedding.shuffle", {text::fnv1a64(e.sentence_id)}));
    std::vector<std::string> variants;
    for (std::size_t s = 0; s < shuffles; ++s) variants.push_back(shuffle_words(e.text, rng));
    out.push_back(std::move(variants));
  }
  return out;
}

void check_shuffles(EmbeddingCondition condition, std::size_t shuffles) {
  if (condition == EmbeddingCondition::GrammarFocused && shuffles == 0) {
    throw std::invalid_argument("GrammarFocused needs at least one shuffle per sentence");
  }
}

}  // namespace

std::vector<std::string> condition_texts(const corpus::Dataset& dataset,
                                         EmbeddingCondition condition, std::uint64_t seed,
                                         std::size_t shuffles) {
  check_shuffles(condition, shuffles);
  std::vector<std::string> texts;
  for (const auto& e : dataset.entries) texts.push_back(e.text);
  if (condition == EmbeddingCondition::GrammarFocused) {
    for (auto& variants : shuffled_variants(dataset, seed, shuffles)) {
      for (auto& v : variants) texts.push_back(std::move(v));
    }
  }
  return texts;
}

std::vector<EmbeddingVector> build_condition_set(const corpus::Dataset& dataset,
                                                 EmbeddingAcquirer& acquirer,
                                                 EmbeddingCondition condition,
                                                 std::uint64_t seed, std::size_t shuffles) {
  const std::size_t n = dataset.entries.size();
  const std::vector<std::string> texts = condition_texts(dataset, condition, seed, shuffles);
  const std::vector<LayerTokenMatrix> matrices = acquirer.acquire(texts);

  std::vector<EmbeddingVector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> values = pool_token_layers(matrices[i]);
    if (condition == EmbeddingCondition::GrammarFocused) {
      // Mean of the shuffled variants, written as first + mean(offsets) so a
      // set of identical variants yields that variant exactly.
      const std::vector<double> first = pool_token_layers(matrices[n + i * shuffles]);
      std::vector<double> offset(first.size(), 0.0);
      for (std::size_t s = 1; s < shuffles; ++s) {
        const std::vector<double> v = pool_token_layers(matrices[n + i * shuffles + s]);
        for (std::size_t d = 0; d < v.size(); ++d) offset[d] += v[d] - first[d];
      }
      std::vector<double> mean_shuffled(first.size());
      for (std::size_t d = 0; d < first.size(); ++d) {
        mean_shuffled[d] = first[d] + offset[d] / static_cast<double>(shuffles);
      }
      values = grammar_focus(values, mean_shuffled);
    }
    for (double v : values) {
      if (!std::isfinite(v)) {
        throw DegenerateInputError("non-finite embedding value for " +
                                   dataset.entries[i].sentence_id);
      }
    }
    out.push_back(EmbeddingVector{dataset.entries[i].sentence_id, condition, std::move(values)});
  }
  return out;
}

}  // namespace cxprobe::embedding
