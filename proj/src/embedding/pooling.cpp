#include "cxprobe/embedding/pooling.hpp"

#include <algorithm>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/text.hpp"

namespace cxprobe::embedding {

namespace {

double sorted_mean(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<double> pool_token_layers(const LayerTokenMatrix& matrix) {
  if (matrix.layers.empty()) throw DegenerateInputError("no layers to pool");
  if (matrix.token_count() == 0) throw DegenerateInputError("no tokens to pool");
  matrix.validate();

  const std::size_t dim = matrix.dim;
  const std::size_t n_layers = matrix.layers.size();
  std::vector<std::vector<double>> layer_means(n_layers, std::vector<double>(dim));
  std::vector<double> column;
  for (std::size_t l = 0; l < n_layers; ++l) {
    const auto& tokens = matrix.layers[l];
    for (std::size_t d = 0; d < dim; ++d) {
      column.clear();
      for (const auto& tok : tokens) column.push_back(tok[d]);
      layer_means[l][d] = sorted_mean(column);
    }
  }

  std::vector<double> pooled(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    column.clear();
    for (std::size_t l = 0; l < n_layers; ++l) column.push_back(layer_means[l][d]);
    pooled[d] = sorted_mean(column);
  }
  return pooled;
}

std::string shuffle_words(std::string_view sentence, Rng& rng) {
  std::vector<std::string> words = text::split_whitespace(sentence);
  rng.shuffle(std::span<std::string>(words));
  return text::join(words, " ");
}

std::vector<double> grammar_focus(std::span<const double> direct,
                                  std::span<const double> shuffled) {
  if (direct.size() != shuffled.size()) {
    throw DimensionError("grammar_focus: lengths " + std::to_string(direct.size()) + " and " +
                         std::to_string(shuffled.size()));
  }
  std::vector<double> out(direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) out[i] = direct[i] - shuffled[i];
  return out;
}

}  // namespace cxprobe::embedding
