#include "cxprobe/embedding/types.hpp"

#include <set>

#include "cxprobe/common/error.hpp"

namespace cxprobe::embedding {

std::string_view to_string(EmbeddingCondition c) {
  return c == EmbeddingCondition::Direct ? "Direct" : "GrammarFocused";
}

std::string_view display_name(EmbeddingCondition c) {
  return c == EmbeddingCondition::Direct ? "Direct Embeddings" : "Grammar-Focused";
}

std::optional<EmbeddingCondition> parse_condition(std::string_view s) {
  if (s == "Direct") return EmbeddingCondition::Direct;
  if (s == "GrammarFocused") return EmbeddingCondition::GrammarFocused;
  return std::nullopt;
}

std::string_view to_string(ProviderMode m) {
  switch (m) {
    case ProviderMode::Http: return "http";
    case ProviderMode::File: return "file";
    case ProviderMode::Mock: return "mock";
  }
  return "?";
}

std::optional<ProviderMode> parse_provider_mode(std::string_view s) {
  if (s == "http") return ProviderMode::Http;
  if (s == "file") return ProviderMode::File;
  if (s == "mock") return ProviderMode::Mock;
  return std::nullopt;
}

void ProviderSpec::validate() const {
  if (layer_offsets.empty()) throw ConfigError("layer_offsets must not be empty");
  std::set<int> seen;
  for (int l : layer_offsets) {
    if (l >= 0) throw ConfigError("layer offsets must be negative, got " + std::to_string(l));
    if (!seen.insert(l).second) throw ConfigError("duplicate layer offset " + std::to_string(l));
  }
  if (in_flight == 0) throw ConfigError("in_flight must be at least 1");
  if (batch_size == 0) throw ConfigError("batch_size must be at least 1");
  if (mode != ProviderMode::Mock && endpoint.empty()) {
    throw ConfigError("provider endpoint is required in " + std::string(to_string(mode)) + " mode");
  }
}

std::string ProviderSpec::identity() const {
  std::string layers;
  for (int l : layer_offsets) layers += (layers.empty() ? "" : ",") + std::to_string(l);
  return std::string(to_string(mode)) + ":" + model_id + "@[" + layers + "]";
}

void LayerTokenMatrix::validate() const {
  if (dim == 0) throw DimensionError("matrix dim must be positive");
  const std::size_t tokens = token_count();
  for (const auto& layer : layers) {
    if (layer.size() != tokens) throw DimensionError("token count differs between layers");
    for (const auto& v : layer) {
      if (v.size() != dim) {
        throw DimensionError("token vector of length " + std::to_string(v.size()) +
                             ", expected " + std::to_string(dim));
      }
    }
  }
}

}  // namespace cxprobe::embedding
