#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cxprobe::embedding {

enum class EmbeddingCondition { Direct, GrammarFocused };

std::string_view to_string(EmbeddingCondition c);
std::string_view display_name(EmbeddingCondition c);
std::optional<EmbeddingCondition> parse_condition(std::string_view s);

enum class ProviderMode { Http, File, Mock };

std::string_view to_string(ProviderMode m);
std::optional<ProviderMode> parse_provider_mode(std::string_view s);

struct ProviderSpec {
  ProviderMode mode = ProviderMode::Mock;
  std::string endpoint;  // base URL for Http, cache file path for File
  std::string model_id = "mock-bow";
  std::vector<int> layer_offsets = {-1, -2};

  std::size_t in_flight = 4;
  std::size_t batch_size = 16;
  int max_retries = 3;
  int backoff_ms = 100;
  int timeout_ms = 60000;

  // Built-in mock only.
  std::size_t mock_dim = 64;
  bool mock_order_invariant = false;

  // Throws ConfigError when layer_offsets is empty, non-negative or repeated.
  void validate() const;
  std::string identity() const;
};

// Hidden states for one text: layers x tokens x dim.
struct LayerTokenMatrix {
  std::string text;
  std::vector<std::vector<std::vector<float>>> layers;
  std::size_t dim = 0;

  std::size_t token_count() const { return layers.empty() ? 0 : layers.front().size(); }

  // Throws DimensionError on ragged shapes.
  void validate() const;

  friend bool operator==(const LayerTokenMatrix&, const LayerTokenMatrix&) = default;
};

struct EmbeddingVector {
  std::string sentence_id;
  EmbeddingCondition condition = EmbeddingCondition::Direct;
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }

  friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

}  // namespace cxprobe::embedding
