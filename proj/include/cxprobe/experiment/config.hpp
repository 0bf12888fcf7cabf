#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cxprobe/embedding/types.hpp"
#include "cxprobe/sorting/chat.hpp"
#include "cxprobe/sorting/metrics.hpp"

namespace cxprobe::experiment {

inline constexpr std::string_view kToolkitVersion = "0.1.0";

enum class ChatMode { Http, MockPuppet, MockRandom, MockAlphabetical };

std::string_view to_string(ChatMode m);
std::optional<ChatMode> parse_chat_mode(std::string_view s);

struct ChatSpec {
  ChatMode mode = ChatMode::MockPuppet;
  std::string endpoint;
  sorting::DecodingParams decoding;
  int timeout_ms = 60000;
  int max_retries = 3;
  std::size_t in_flight = 4;
};

struct RunConfig {
  std::filesystem::path dataset;
  std::vector<std::filesystem::path> corpora;
  std::filesystem::path output_dir = "out";
  std::optional<std::uint64_t> master_seed;
  std::size_t per_category = 100;

  bool exp1_enabled = true;
  bool exp2_enabled = true;
  bool replication = false;

  // Experiment 1
  std::size_t trials = 100;
  std::optional<std::string> preamble;
  sorting::MatrixMode matrix_mode = sorting::MatrixMode::PositivesOnly;
  sorting::VectorMode vector_mode = sorting::VectorMode::RowNormalized;
  ChatSpec chat;

  // Experiment 2
  std::size_t folds = 5;
  std::size_t shuffles = 1;
  double regularization = 1.0;
  std::size_t kmeans_restarts = 10;
  bool length_baseline = false;
  embedding::ProviderSpec embed;
  std::optional<std::filesystem::path> embed_cache;

  // Throws ConfigError describing the first violated constraint.
  void validate() const;
  std::uint64_t seed() const;
  std::filesystem::path dataset_path() const;
  std::filesystem::path cache_path() const;

  // Resolved key/value view, in the config-file syntax.
  std::map<std::string, std::string> to_map() const;
};

// Flat "key = value" text, '#' starts a comment line. Unknown keys and
// malformed values are ConfigErrors.
RunConfig parse_config(std::string_view content);
RunConfig load_config(const std::filesystem::path& path);
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

// Switches both providers to the deterministic built-in mocks.
void use_mock_providers(RunConfig& config);

}  // namespace cxprobe::experiment
