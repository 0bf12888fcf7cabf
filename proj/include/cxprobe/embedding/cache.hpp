#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "cxprobe/embedding/types.hpp"

namespace cxprobe::embedding {

std::string text_hash(std::string_view text);

// One line of the embedding cache file:
//   {"model": str, "layers": [int], "text_hash": hex, "dim": int,
//    "layer_token_vectors": [[[float]]]}
struct CacheRecord {
  std::string model;
  std::vector<int> layers;
  std::string text_hash;
  std::size_t dim = 0;
  std::vector<std::vector<std::vector<float>>> layer_token_vectors;
};

std::string encode_record(const CacheRecord& record);
// Throws CacheError on malformed or inconsistent records.
CacheRecord decode_record(std::string_view line);

// In-memory map over (model, layers, text hash), optionally backed by an
// append-only JSON-lines file. Single writer, many readers.
class EmbeddingCache {
 public:
  // With a file: loads any existing records and appends new ones to it.
  explicit EmbeddingCache(std::optional<std::filesystem::path> file = std::nullopt);

  std::optional<LayerTokenMatrix> find(const std::string& model, const std::vector<int>& layers,
                                       std::string_view text) const;
  void insert(const std::string& model, const std::vector<int>& layers,
              const LayerTokenMatrix& matrix);

  std::size_t size() const;
  const std::optional<std::filesystem::path>& file() const { return file_; }

 private:
  static std::string key(const std::string& model, const std::vector<int>& layers,
                         const std::string& hash);

  std::optional<std::filesystem::path> file_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, CacheRecord> records_;
};

}  // namespace cxprobe::embedding
