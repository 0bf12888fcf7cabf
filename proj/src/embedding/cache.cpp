#include "cxprobe/embedding/cache.hpp"

#include <fstream>

#include <json.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/text.hpp"

namespace cxprobe::embedding {

namespace {
// Floats are written at single precision, which is also the precision the
// values are read back at, so records round-trip bitwise.
using fjson = nlohmann::basic_json<std::map, std::vector, std::string, bool, std::int64_t,
                                   std::uint64_t, float>;
}  // namespace

std::string text_hash(std::string_view text) { return text::hex64(text::fnv1a64(text)); }

std::string encode_record(const CacheRecord& r) {
  fjson j;
  j["model"] = r.model;
  j["layers"] = r.layers;
  j["text_hash"] = r.text_hash;
  j["dim"] = r.dim;
  j["layer_token_vectors"] = r.layer_token_vectors;
  return j.dump();
}

CacheRecord decode_record(std::string_view line) {
  CacheRecord r;
  try {
    const fjson j = fjson::parse(line);
    r.model = j.at("model").get<std::string>();
    r.layers = j.at("layers").get<std::vector<int>>();
    r.text_hash = j.at("text_hash").get<std::string>();
    r.dim = j.at("dim").get<std::size_t>();
    r.layer_token_vectors =
        j.at("layer_token_vectors").get<std::vector<std::vector<std::vector<float>>>>();
  } catch (const fjson::exception& e) {
    throw CacheError(std::string("malformed cache record: ") + e.what());
  }
  if (r.layer_token_vectors.size() != r.layers.size()) {
    throw CacheError("cache record has " + std::to_string(r.layer_token_vectors.size()) +
                     " layers, header lists " + std::to_string(r.layers.size()));
  }
  LayerTokenMatrix probe{"", r.layer_token_vectors, r.dim};
  try {
    probe.validate();
  } catch (const DimensionError& e) {
    throw CacheError(std::string("inconsistent cache record: ") + e.what());
  }
  return r;
}

EmbeddingCache::EmbeddingCache(std::optional<std::filesystem::path> file)
    : file_(std::move(file)) {
  if (!file_) return;
  std::ifstream in(*file_);
  if (!in) return;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      CacheRecord r = decode_record(line);
      std::string k = key(r.model, r.layers, r.text_hash);
      records_.insert_or_assign(std::move(k), std::move(r));
    } catch (const CacheError& e) {
      throw CacheError(file_->string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

std::string EmbeddingCache::key(const std::string& model, const std::vector<int>& layers,
                                const std::string& hash) {
  std::string k = model + "|";
  for (int l : layers) k += std::to_string(l) + ",";
  return k + "|" + hash;
}

std::optional<LayerTokenMatrix> EmbeddingCache::find(const std::string& model,
                                                     const std::vector<int>& layers,
                                                     std::string_view text) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(key(model, layers, text_hash(text)));
  if (it == records_.end()) return std::nullopt;
  return LayerTokenMatrix{std::string(text), it->second.layer_token_vectors, it->second.dim};
}

void EmbeddingCache::insert(const std::string& model, const std::vector<int>& layers,
                            const LayerTokenMatrix& matrix) {
  CacheRecord r{model, layers, text_hash(matrix.text), matrix.dim, matrix.layers};
  std::unique_lock lock(mutex_);
  if (file_) {
    std::ofstream out(*file_, std::ios::app | std::ios::binary);
    if (!out) throw CacheError("cannot append to cache file " + file_->string());
    out << encode_record(r) << '\n';
  }
  records_.insert_or_assign(key(model, layers, r.text_hash), std::move(r));
}

std::size_t EmbeddingCache::size() const {
  std::shared_lock lock(mutex_);
  return records_.size();
}

}  // namespace cxprobe::embedding
