#include "cxprobe/embedding/provider.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <thread>
#include <unordered_map>

#include <httplib.h>
#include <json.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/common/text.hpp"

namespace cxprobe::embedding {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// HTTP

SidecarHealth check_health(const std::string& endpoint, int timeout_ms) {
  httplib::Client client(endpoint);
  client.set_connection_timeout(std::chrono::milliseconds(timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(timeout_ms));
  auto res = client.Get("/health");
  if (!res) throw TransportError("/health unreachable: " + httplib::to_string(res.error()));
  SidecarHealth h;
  h.status = res->status;
  if (!h.ready()) return h;
  try {
    const json j = json::parse(res->body);
    h.model = j.at("model").get<std::string>();
    h.dim = j.at("dim").get<std::size_t>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed /health response: ") + e.what());
  }
  return h;
}

HttpEmbeddingBackend::HttpEmbeddingBackend(ProviderSpec spec) : spec_(std::move(spec)) {}

std::string HttpEmbeddingBackend::identity() const {
  return "http:" + spec_.endpoint + ":" + spec_.model_id;
}

std::optional<bool> HttpEmbeddingBackend::special_tokens_excluded() const {
  const int v = special_excluded_.load();
  if (v < 0) return std::nullopt;
  return v == 1;
}

SidecarHealth HttpEmbeddingBackend::health() {
  std::lock_guard lock(health_mutex_);
  if (health_) return *health_;
  SidecarHealth h;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(spec_.backoff_ms << (attempt - 1)));
    }
    h = check_health(spec_.endpoint, spec_.timeout_ms);
    if (h.ready()) {
      health_ = h;
      return h;
    }
  }
  throw TransportError("sidecar not ready: /health status " + std::to_string(h.status));
}

std::vector<LayerTokenMatrix> HttpEmbeddingBackend::fetch_batch(
    const std::vector<std::string>& texts, const std::vector<int>& layers) {
  const std::string body =
      json{{"model", spec_.model_id}, {"texts", texts}, {"layers", layers}}.dump();

  httplib::Client client(spec_.endpoint);
  client.set_connection_timeout(std::chrono::milliseconds(spec_.timeout_ms));
  client.set_read_timeout(std::chrono::milliseconds(spec_.timeout_ms));

  std::string last_error;
  for (int attempt = 0; attempt <= spec_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(spec_.backoff_ms << (attempt - 1)));
    }
    count_request();
    auto res = client.Post("/embed", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("/embed rejected request: status " + std::to_string(res->status) +
                           ": " + res->body);
    }

    std::vector<LayerTokenMatrix> out;
    try {
      const json j = json::parse(res->body);
      const std::size_t dim = j.at("dim").get<std::size_t>();
      if (dim != health_->dim) {
        throw DimensionError("/embed dim " + std::to_string(dim) + " differs from /health dim " +
                             std::to_string(health_->dim));
      }
      const auto& results = j.at("results");
      special_excluded_ = j.at("special_tokens_excluded").get<bool>() ? 1 : 0;
      if (results.size() != texts.size()) {
        throw TransportError("/embed returned " + std::to_string(results.size()) +
                             " results for " + std::to_string(texts.size()) + " texts");
      }
      for (std::size_t i = 0; i < texts.size(); ++i) {
        const auto& per_layer = results[i];
        if (per_layer.size() != layers.size()) {
          throw TransportError("/embed returned wrong layer count");
        }
        LayerTokenMatrix m{texts[i], {}, dim};
        for (const auto& v : per_layer) {
          // The sidecar already averaged over tokens: one position per layer.
          m.layers.push_back({v.get<std::vector<float>>()});
        }
        out.push_back(std::move(m));
      }
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed /embed response: ") + e.what());
    }
    return out;
  }
  throw TransportError("/embed failed after " + std::to_string(spec_.max_retries + 1) +
                       " attempts: " + last_error);
}

std::vector<LayerTokenMatrix> HttpEmbeddingBackend::fetch(const std::vector<std::string>& texts,
                                                          const std::vector<int>& layers) {
  health();
  std::vector<std::vector<std::string>> batches;
  for (std::size_t i = 0; i < texts.size(); i += spec_.batch_size) {
    const std::size_t end = std::min(texts.size(), i + spec_.batch_size);
    batches.emplace_back(texts.begin() + i, texts.begin() + end);
  }
  std::vector<std::vector<LayerTokenMatrix>> results(batches.size());
  std::vector<std::exception_ptr> errors(batches.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t b = next++; b < batches.size(); b = next++) {
      try {
        results[b] = fetch_batch(batches[b], layers);
      } catch (...) {
        errors[b] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(spec_.in_flight, batches.size());
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<LayerTokenMatrix> out;
  out.reserve(texts.size());
  for (auto& batch : results) {
    for (auto& m : batch) out.push_back(std::move(m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// File

FileEmbeddingBackend::FileEmbeddingBackend(std::filesystem::path file, std::string model_id)
    : cache_(std::move(file)), model_id_(std::move(model_id)) {
  if (!std::filesystem::exists(*cache_.file())) {
    throw CacheError("embedding cache file not found: " + cache_.file()->string());
  }
}

std::string FileEmbeddingBackend::identity() const {
  return "file:" + cache_.file()->string() + ":" + model_id_;
}

std::vector<LayerTokenMatrix> FileEmbeddingBackend::fetch(const std::vector<std::string>& texts,
                                                          const std::vector<int>& layers) {
  count_request();
  std::vector<LayerTokenMatrix> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    auto m = cache_.find(model_id_, layers, t);
    if (!m) throw CacheError("text not in embedding cache (hash " + text_hash(t) + ")");
    out.push_back(std::move(*m));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mock

MockEmbeddingBackend::MockEmbeddingBackend(std::size_t dim, bool order_invariant,
                                           std::string model_id)
    : dim_(dim), order_invariant_(order_invariant), model_id_(std::move(model_id)) {
  if (dim_ == 0) throw ConfigError("mock dim must be positive");
}

std::string MockEmbeddingBackend::identity() const {
  return "mock:" + model_id_ + (order_invariant_ ? ":bag" : ":bigram") + ":" +
         std::to_string(dim_);
}

namespace {

void add_keyed_gaussian(std::vector<float>& v, std::string_view key, int layer, double scale) {
  Rng rng(splitmix64(text::fnv1a64(key) ^ static_cast<std::uint64_t>(layer + 1024)));
  for (float& x : v) x += static_cast<float>(scale * rng.normal());
}

}  // namespace

std::vector<LayerTokenMatrix> MockEmbeddingBackend::fetch(const std::vector<std::string>& texts,
                                                          const std::vector<int>& layers) {
  count_request();
  std::vector<LayerTokenMatrix> out;
  out.reserve(texts.size());
  for (const std::string& t : texts) {
    const std::vector<std::string> words = text::split_whitespace(t);
    LayerTokenMatrix m{t, {}, dim_};
    for (int layer : layers) {
      std::vector<std::vector<float>> tokens;
      for (std::size_t i = 0; i < words.size(); ++i) {
        std::vector<float> v(dim_, 0.0f);
        add_keyed_gaussian(v, words[i], layer, 1.0);
        if (!order_invariant_) {
          const std::string left = i == 0 ? std::string("<s>") : words[i - 1];
          add_keyed_gaussian(v, left + "\x1f" + words[i], layer, 0.5);
        }
        tokens.push_back(std::move(v));
      }
      m.layers.push_back(std::move(tokens));
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::unique_ptr<EmbeddingBackend> make_backend(const ProviderSpec& spec) {
  switch (spec.mode) {
    case ProviderMode::Http: return std::make_unique<HttpEmbeddingBackend>(spec);
    case ProviderMode::File:
      return std::make_unique<FileEmbeddingBackend>(spec.endpoint, spec.model_id);
    case ProviderMode::Mock:
      return std::make_unique<MockEmbeddingBackend>(spec.mock_dim, spec.mock_order_invariant,
                                                    spec.model_id);
  }
  throw ConfigError("unknown provider mode");
}

// ---------------------------------------------------------------------------
// Acquirer

EmbeddingAcquirer::EmbeddingAcquirer(ProviderSpec spec, std::unique_ptr<EmbeddingBackend> backend,
                                     std::optional<std::filesystem::path> cache_file)
    : spec_(std::move(spec)), backend_(std::move(backend)), cache_(std::move(cache_file)) {
  spec_.validate();
  if (!backend_) throw ConfigError("embedding backend is null");
}

std::vector<LayerTokenMatrix> EmbeddingAcquirer::acquire(const std::vector<std::string>& texts) {
  const auto& layers = spec_.layer_offsets;
  std::vector<std::optional<LayerTokenMatrix>> found(texts.size());
  std::vector<std::string> missing;
  std::unordered_map<std::string, std::size_t> missing_index;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    found[i] = cache_.find(spec_.model_id, layers, texts[i]);
    if (!found[i] && !missing_index.contains(texts[i])) {
      missing_index.emplace(texts[i], missing.size());
      missing.push_back(texts[i]);
    }
  }

  auto check_dim = [&](const LayerTokenMatrix& m) {
    m.validate();
    if (m.layers.size() != layers.size()) {
      throw DimensionError("provider returned " + std::to_string(m.layers.size()) +
                           " layers, requested " + std::to_string(layers.size()));
    }
    if (dim_ == 0) dim_ = m.dim;
    if (m.dim != dim_) {
      throw DimensionError("embedding dim changed from " + std::to_string(dim_) + " to " +
                           std::to_string(m.dim));
    }
  };

  if (!missing.empty()) {
    std::vector<LayerTokenMatrix> fetched = backend_->fetch(missing, layers);
    if (fetched.size() != missing.size()) {
      throw TransportError("provider returned " + std::to_string(fetched.size()) +
                           " matrices for " + std::to_string(missing.size()) + " texts");
    }
    for (std::size_t i = 0; i < fetched.size(); ++i) {
      fetched[i].text = missing[i];
      check_dim(fetched[i]);
      cache_.insert(spec_.model_id, layers, fetched[i]);
    }
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (!found[i]) found[i] = fetched[missing_index.at(texts[i])];
    }
  }

  std::vector<LayerTokenMatrix> out;
  out.reserve(texts.size());
  for (auto& m : found) {
    check_dim(*m);
    out.push_back(std::move(*m));
  }
  return out;
}

}  // namespace cxprobe::embedding
