#pragma once

#include <atomic>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cxprobe/embedding/cache.hpp"
#include "cxprobe/embedding/types.hpp"

namespace cxprobe::embedding {

// Source of raw hidden states. Implementations return one matrix per text in
// input order and count the transport requests they issue.
class EmbeddingBackend {
 public:
  virtual ~EmbeddingBackend() = default;
  virtual std::vector<LayerTokenMatrix> fetch(const std::vector<std::string>& texts,
                                              const std::vector<int>& layers) = 0;
  virtual std::string identity() const = 0;
  // Whether token means exclude special-token positions, when known.
  virtual std::optional<bool> special_tokens_excluded() const { return std::nullopt; }

  std::size_t request_count() const { return requests_.load(); }

 protected:
  void count_request() { ++requests_; }

 private:
  std::atomic<std::size_t> requests_{0};
};

struct SidecarHealth {
  int status = 0;  // 200 when ready, 503 while the model loads
  std::string model;
  std::size_t dim = 0;
  bool ready() const { return status == 200; }
};

// GET /health. A 503 is a normal answer (not ready); an unreachable server
// or a malformed body is a TransportError.
SidecarHealth check_health(const std::string& endpoint, int timeout_ms = 5000);

// Client of the sidecar's POST /embed. Texts are split into batches that are
// sent with at most spec.in_flight requests outstanding; failed requests are
// retried with exponential backoff.
class HttpEmbeddingBackend : public EmbeddingBackend {
 public:
  explicit HttpEmbeddingBackend(ProviderSpec spec);
  std::vector<LayerTokenMatrix> fetch(const std::vector<std::string>& texts,
                                      const std::vector<int>& layers) override;
  std::string identity() const override;
  std::optional<bool> special_tokens_excluded() const override;

  // Queried once before the first /embed call, waiting through 503s with the
  // retry schedule; every /embed response must then report the same dim.
  SidecarHealth health();

 private:
  std::vector<LayerTokenMatrix> fetch_batch(const std::vector<std::string>& texts,
                                            const std::vector<int>& layers);

  ProviderSpec spec_;
  std::atomic<int> special_excluded_{-1};
  std::mutex health_mutex_;
  std::optional<SidecarHealth> health_;
};

// Serves matrices from an embedding cache file; never performs inference.
class FileEmbeddingBackend : public EmbeddingBackend {
 public:
  FileEmbeddingBackend(std::filesystem::path file, std::string model_id);
  std::vector<LayerTokenMatrix> fetch(const std::vector<std::string>& texts,
                                      const std::vector<int>& layers) override;
  std::string identity() const override;

 private:
  EmbeddingCache cache_;
  std::string model_id_;
};

// Deterministic stand-in for a language model. Each word maps to a fixed
// pseudo-random vector per layer; unless order_invariant, each token also
// gets a component keyed on its left neighbour, so word order matters.
class MockEmbeddingBackend : public EmbeddingBackend {
 public:
  MockEmbeddingBackend(std::size_t dim, bool order_invariant, std::string model_id = "mock-bow");
  std::vector<LayerTokenMatrix> fetch(const std::vector<std::string>& texts,
                                      const std::vector<int>& layers) override;
  std::string identity() const override;
  std::optional<bool> special_tokens_excluded() const override { return true; }

 private:
  std::size_t dim_;
  bool order_invariant_;
  std::string model_id_;
};

std::unique_ptr<EmbeddingBackend> make_backend(const ProviderSpec& spec);

// Fetches hidden states through a backend, memoizing on
// (model_id, layer_offsets, text). Repeated requests never reach the backend.
class EmbeddingAcquirer {
 public:
  EmbeddingAcquirer(ProviderSpec spec, std::unique_ptr<EmbeddingBackend> backend,
                    std::optional<std::filesystem::path> cache_file = std::nullopt);

  std::vector<LayerTokenMatrix> acquire(const std::vector<std::string>& texts);

  const ProviderSpec& spec() const { return spec_; }
  const EmbeddingBackend& backend() const { return *backend_; }
  std::size_t request_count() const { return backend_->request_count(); }
  const EmbeddingCache& cache() const { return cache_; }

 private:
  ProviderSpec spec_;
  std::unique_ptr<EmbeddingBackend> backend_;
  EmbeddingCache cache_;
  std::size_t dim_ = 0;
};

}  // namespace cxprobe::embedding
