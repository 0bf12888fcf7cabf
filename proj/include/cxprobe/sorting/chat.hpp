#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cxprobe/sorting/trial.hpp"

namespace cxprobe::sorting {

struct DecodingParams {
  std::optional<double> temperature;
  std::size_t max_tokens = 256;
  std::string model;
};

// Completion endpoint. Implementations must be safe to call concurrently.
class ChatAdapter {
 public:
  virtual ~ChatAdapter() = default;
  virtual std::string complete(const std::string& prompt) = 0;
  virtual std::string identity() const = 0;
  std::size_t request_count() const { return requests_.load(); }

 protected:
  void count_request() { ++requests_; }

 private:
  std::atomic<std::size_t> requests_{0};
};

// Client of the sidecar's POST /chat (or any endpoint speaking the same
// JSON): {"prompt", "decoding": {"temperature", "max_tokens", "model"}}
// -> {"text"}.
class HttpChatAdapter : public ChatAdapter {
 public:
  HttpChatAdapter(std::string endpoint, DecodingParams decoding, int timeout_ms = 60000,
                  int max_retries = 3, int backoff_ms = 200);
  std::string complete(const std::string& prompt) override;
  std::string identity() const override;

 private:
  std::string endpoint_;
  DecodingParams decoding_;
  int timeout_ms_;
  int max_retries_;
  int backoff_ms_;
};

// The stimulus lines of a sorting prompt (everything after the output
// instruction).
std::vector<std::string> extract_stimuli(const std::string& prompt);

// Deterministic responder that simulates a hallucinated binary split: every
// sentence belongs to one of two hidden groups (by text hash) and the reply
// lists every stimulus of the larger group. Only a 3/3 split yields the
// expected three lines; other splits come back degenerate. Output depends
// only on the stimuli set.
class PuppetResponder : public ChatAdapter {
 public:
  explicit PuppetResponder(std::uint64_t seed = 0) : seed_(seed) {}
  std::string complete(const std::string& prompt) override;
  std::string identity() const override;
  int group_of(const std::string& sentence) const;

 private:
  std::uint64_t seed_;
};

// Returns the three alphabetically-first stimuli.
class AlphabeticalResponder : public ChatAdapter {
 public:
  std::string complete(const std::string& prompt) override;
  std::string identity() const override { return "mock:alphabetical"; }
};

// Picks 3 of the 6 stimuli uniformly at random, seeded by (seed, prompt).
class RandomResponder : public ChatAdapter {
 public:
  explicit RandomResponder(std::uint64_t seed) : seed_(seed) {}
  std::string complete(const std::string& prompt) override;
  std::string identity() const override;

 private:
  std::uint64_t seed_;
};

struct ExecutionOptions {
  std::optional<std::string> preamble;
  std::size_t in_flight = 4;
};

// Prompts, executes and parses every trial, at most in_flight at a time.
// `text_of` maps sentence ids to sentence text. Results are in input order.
void run_trials(std::vector<SortingTrial>& trials,
                const std::function<const std::string&(const std::string&)>& text_of,
                ChatAdapter& adapter, const ExecutionOptions& opts = {});

}  // namespace cxprobe::sorting
