#include "cxprobe/sorting/chat.hpp"

#include <algorithm>
#include <exception>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/common/text.hpp"
#include "cxprobe/sorting/response.hpp"

namespace cxprobe::sorting {

using json = nlohmann::json;

HttpChatAdapter::HttpChatAdapter(std::string endpoint, DecodingParams decoding, int timeout_ms,
                                 int max_retries, int backoff_ms)
    : endpoint_(std::move(endpoint)),
      decoding_(std::move(decoding)),
      timeout_ms_(timeout_ms),
      max_retries_(max_retries),
      backoff_ms_(backoff_ms) {}

std::string HttpChatAdapter::identity() const {
  return "http:" + endpoint_ + ":" + decoding_.model;
}

std::string HttpChatAdapter::complete(const std::string& prompt) {
  json decoding{{"max_tokens", decoding_.max_tokens}, {"model", decoding_.model}};
  decoding["temperature"] = decoding_.temperature.value_or(0.0);
  const std::string body = json{{"prompt", prompt}, {"decoding", decoding}}.dump();

  httplib::Client client(endpoint_);
  client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
  client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));

  std::string last_error;
  for (int attempt = 0; attempt <= max_retries_; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms_ << (attempt - 1)));
    }
    count_request();
    auto res = client.Post("/chat", body, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "status " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw TransportError("/chat rejected request: status " + std::to_string(res->status) +
                           ": " + res->body);
    }
    try {
      return json::parse(res->body).at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw TransportError(std::string("malformed /chat response: ") + e.what());
    }
  }
  throw TransportError("/chat failed after " + std::to_string(max_retries_ + 1) +
                       " attempts: " + last_error);
}

std::vector<std::string> extract_stimuli(const std::string& prompt) {
  std::vector<std::string> out;
  const auto pos = prompt.find(kOutputInstruction);
  if (pos == std::string::npos) return out;
  for (const std::string& line : text::split(prompt.substr(pos + kOutputInstruction.size()), '\n')) {
    std::string t = text::trim(line);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

namespace {

std::vector<std::string> alphabetical_first(std::vector<std::string> candidates, std::size_t n) {
  std::sort(candidates.begin(), candidates.end(), [](const std::string& a, const std::string& b) {
    const std::string na = normalize_line(a), nb = normalize_line(b);
    return na != nb ? na < nb : a < b;
  });
  if (candidates.size() > n) candidates.resize(n);
  return candidates;
}

std::string numbered_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += std::to_string(i + 1) + ". " + lines[i] + "\n";
  }
  return out;
}

}  // namespace

int PuppetResponder::group_of(const std::string& sentence) const {
  return static_cast<int>(splitmix64(text::fnv1a64(normalize_line(sentence)) ^ seed_) & 1U);
}

std::string PuppetResponder::identity() const {
  return "mock:puppet:" + std::to_string(seed_);
}

std::string PuppetResponder::complete(const std::string& prompt) {
  count_request();
  const std::vector<std::string> stimuli = extract_stimuli(prompt);
  if (stimuli.empty()) return "";
  std::vector<std::string> groups[2];
  for (const std::string& s : stimuli) groups[group_of(s)].push_back(s);
  // An even split goes to the group of the alphabetically-first stimulus.
  int pick = groups[1].size() > groups[0].size() ? 1 : 0;
  if (groups[0].size() == groups[1].size()) {
    pick = group_of(alphabetical_first(stimuli, 1).front());
  }
  return numbered_lines(alphabetical_first(groups[pick], groups[pick].size()));
}

std::string AlphabeticalResponder::complete(const std::string& prompt) {
  count_request();
  return text::join(alphabetical_first(extract_stimuli(prompt), kExpectedReturns), "\n");
}

std::string RandomResponder::identity() const {
  return "mock:random:" + std::to_string(seed_);
}

std::string RandomResponder::complete(const std::string& prompt) {
  count_request();
  std::vector<std::string> stimuli = extract_stimuli(prompt);
  Rng rng(derive_seed(seed_, "responder.random", {text::fnv1a64(prompt)}));
  rng.shuffle(std::span<std::string>(stimuli));
  if (stimuli.size() > kExpectedReturns) stimuli.resize(kExpectedReturns);
  return text::join(stimuli, "\n");
}

void run_trials(std::vector<SortingTrial>& trials,
                const std::function<const std::string&(const std::string&)>& text_of,
                ChatAdapter& adapter, const ExecutionOptions& opts) {
  std::vector<std::exception_ptr> errors(trials.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < trials.size(); i = next++) {
      SortingTrial& t = trials[i];
      try {
        std::vector<std::string> stimuli;
        for (const auto& id : t.stimuli_ids) stimuli.push_back(text_of(id));
        const std::string prompt =
            build_prompt(t.nonce, text_of(t.exemplar_id), stimuli, opts.preamble);
        t.raw_response = adapter.complete(prompt);
        const ParsedResponse parsed = parse_response(t.raw_response, stimuli);
        t.returned_ids.clear();
        for (std::size_t pos : parsed.returned) t.returned_ids.push_back(t.stimuli_ids[pos]);
        t.degenerate = parsed.degenerate;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(opts.in_flight, 1, std::max<std::size_t>(1, trials.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace cxprobe::sorting
