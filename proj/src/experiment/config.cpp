#include "cxprobe/experiment/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/text.hpp"
#include "cxprobe/experiment/report.hpp"

namespace cxprobe::experiment {

std::string_view to_string(ChatMode m) {
  switch (m) {
    case ChatMode::Http: return "http";
    case ChatMode::MockPuppet: return "mock";
    case ChatMode::MockRandom: return "mock-random";
    case ChatMode::MockAlphabetical: return "mock-alphabetical";
  }
  return "?";
}

std::optional<ChatMode> parse_chat_mode(std::string_view s) {
  if (s == "http") return ChatMode::Http;
  if (s == "mock") return ChatMode::MockPuppet;
  if (s == "mock-random") return ChatMode::MockRandom;
  if (s == "mock-alphabetical") return ChatMode::MockAlphabetical;
  return std::nullopt;
}

namespace {

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
  throw ConfigError("invalid value '" + value + "' for " + key + " (expected " + expected + ")");
}

std::size_t as_count(const std::string& key, const std::string& v) {
  long long n = 0;
  if (!text::parse_int(v, n) || n < 0) bad_value(key, v, "non-negative integer");
  return static_cast<std::size_t>(n);
}

int as_int(const std::string& key, const std::string& v) {
  long long n = 0;
  if (!text::parse_int(v, n)) bad_value(key, v, "integer");
  return static_cast<int>(n);
}

std::uint64_t as_seed(const std::string& key, const std::string& v) {
  std::uint64_t n = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    bad_value(key, v, "unsigned 64-bit integer");
  }
  return n;
}

double as_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v, "real number");
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v, "real number");
  }
}

bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true/false");
}

std::vector<std::string> as_list(const std::string& v) {
  std::vector<std::string> out;
  for (const std::string& part : text::split(v, ',')) {
    std::string t = text::trim(part);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

std::string real_str(double d) {
  std::ostringstream os;
  os.precision(17);
  os << d;
  return os.str();
}

}  // namespace

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&, const std::string&)>>
      setters = {
          {"seed", [](RunConfig& c, auto& k, auto& v) { c.master_seed = as_seed(k, v); }},
          {"dataset", [](RunConfig& c, auto&, auto& v) { c.dataset = v; }},
          {"corpora",
           [](RunConfig& c, auto&, auto& v) {
             c.corpora.clear();
             for (auto& p : as_list(v)) c.corpora.emplace_back(p);
           }},
          {"out", [](RunConfig& c, auto&, auto& v) { c.output_dir = v; }},
          {"per_category", [](RunConfig& c, auto& k, auto& v) { c.per_category = as_count(k, v); }},
          {"exp1.enabled", [](RunConfig& c, auto& k, auto& v) { c.exp1_enabled = as_bool(k, v); }},
          {"exp2.enabled", [](RunConfig& c, auto& k, auto& v) { c.exp2_enabled = as_bool(k, v); }},
          {"replication", [](RunConfig& c, auto& k, auto& v) { c.replication = as_bool(k, v); }},
          {"exp1.trials", [](RunConfig& c, auto& k, auto& v) { c.trials = as_count(k, v); }},
          {"prompt.preamble",
           [](RunConfig& c, auto&, auto& v) {
             if (v.empty()) c.preamble.reset();
             else c.preamble = v;
           }},
          {"exp1.matrix_mode",
           [](RunConfig& c, auto& k, auto& v) {
             auto m = sorting::parse_matrix_mode(v);
             if (!m) bad_value(k, v, "positives-only|both-sides");
             c.matrix_mode = *m;
           }},
          {"exp1.vector_mode",
           [](RunConfig& c, auto& k, auto& v) {
             auto m = sorting::parse_vector_mode(v);
             if (!m) bad_value(k, v, "raw|binary|row-normalized");
             c.vector_mode = *m;
           }},
          {"chat.mode",
           [](RunConfig& c, auto& k, auto& v) {
             auto m = parse_chat_mode(v);
             if (!m) bad_value(k, v, "http|mock|mock-random|mock-alphabetical");
             c.chat.mode = *m;
           }},
          {"chat.endpoint", [](RunConfig& c, auto&, auto& v) { c.chat.endpoint = v; }},
          {"chat.model", [](RunConfig& c, auto&, auto& v) { c.chat.decoding.model = v; }},
          {"chat.temperature",
           [](RunConfig& c, auto& k, auto& v) {
             const double t = as_real(k, v);
             if (t < 0) bad_value(k, v, "temperature >= 0");
             c.chat.decoding.temperature = t;
           }},
          {"chat.max_tokens",
           [](RunConfig& c, auto& k, auto& v) { c.chat.decoding.max_tokens = as_count(k, v); }},
          {"chat.timeout_ms", [](RunConfig& c, auto& k, auto& v) { c.chat.timeout_ms = as_int(k, v); }},
          {"chat.retries", [](RunConfig& c, auto& k, auto& v) { c.chat.max_retries = as_int(k, v); }},
          {"chat.in_flight", [](RunConfig& c, auto& k, auto& v) { c.chat.in_flight = as_count(k, v); }},
          {"exp2.folds", [](RunConfig& c, auto& k, auto& v) { c.folds = as_count(k, v); }},
          {"exp2.shuffles", [](RunConfig& c, auto& k, auto& v) { c.shuffles = as_count(k, v); }},
          {"exp2.regularization",
           [](RunConfig& c, auto& k, auto& v) { c.regularization = as_real(k, v); }},
          {"exp2.kmeans_restarts",
           [](RunConfig& c, auto& k, auto& v) { c.kmeans_restarts = as_count(k, v); }},
          {"exp2.length_baseline",
           [](RunConfig& c, auto& k, auto& v) { c.length_baseline = as_bool(k, v); }},
          {"embed.mode",
           [](RunConfig& c, auto& k, auto& v) {
             auto m = embedding::parse_provider_mode(v);
             if (!m) bad_value(k, v, "http|file|mock");
             c.embed.mode = *m;
           }},
          {"embed.endpoint", [](RunConfig& c, auto&, auto& v) { c.embed.endpoint = v; }},
          {"embed.model", [](RunConfig& c, auto&, auto& v) { c.embed.model_id = v; }},
          {"embed.layers",
           [](RunConfig& c, auto& k, auto& v) {
             c.embed.layer_offsets.clear();
             for (auto& p : as_list(v)) c.embed.layer_offsets.push_back(as_int(k, p));
           }},
          {"embed.in_flight", [](RunConfig& c, auto& k, auto& v) { c.embed.in_flight = as_count(k, v); }},
          {"embed.batch_size",
           [](RunConfig& c, auto& k, auto& v) { c.embed.batch_size = as_count(k, v); }},
          {"embed.retries", [](RunConfig& c, auto& k, auto& v) { c.embed.max_retries = as_int(k, v); }},
          {"embed.timeout_ms", [](RunConfig& c, auto& k, auto& v) { c.embed.timeout_ms = as_int(k, v); }},
          {"embed.cache", [](RunConfig& c, auto&, auto& v) { c.embed_cache = std::filesystem::path(v); }},
          {"embed.mock_dim", [](RunConfig& c, auto& k, auto& v) { c.embed.mock_dim = as_count(k, v); }},
          {"embed.mock_order_invariant",
           [](RunConfig& c, auto& k, auto& v) { c.embed.mock_order_invariant = as_bool(k, v); }},
      };
  auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(c, key, value);
}

RunConfig parse_config(std::string_view content) {
  RunConfig config;
  std::size_t line_no = 0;
  for (const std::string& raw : text::split(content, '\n')) {
    ++line_no;
    const std::string line = text::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_setting(config, text::trim(std::string_view(line).substr(0, eq)),
                  text::trim(std::string_view(line).substr(eq + 1)));
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void use_mock_providers(RunConfig& config) {
  config.chat.mode = ChatMode::MockPuppet;
  config.embed.mode = embedding::ProviderMode::Mock;
  if (config.embed.model_id.empty()) config.embed.model_id = "mock-bow";
}

void RunConfig::validate() const {
  if (!master_seed) throw ConfigError("a master seed is required (config key 'seed' or --seed)");
  if (trials < 1) throw ConfigError("exp1.trials must be at least 1");
  if (folds < 2) throw ConfigError("exp2.folds must be at least 2");
  if (shuffles < 1) throw ConfigError("exp2.shuffles must be at least 1");
  if (per_category < 1) throw ConfigError("per_category must be at least 1");
  if (regularization < 0) throw ConfigError("exp2.regularization must be >= 0");
  embed.validate();
  if (chat.mode == ChatMode::Http && chat.endpoint.empty()) {
    throw ConfigError("chat.endpoint is required when chat.mode = http");
  }
  if (replication) {
    if (chat.mode != ChatMode::Http || embed.mode == embedding::ProviderMode::Mock) {
      throw ConfigError("a replication run needs real chat and embedding providers");
    }
    if (!chat.decoding.temperature || chat.decoding.model.empty()) {
      throw ConfigError(
          "refusing to label the run a replication without explicit chat.model and "
          "chat.temperature");
    }
  }
}

std::uint64_t RunConfig::seed() const {
  if (!master_seed) throw ConfigError("a master seed is required (config key 'seed' or --seed)");
  return *master_seed;
}

std::filesystem::path RunConfig::dataset_path() const {
  return dataset.empty() ? output_dir / "dataset.csv" : dataset;
}

std::filesystem::path RunConfig::cache_path() const {
  return embed_cache ? *embed_cache : output_dir / "embeddings.jsonl";
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["seed"] = master_seed ? std::to_string(*master_seed) : "";
  m["dataset"] = dataset_path().string();
  std::vector<std::string> cs;
  for (const auto& p : corpora) cs.push_back(p.string());
  m["corpora"] = text::join(cs, ",");
  m["out"] = output_dir.string();
  m["per_category"] = std::to_string(per_category);
  m["exp1.enabled"] = bool_str(exp1_enabled);
  m["exp2.enabled"] = bool_str(exp2_enabled);
  m["replication"] = bool_str(replication);
  m["exp1.trials"] = std::to_string(trials);
  m["prompt.preamble"] = preamble.value_or("");
  m["exp1.matrix_mode"] = std::string(sorting::to_string(matrix_mode));
  m["exp1.vector_mode"] = std::string(sorting::to_string(vector_mode));
  m["chat.mode"] = std::string(to_string(chat.mode));
  m["chat.endpoint"] = chat.endpoint;
  m["chat.model"] = chat.decoding.model;
  m["chat.temperature"] = chat.decoding.temperature ? real_str(*chat.decoding.temperature) : "";
  m["chat.max_tokens"] = std::to_string(chat.decoding.max_tokens);
  m["chat.timeout_ms"] = std::to_string(chat.timeout_ms);
  m["chat.retries"] = std::to_string(chat.max_retries);
  m["chat.in_flight"] = std::to_string(chat.in_flight);
  m["exp2.folds"] = std::to_string(folds);
  m["exp2.shuffles"] = std::to_string(shuffles);
  m["exp2.regularization"] = real_str(regularization);
  m["exp2.kmeans_restarts"] = std::to_string(kmeans_restarts);
  m["exp2.length_baseline"] = bool_str(length_baseline);
  m["embed.mode"] = std::string(embedding::to_string(embed.mode));
  m["embed.endpoint"] = embed.endpoint;
  m["embed.model"] = embed.model_id;
  std::vector<std::string> layers;
  for (int l : embed.layer_offsets) layers.push_back(std::to_string(l));
  m["embed.layers"] = text::join(layers, ",");
  m["embed.in_flight"] = std::to_string(embed.in_flight);
  m["embed.batch_size"] = std::to_string(embed.batch_size);
  m["embed.retries"] = std::to_string(embed.max_retries);
  m["embed.timeout_ms"] = std::to_string(embed.timeout_ms);
  m["embed.cache"] = cache_path().string();
  m["embed.mock_dim"] = std::to_string(embed.mock_dim);
  m["embed.mock_order_invariant"] = bool_str(embed.mock_order_invariant);
  return m;
}

}  // namespace cxprobe::experiment
