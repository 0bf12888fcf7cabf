#include "cxprobe/experiment/runner.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <map>
#include <unordered_map>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/common/text.hpp"
#include "cxprobe/embedding/conditions.hpp"
#include "cxprobe/probe/probes.hpp"
#include "cxprobe/sorting/metrics.hpp"

namespace cxprobe::experiment {

namespace fs = std::filesystem;
using nlohmann::json;
using corpus::ConstructionCategory;
using corpus::kAllCategories;
using embedding::EmbeddingCondition;

namespace {

constexpr std::array<EmbeddingCondition, 2> kConditions = {EmbeddingCondition::Direct,
                                                           EmbeddingCondition::GrammarFocused};

constexpr const char* kSelectionNote =
    "clause sets selected by dependency rules (root verb argument structure) instead of manual "
    "introspective filtering";

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  if (!out) throw Error("write failed for " + path.string());
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

std::vector<fs::path> emit_tables(const fs::path& dir, const json& tables) {
  std::vector<fs::path> written;
  for (const auto& [name, tj] : tables.items()) {
    const Table t = table_from_json(tj);
    const fs::path csv = dir / (name + ".csv");
    const fs::path txt = dir / (name + ".txt");
    emit_report(t, ReportFormat::Csv, csv);
    emit_report(t, ReportFormat::Pretty, txt);
    written.push_back(csv);
    written.push_back(txt);
  }
  return written;
}

std::optional<double> finite_or_null(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

std::vector<std::string> category_columns() {
  std::vector<std::string> cols;
  for (auto c : kAllCategories) cols.emplace_back(corpus::display_name(c));
  return cols;
}

json manifest_base(const RunConfig& config, const std::string& started) {
  json m;
  m["toolkit_version"] = std::string(kToolkitVersion);
  m["started_at"] = started;
  m["finished_at"] = utc_now();
  m["master_seed"] = config.seed();
  m["config"] = config.to_map();
  m["dataset_selection"] = kSelectionNote;
  return m;
}

corpus::Dataset obtain_dataset(const RunConfig& config) {
  const fs::path path = config.dataset_path();
  if (fs::exists(path)) return corpus::load_dataset(path);
  if (config.corpora.empty()) {
    throw ConfigError("no dataset at " + path.string() + " and no corpora to extract from");
  }
  return run_extract(config).dataset;
}

std::vector<sorting::SortingTrial> of_category(const std::vector<sorting::SortingTrial>& trials,
                                               ConstructionCategory c) {
  std::vector<sorting::SortingTrial> out;
  for (const auto& t : trials) {
    if (t.category == c) out.push_back(t);
  }
  return out;
}

std::vector<sorting::NonceName> nonces_alphabetical() {
  std::vector<sorting::NonceName> v(sorting::kAllNonces.begin(), sorting::kAllNonces.end());
  std::sort(v.begin(), v.end(), [](auto a, auto b) { return sorting::to_string(a) < sorting::to_string(b); });
  return v;
}

std::size_t nonce_index(sorting::NonceName n) {
  for (std::size_t i = 0; i < sorting::kAllNonces.size(); ++i) {
    if (sorting::kAllNonces[i] == n) return i;
  }
  return 0;
}

double together_probability(const std::vector<sorting::SortingTrial>& trials) {
  std::size_t together = 0, total = 0;
  for (const auto& [key, stat] : sorting::pair_statistics(trials)) {
    together += stat.together;
    total += stat.total();
  }
  return total == 0 ? std::numeric_limits<double>::quiet_NaN()
                    : static_cast<double>(together) / static_cast<double>(total);
}

probe::ProbeOptions probe_options(const RunConfig& config) {
  probe::ProbeOptions o;
  o.folds = config.folds;
  o.regularization = config.regularization;
  o.kmeans_restarts = config.kmeans_restarts;
  return o;
}

json probe_json(const probe::ProbeReport& r) {
  json j;
  j["na"] = r.na;
  if (r.na) j["na_reason"] = r.na_reason;
  j["mean_f"] = number_or_null(r.mean_f);
  j["per_fold_f"] = r.per_fold_f;
  j["positive_class"] = r.positive_class;
  j["cluster_sizes"] = r.cluster_sizes;
  return j;
}

}  // namespace

ExtractOutputs run_extract(const RunConfig& config) {
  if (config.corpora.empty()) throw ConfigError("extract needs at least one corpus");
  const std::string started = utc_now();
  std::vector<corpus::Corpus> corpora;
  for (const auto& p : config.corpora) corpora.push_back(corpus::load_corpus(p));
  ExtractOutputs out;
  const std::uint64_t seed = derive_seed(config.seed(), "extract");
  out.dataset = corpus::build_dataset(corpora, config.per_category, seed);
  out.path = config.dataset_path();
  if (out.path.has_parent_path()) fs::create_directories(out.path.parent_path());
  corpus::persist_dataset(out.dataset, out.path);

  fs::create_directories(config.output_dir);
  json m = manifest_base(config, started);
  m["stage_seeds"] = {{"extract", seed}};
  json sources = json::array();
  for (const auto& c : corpora) {
    sources.push_back({{"source", c.source}, {"sentences", c.sentences.size()}});
  }
  m["corpora"] = sources;
  m["entries"] = out.dataset.entries.size();
  write_text(config.output_dir / "manifest_extract.json", m.dump(2) + "\n");
  return out;
}

std::unique_ptr<sorting::ChatAdapter> make_chat_adapter(const RunConfig& config) {
  switch (config.chat.mode) {
    case ChatMode::Http:
      return std::make_unique<sorting::HttpChatAdapter>(config.chat.endpoint, config.chat.decoding,
                                                        config.chat.timeout_ms,
                                                        config.chat.max_retries);
    case ChatMode::MockPuppet:
      return std::make_unique<sorting::PuppetResponder>(derive_seed(config.seed(), "exp1.puppet"));
    case ChatMode::MockRandom:
      return std::make_unique<sorting::RandomResponder>(derive_seed(config.seed(), "exp1.random"));
    case ChatMode::MockAlphabetical:
      return std::make_unique<sorting::AlphabeticalResponder>();
  }
  throw ConfigError("unknown chat mode");
}

Exp1Outputs run_experiment1(const RunConfig& config) {
  config.validate();
  auto adapter = make_chat_adapter(config);
  return run_experiment1(config, *adapter);
}

Exp1Outputs run_experiment1(const RunConfig& config, sorting::ChatAdapter& adapter) {
  config.validate();
  const std::string started = utc_now();
  const std::uint64_t seed = config.seed();
  const corpus::Dataset dataset = obtain_dataset(config);
  std::unordered_map<std::string, const std::string*> texts;
  for (const auto& e : dataset.entries) texts[e.sentence_id] = &e.text;
  auto text_of = [&](const std::string& id) -> const std::string& {
    auto it = texts.find(id);
    if (it == texts.end()) throw SchemaError("trial references unknown sentence " + id);
    return *it->second;
  };

  json seeds;
  Exp1Outputs out;
  for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
    for (std::size_t ni = 0; ni < sorting::kAllNonces.size(); ++ni) {
      const std::uint64_t s = derive_seed(seed, "exp1.sample", {ci, ni});
      seeds["exp1.sample"][std::string(corpus::to_string(kAllCategories[ci]))]
           [std::string(sorting::to_string(sorting::kAllNonces[ni]))] = s;
      auto cell = sorting::sample_trials(dataset, kAllCategories[ci], sorting::kAllNonces[ni],
                                         config.trials, s);
      out.trials.insert(out.trials.end(), cell.begin(), cell.end());
    }
  }

  sorting::ExecutionOptions exec;
  exec.preamble = config.preamble;
  exec.in_flight = config.chat.in_flight;
  sorting::run_trials(out.trials, text_of, adapter, exec);

  fs::create_directories(config.output_dir);
  {
    std::ofstream log(config.output_dir / files::kTrialLog, std::ios::binary | std::ios::trunc);
    if (!log) throw Error("cannot write trial log");
    sorting::write_trial_log(log, out.trials);
  }

  // cells indexed [category][nonce]
  std::map<std::pair<std::size_t, std::size_t>, std::vector<sorting::SortingTrial>> cells;
  for (const auto& t : out.trials) {
    cells[{corpus::category_index(t.category), nonce_index(t.nonce)}].push_back(t);
  }

  json cell_json = json::array();
  std::size_t degenerate_total = 0;
  Table& t1 = out.consistency;
  t1.title = "Sorting consistency by construction name and category";
  t1.corner = "Construction Name";
  t1.columns = category_columns();
  t1.kind = ValueKind::Percent;
  t1.pretty_decimals = 2;
  for (sorting::NonceName nonce : nonces_alphabetical()) {
    TableRow row{std::string(sorting::to_string(nonce)), {}};
    for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
      const auto& trials = cells[{ci, nonce_index(nonce)}];
      std::size_t degenerate = 0;
      for (const auto& t : trials) degenerate += t.degenerate ? 1 : 0;
      degenerate_total += degenerate;
      json cj;
      cj["nonce"] = std::string(sorting::to_string(nonce));
      cj["category"] = std::string(corpus::to_string(kAllCategories[ci]));
      cj["trials"] = trials.size();
      cj["degenerate"] = degenerate;
      cj["together_probability"] = number_or_null(together_probability(trials));
      try {
        const auto r = sorting::consistency_accuracy(trials);
        row.cells.push_back(r.percentage);
        cj["consistency"] = r.percentage;
        cj["qualifying_pairs"] = r.qualifying_pairs;
        cj["trials_used"] = r.trials_used;
      } catch (const UndefinedMetricError& e) {
        row.cells.push_back(std::nullopt);
        cj["consistency"] = nullptr;
        cj["undefined_reason"] = e.what();
      }
      cell_json.push_back(cj);
    }
    t1.rows.push_back(std::move(row));
  }

  Table& t2 = out.clusters;
  t2.title = "Cluster accuracy of the sorting co-occurrence space";
  t2.corner = "Category";
  t2.columns = {"Cluster Accuracy"};
  t2.kind = ValueKind::Percent;
  t2.pretty_decimals = 1;
  json cluster_json = json::array();
  for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
    const ConstructionCategory c = kAllCategories[ci];
    const auto trials = of_category(out.trials, c);
    const std::uint64_t s = derive_seed(seed, "exp1.cluster", {ci});
    seeds["exp1.cluster"][std::string(corpus::to_string(c))] = s;
    json cj;
    cj["category"] = std::string(corpus::to_string(c));
    TableRow row{std::string(corpus::display_name(c)), {}};
    try {
      const auto matrix = sorting::build_cooccurrence(trials, config.matrix_mode);
      const auto acc =
          sorting::cluster_accuracy(matrix, s, config.vector_mode, config.kmeans_restarts);
      row.cells.push_back(acc.percentage);
      cj["cluster_accuracy"] = acc.percentage;
      cj["consistent"] = acc.consistent;
      cj["paired"] = acc.paired;
      std::size_t sizes[2] = {0, 0};
      for (int l : acc.labels) {
        if (l >= 0) ++sizes[l];
      }
      cj["cluster_sizes"] = {sizes[0], sizes[1]};
    } catch (const Error& e) {
      row.cells.push_back(std::nullopt);
      cj["cluster_accuracy"] = nullptr;
      cj["undefined_reason"] = e.what();
    }
    cluster_json.push_back(cj);
    t2.rows.push_back(std::move(row));
  }

  out.results["tables"][files::kTable1] = table_to_json(t1);
  out.results["tables"][files::kTable2] = table_to_json(t2);
  out.results["cells"] = cell_json;
  out.results["clusters"] = cluster_json;
  out.results["metadata"] = {
      {"consistency_metric",
       "mean over stimulus pairs sharing >= 2 non-degenerate trials of max(together, apart) / "
       "shared trials"},
      {"matrix_mode", std::string(sorting::to_string(config.matrix_mode))},
      {"vector_mode", std::string(sorting::to_string(config.vector_mode))},
      {"degenerate_trials", "excluded from all metrics"},
      {"cluster_denominator", "sentences with at least one pairing"},
  };
  write_text(config.output_dir / files::kExp1Results, out.results.dump(2) + "\n");
  emit_tables(config.output_dir, out.results["tables"]);

  json m = manifest_base(config, started);
  m["stage_seeds"] = seeds;
  m["chat_provider"] = adapter.identity();
  m["chat_requests"] = adapter.request_count();
  m["trials"] = out.trials.size();
  m["degenerate_trials"] = degenerate_total;
  m["replication"] = config.replication;
  write_text(config.output_dir / "manifest_exp1.json", m.dump(2) + "\n");
  return out;
}

namespace {

embedding::EmbeddingAcquirer make_acquirer(const RunConfig& config) {
  fs::create_directories(config.output_dir);
  const fs::path cache = config.cache_path();
  if (cache.has_parent_path()) fs::create_directories(cache.parent_path());
  return embedding::EmbeddingAcquirer(config.embed, embedding::make_backend(config.embed), cache);
}

}  // namespace

Exp2Outputs run_experiment2(const RunConfig& config) {
  config.validate();
  auto acquirer = make_acquirer(config);
  return run_experiment2(config, acquirer);
}

Exp2Outputs run_experiment2(const RunConfig& config, embedding::EmbeddingAcquirer& acquirer) {
  config.validate();
  const std::string started = utc_now();
  const std::uint64_t seed = config.seed();
  const corpus::Dataset dataset = obtain_dataset(config);
  const probe::ProbeOptions opts = probe_options(config);
  const std::uint64_t shuffle_seed = derive_seed(seed, "exp2.shuffle");

  json seeds;
  seeds["exp2.shuffle"] = shuffle_seed;
  Exp2Outputs out;

  Table& t3 = out.validation;
  t3.title = "Validation f-score: each construction against every other";
  t3.corner = "Condition";
  t3.columns = category_columns();
  t3.kind = ValueKind::FScore;

  Table& t4 = out.false_positive;
  t4.title = "False-positive probe f-score within each category";
  t4.corner = "Category";
  for (auto cond : kConditions) t4.columns.emplace_back(embedding::display_name(cond));
  t4.kind = ValueKind::FScore;
  for (auto c : kAllCategories) t4.rows.push_back({std::string(corpus::display_name(c)), {}});

  json validation_json = json::array();
  json fp_json = json::array();
  for (std::size_t vi = 0; vi < kConditions.size(); ++vi) {
    const EmbeddingCondition cond = kConditions[vi];
    const std::string cond_name(embedding::to_string(cond));
    const auto vectors =
        embedding::build_condition_set(dataset, acquirer, cond, shuffle_seed, config.shuffles);
    probe::CategoryEmbeddings by_category;
    std::array<std::vector<double>, kAllCategories.size()> lengths;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      const auto ci = corpus::category_index(dataset.entries[i].category);
      by_category[ci].push_back(vectors[i]);
      lengths[ci].push_back(static_cast<double>(text::split_whitespace(dataset.entries[i].text).size()));
    }

    const std::uint64_t vseed = derive_seed(seed, "exp2.validation", {vi});
    seeds["exp2.validation"][cond_name] = vseed;
    const auto report = probe::validation_probe(by_category, cond, vseed, opts);
    TableRow row{std::string(embedding::display_name(cond)), {}};
    json vj;
    vj["condition"] = cond_name;
    for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
      row.cells.push_back(finite_or_null(report.cells[ci]));
      json tasks;
      for (std::size_t d = 0; d < kAllCategories.size(); ++d) {
        if (d == ci) continue;
        tasks[std::string(corpus::to_string(kAllCategories[d]))] = number_or_null(report.task_f[ci][d]);
      }
      vj["cells"][std::string(corpus::to_string(kAllCategories[ci]))] = {
          {"mean_f", number_or_null(report.cells[ci])}, {"versus", tasks}};
    }
    t3.rows.push_back(std::move(row));
    validation_json.push_back(vj);

    for (std::size_t ci = 0; ci < kAllCategories.size(); ++ci) {
      const std::string cat(corpus::to_string(kAllCategories[ci]));
      const std::uint64_t pseed = derive_seed(seed, "exp2.puppet", {vi, ci});
      seeds["exp2.puppet"][cond_name][cat] = pseed;
      const probe::Matrix x = probe::to_matrix(by_category[ci]);
      const auto fp = probe::false_positive_probe(x, pseed, opts);
      t4.rows[ci].cells.push_back(fp.na ? std::nullopt : finite_or_null(fp.mean_f));
      json fj = probe_json(fp);
      fj["condition"] = cond_name;
      fj["category"] = cat;
      if (config.length_baseline && !fp.na) {
        fj["length_baseline"] = probe_json(probe::length_baseline_probe(x, lengths[ci], pseed, opts));
      }
      fp_json.push_back(fj);
    }
  }

  out.results["tables"][files::kTable3] = table_to_json(t3);
  out.results["tables"][files::kTable4] = table_to_json(t4);
  out.results["validation"] = validation_json;
  out.results["false_positive"] = fp_json;
  out.results["metadata"] = {
      {"validation_f", "f-score of the row category as positive class, averaged over the four "
                       "pairwise tasks, each the mean over folds"},
      {"false_positive_f", "f-score of the smaller k-means cluster as positive class, mean over folds"},
      {"na_rule", "smaller cluster has fewer members than folds"},
      {"folds", config.folds},
      {"shuffles", config.shuffles},
      {"regularization", config.regularization},
      {"pooling", "token mean per layer, then mean over layers"},
      {"layer_offsets", config.embed.layer_offsets},
  };
  fs::create_directories(config.output_dir);
  write_text(config.output_dir / files::kExp2Results, out.results.dump(2) + "\n");
  emit_tables(config.output_dir, out.results["tables"]);

  json m = manifest_base(config, started);
  m["stage_seeds"] = seeds;
  m["embedding_provider"] = acquirer.backend().identity();
  m["embedding_spec"] = acquirer.spec().identity();
  m["embedding_requests"] = acquirer.request_count();
  if (auto flag = acquirer.backend().special_tokens_excluded()) {
    m["special_tokens_excluded"] = *flag;
  } else {
    m["special_tokens_excluded"] = nullptr;
  }
  m["replication"] = config.replication;
  write_text(config.output_dir / "manifest_exp2.json", m.dump(2) + "\n");
  return out;
}

std::size_t run_embed(const RunConfig& config) {
  config.validate();
  const corpus::Dataset dataset = obtain_dataset(config);
  auto acquirer = make_acquirer(config);
  const std::uint64_t shuffle_seed = derive_seed(config.seed(), "exp2.shuffle");
  for (auto cond : kConditions) {
    acquirer.acquire(embedding::condition_texts(dataset, cond, shuffle_seed, config.shuffles));
  }
  return acquirer.cache().size();
}

std::vector<fs::path> run_report(const fs::path& output_dir) {
  std::vector<fs::path> written;
  for (const char* name : {files::kExp1Results, files::kExp2Results}) {
    const fs::path p = output_dir / name;
    if (!fs::exists(p)) continue;
    const json results = read_json(p);
    if (!results.contains("tables")) throw SchemaError(p.string() + ": no tables");
    auto w = emit_tables(output_dir, results.at("tables"));
    written.insert(written.end(), w.begin(), w.end());
  }
  if (written.empty()) {
    throw Error("no experiment results in " + output_dir.string());
  }
  return written;
}

}  // namespace cxprobe::experiment
