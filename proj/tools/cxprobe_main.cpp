#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/embedding/provider.hpp"
#include "cxprobe/experiment/config.hpp"
#include "cxprobe/experiment/runner.hpp"

namespace ex = cxprobe::experiment;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool mock = false;
  std::vector<std::string> corpora;
  std::string dataset;
  std::vector<std::string> settings;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Config file (key = value lines)");
  cmd->add_option("--seed", f.seed, "Master seed");
  cmd->add_option("--out", f.out, "Output directory");
  cmd->add_flag("--mock", f.mock, "Use the deterministic built-in providers");
  cmd->add_option("--corpus", f.corpora, "CoNLL-U treebank file (repeatable)");
  cmd->add_option("--dataset", f.dataset, "Dataset CSV");
  cmd->add_option("--set", f.settings, "Override a config key: key=value (repeatable)");
}

ex::RunConfig resolve(const CommonFlags& f) {
  ex::RunConfig c = f.config.empty() ? ex::RunConfig{} : ex::load_config(f.config);
  for (const std::string& kv : f.settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw cxprobe::ConfigError("--set expects key=value, got " + kv);
    ex::apply_setting(c, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (f.seed) c.master_seed = *f.seed;
  if (!f.out.empty()) c.output_dir = f.out;
  if (!f.corpora.empty()) c.corpora.assign(f.corpora.begin(), f.corpora.end());
  if (!f.dataset.empty()) c.dataset = f.dataset;
  if (f.mock) ex::use_mock_providers(c);
  c.validate();
  return c;
}

void print_exp1(const ex::Exp1Outputs& r, const ex::RunConfig& c) {
  ex::write_pretty(std::cout, r.consistency);
  ex::write_pretty(std::cout, r.clusters);
  std::size_t degenerate = 0;
  for (const auto& t : r.trials) degenerate += t.degenerate ? 1 : 0;
  std::cout << r.trials.size() << " trials (" << degenerate << " degenerate), results in "
            << c.output_dir.string() << "\n";
}

void print_exp2(const ex::Exp2Outputs& r, const ex::RunConfig& c) {
  ex::write_pretty(std::cout, r.validation);
  ex::write_pretty(std::cout, r.false_positive);
  std::cout << "results in " << c.output_dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construction probing toolkit: sentence-sorting and embedding probe experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ex::kToolkitVersion));

  CommonFlags f;
  auto* extract = app.add_subcommand("extract", "Build the balanced dataset from treebanks");
  auto* embed = app.add_subcommand("embed", "Fill the embedding cache for the dataset");
  auto* exp1 = app.add_subcommand("exp1", "Sentence-sorting experiment (tables 1 and 2)");
  auto* exp2 = app.add_subcommand("exp2", "Embedding probe experiment (tables 3 and 4)");
  auto* run = app.add_subcommand("run", "Both experiments, as enabled in the config");
  for (auto* cmd : {extract, embed, exp1, exp2, run}) add_common(cmd, f);

  std::string report_dir = "out";
  auto* report = app.add_subcommand("report", "Re-render tables from saved results");
  report->add_option("--out", report_dir, "Output directory holding results JSON");

  std::string health_endpoint = "http://127.0.0.1:8000";
  auto* health = app.add_subcommand("health", "Query an inference sidecar's /health");
  health->add_option("--endpoint", health_endpoint, "Sidecar base URL");

  CLI11_PARSE(app, argc, argv);

  try {
    if (health->parsed()) {
      const auto h = cxprobe::embedding::check_health(health_endpoint);
      if (!h.ready()) {
        std::cout << "not ready (status " << h.status << ")\n";
        return 1;
      }
      std::cout << "ready: model " << h.model << ", dim " << h.dim << "\n";
      return 0;
    }
    if (report->parsed()) {
      for (const auto& p : ex::run_report(report_dir)) std::cout << p.string() << "\n";
      return 0;
    }
    const ex::RunConfig config = resolve(f);
    if (extract->parsed()) {
      const auto r = ex::run_extract(config);
      std::cout << r.dataset.entries.size() << " sentences written to " << r.path.string() << "\n";
    } else if (embed->parsed()) {
      std::cout << ex::run_embed(config) << " cached texts in " << config.cache_path().string()
                << "\n";
    } else if (exp1->parsed()) {
      print_exp1(ex::run_experiment1(config), config);
    } else if (exp2->parsed()) {
      print_exp2(ex::run_experiment2(config), config);
    } else if (run->parsed()) {
      if (config.exp1_enabled) print_exp1(ex::run_experiment1(config), config);
      if (config.exp2_enabled) print_exp2(ex::run_experiment2(config), config);
    }
  } catch (const cxprobe::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
