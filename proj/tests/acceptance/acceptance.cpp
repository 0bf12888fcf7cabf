// Acceptance checks. One PASS/FAIL line per criterion; the exit status is
// non-zero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cxprobe/common/csv.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/corpus/clause.hpp"
#include "cxprobe/corpus/conllu.hpp"
#include "cxprobe/corpus/dataset.hpp"
#include "cxprobe/embedding/conditions.hpp"
#include "cxprobe/embedding/provider.hpp"
#include "cxprobe/experiment/config.hpp"
#include "cxprobe/experiment/runner.hpp"
#include "cxprobe/probe/crossval.hpp"
#include "cxprobe/probe/kmeans.hpp"
#include "cxprobe/probe/logistic.hpp"
#include "cxprobe/probe/probes.hpp"
#include "cxprobe/sorting/chat.hpp"
#include "cxprobe/sorting/prompt.hpp"
#include "cxprobe/sorting/response.hpp"
#include "oracles.hpp"

using namespace cxprobe;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fmt(double v, int decimals = 4) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(decimals);
  os << v;
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cxprobe_acceptance_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path demo_treebank() { return fs::path(CXPROBE_DATA) / "demo_treebank.conllu"; }

void run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + CXPROBE_CLI + "\" " + args + " > /dev/null";
  if (std::system(cmd.c_str()) != 0) throw std::runtime_error("command failed: " + cmd);
}

std::vector<std::vector<std::string>> csv_cells(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::vector<std::string>> rows;
  csv::Row row;
  std::size_t line = 0;
  bool header = true;
  while (csv::read_row(in, row, line)) {
    if (!header) rows.emplace_back(row.begin() + 1, row.end());  // drop the label column
    header = false;
  }
  return rows;
}

// --- 1 -------------------------------------------------------------------

Outcome mock_experiment1() {
  const fs::path out = scratch("exp1");
  const auto start = std::chrono::steady_clock::now();
  run_cli("exp1 --mock --seed " + std::to_string(kSeed) + " --corpus \"" + demo_treebank().string() +
          "\" --out \"" + out.string() + "\"");
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::size_t cells = 0, perfect = 0;
  for (const auto& row : csv_cells(out / (std::string(experiment::files::kTable1) + ".csv"))) {
    for (const auto& c : row) {
      ++cells;
      perfect += c == "100.00";
    }
  }
  std::size_t clusters = 0, clusters_perfect = 0;
  for (const auto& row : csv_cells(out / (std::string(experiment::files::kTable2) + ".csv"))) {
    for (const auto& c : row) {
      ++clusters;
      clusters_perfect += c == "100.00";
    }
  }
  const std::string pretty = slurp(out / (std::string(experiment::files::kTable2) + ".txt"));
  std::size_t pretty_hits = 0;
  for (std::size_t p = pretty.find("100.0%"); p != std::string::npos; p = pretty.find("100.0%", p + 1)) {
    ++pretty_hits;
  }
  return {cells == 25 && perfect == 25 && clusters == 5 && clusters_perfect == 5 && pretty_hits == 5 &&
              secs < 30.0,
          std::to_string(perfect) + "/" + std::to_string(cells) + " cells at 100.00%, " +
              std::to_string(clusters_perfect) + "/" + std::to_string(clusters) +
              " clusters at 100.0%, " + fmt(secs, 2) + " s"};
}

// --- 2 -------------------------------------------------------------------

// Independent simulation of one cell: 100 sentences, 100 trials with
// distinct exemplars, 6 stimuli drawn from the other 99, 3 returned at
// random.
double simulate_cell(std::mt19937_64& gen) {
  constexpr int n = 100;
  std::vector<int> exemplars(n);
  for (int i = 0; i < n; ++i) exemplars[i] = i;
  std::shuffle(exemplars.begin(), exemplars.end(), gen);
  std::vector<int> together(n * n, 0), apart(n * n, 0);
  for (int t = 0; t < n; ++t) {
    std::vector<int> pool;
    for (int i = 0; i < n; ++i) {
      if (i != exemplars[t]) pool.push_back(i);
    }
    std::shuffle(pool.begin(), pool.end(), gen);
    std::array<int, 6> stim;
    std::copy_n(pool.begin(), 6, stim.begin());
    std::array<bool, 6> picked{true, true, true, false, false, false};
    std::shuffle(picked.begin(), picked.end(), gen);
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) {
        const int lo = std::min(stim[a], stim[b]), hi = std::max(stim[a], stim[b]);
        (picked[a] == picked[b] ? together : apart)[lo * n + hi]++;
      }
    }
  }
  double sum = 0.0;
  int pairs = 0;
  for (int k = 0; k < n * n; ++k) {
    const int tot = together[k] + apart[k];
    if (tot < 2) continue;
    sum += static_cast<double>(std::max(together[k], apart[k])) / tot;
    ++pairs;
  }
  return 100.0 * sum / pairs;
}

Outcome random_baseline() {
  // Per-pair together-probability: one fixed stimulus set, many prompts.
  const std::vector<std::string> stimuli{"The dog barked.",  "She sent him a note.", "It snowed.",
                                         "They built a shed.", "He was praised.",    "We knew that it ended."};
  sorting::RandomResponder responder(derive_seed(kSeed, "exp1.random"));
  constexpr int draws = 4000;
  std::map<std::pair<int, int>, int> together;
  for (int d = 0; d < draws; ++d) {
    const auto prompt = sorting::build_prompt(sorting::NonceName::AlternateApplication,
                                              "Exemplar number " + std::to_string(d) + ".", stimuli);
    const auto parsed = sorting::parse_response(responder.complete(prompt), stimuli);
    if (parsed.degenerate) throw std::runtime_error("random responder returned a degenerate reply");
    std::array<bool, 6> in{};
    for (auto i : parsed.returned) in[i] = true;
    for (int a = 0; a < 6; ++a) {
      for (int b = a + 1; b < 6; ++b) together[{a, b}] += in[a] == in[b];
    }
  }
  double worst = 0.0;
  for (const auto& [k, v] : together) worst = std::max(worst, std::abs(v / double(draws) - 0.4));

  // Mean consistency of the 25 cells of a real run against the simulation.
  const fs::path out = scratch("random");
  experiment::RunConfig config = experiment::parse_config(
      "seed = " + std::to_string(kSeed) + "\nchat.mode = mock-random\nexp1.trials = 100\nper_category = 100\n");
  config.corpora = {demo_treebank()};
  config.output_dir = out;
  config.validate();
  const auto e1 = experiment::run_experiment1(config);
  double sum = 0.0;
  int cells = 0;
  for (const auto& row : e1.consistency.rows) {
    for (const auto& c : row.cells) {
      if (!c) throw std::runtime_error("undefined consistency cell");
      sum += *c;
      ++cells;
    }
  }
  const double observed = sum / cells;

  std::mt19937_64 gen(20240611);
  double oracle_sum = 0.0;
  constexpr int simulated = 10000;
  for (int i = 0; i < simulated; ++i) oracle_sum += simulate_cell(gen);
  const double expected = oracle_sum / simulated;

  return {worst <= 0.05 && std::abs(observed - expected) <= 3.0 && cells == 25,
          "max |p_together - 0.4| = " + fmt(worst) + ", mean consistency " + fmt(observed, 2) +
              " vs oracle " + fmt(expected, 2)};
}

// --- 3 -------------------------------------------------------------------

Outcome confirmation_bias() {
  Rng rng(derive_seed(kSeed, "acceptance.isotropic"));
  const auto pts = oracle::gaussian_blob(std::vector<double>(64, 0.0), 100, 1.0, rng);
  const probe::Matrix x = probe::Matrix::from_rows(pts);
  const auto fp = probe::false_positive_probe(x, kSeed);
  const auto perm = probe::permuted_label_probe(x, kSeed);
  if (fp.na || perm.na) return {false, "probe reported NA"};
  return {fp.mean_f >= 0.90 && perm.mean_f <= 0.65,
          "false-positive f " + fmt(fp.mean_f) + " (>= 0.90), permuted f " + fmt(perm.mean_f) +
              " (<= 0.65)"};
}

// --- 4 -------------------------------------------------------------------

Outcome validation_sanity() {
  Rng rng(derive_seed(kSeed, "acceptance.validation"));
  constexpr std::size_t dim = 32, per = 100;
  probe::CategoryEmbeddings groups;
  for (std::size_t c = 0; c < groups.size(); ++c) {
    std::vector<double> centre(dim, 0.0);
    centre[c] = 10.0;  // pairwise centre distance 10 * sqrt(2) sigma
    for (auto& p : oracle::gaussian_blob(centre, per, 1.0, rng)) {
      groups[c].push_back({"g" + std::to_string(c), embedding::EmbeddingCondition::Direct, std::move(p)});
    }
  }
  const auto report = probe::validation_probe(groups, embedding::EmbeddingCondition::Direct, kSeed);
  const double worst_cell = *std::min_element(report.cells.begin(), report.cells.end());

  std::vector<double> a(dim, 0.0), b(dim, 0.0);
  a[0] = -5.0;
  b[0] = 5.0;
  auto pts = oracle::gaussian_blob(a, 60, 1.0, rng);
  const auto more = oracle::gaussian_blob(b, 40, 1.0, rng);
  pts.insert(pts.end(), more.begin(), more.end());
  std::vector<int> planted(100, 0);
  std::fill(planted.begin() + 60, planted.end(), 1);
  const probe::Matrix x = probe::Matrix::from_rows(pts);
  const auto km = probe::kmeans(x, probe::KMeansOptions{.k = 2, .seed = kSeed});
  const double agreement =
      oracle::two_label_agreement(std::vector<int>(km.labels.begin(), km.labels.end()), planted);
  const auto fp = probe::false_positive_probe(x, kSeed);

  return {worst_cell >= 0.99 && agreement >= 0.95 && !fp.na && fp.mean_f >= 0.99,
          "min validation cell " + fmt(worst_cell) + ", planted agreement " + fmt(agreement) +
              ", probe f " + fmt(fp.mean_f)};
}

// --- 5 -------------------------------------------------------------------

Outcome numerical_core() {
  int matched = 0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Rng rng(derive_seed(kSeed, "acceptance.kmeans", {inst}));
    const std::size_t n = 3 + rng.uniform_index(6);  // 3..8 points
    const std::size_t dim = 1 + rng.uniform_index(3);
    std::vector<std::vector<double>> pts(n, std::vector<double>(dim));
    for (auto& p : pts) {
      for (auto& v : p) v = rng.normal() * 2.0;
    }
    const auto best = oracle::best_two_partition(pts);
    const auto got = probe::kmeans(probe::Matrix::from_rows(pts),
                                   probe::KMeansOptions{.k = 2, .seed = inst, .restarts = 50});
    matched += std::abs(got.inertia - best.wcss) <= 1e-9 * std::max(1.0, best.wcss);
  }

  double worst_rel = 0.0;
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    Rng rng(derive_seed(kSeed, "acceptance.gradient", {inst}));
    probe::Matrix x(5, 3);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    }
    const std::vector<int> y{1, 0, 0, 1, 1};
    const std::vector<double> w{rng.normal(), rng.normal(), rng.normal()};
    const double b = rng.normal();
    const auto obj = probe::logistic_objective(x, y, w, b, 1.0);
    const auto num = oracle::numeric_gradient(x, y, w, b, 1.0, 1e-5);
    std::vector<double> ana = obj.grad_weights;
    ana.push_back(obj.grad_bias);
    for (std::size_t j = 0; j < ana.size(); ++j) {
      const double scale = std::max({std::abs(ana[j]), std::abs(num[j]), 1e-8});
      worst_rel = std::max(worst_rel, std::abs(ana[j] - num[j]) / scale);
    }
  }

  const std::vector<int> gold{1, 1, 0, 0, 1};
  const std::vector<int> pred{1, 1, 1, 0, 0};  // TP=2 FP=1 FN=1
  const std::vector<int> none{0, 0, 0, 0, 0};
  const bool f_exact = probe::f_score(gold, gold) == 1.0 && probe::f_score(pred, gold) == 2.0 / 3.0 &&
                       probe::f_score(none, gold) == 0.0;

  return {matched == 20 && worst_rel <= 1e-4 && f_exact,
          std::to_string(matched) + "/20 k-means optima, max gradient rel error " +
              std::to_string(worst_rel) + ", f_score cases " + (f_exact ? "exact" : "wrong")};
}

// --- 6 -------------------------------------------------------------------

Outcome grammar_focus_identity() {
  const auto dataset = corpus::build_dataset({corpus::load_corpus(demo_treebank())}, 100, kSeed);
  std::size_t nonzero = 0, total = 0;
  for (std::size_t shuffles : {1u, 3u}) {
    embedding::ProviderSpec spec;
    spec.mock_order_invariant = true;
    embedding::EmbeddingAcquirer acq(spec, embedding::make_backend(spec));
    const auto gf = embedding::build_condition_set(dataset, acq,
                                                   embedding::EmbeddingCondition::GrammarFocused,
                                                   kSeed, shuffles);
    for (const auto& v : gf) {
      for (double x : v.values) {
        ++total;
        nonzero += x != 0.0;
      }
    }
  }
  return {nonzero == 0 && total > 0,
          std::to_string(nonzero) + " non-zero of " + std::to_string(total) + " values"};
}

// --- 7 -------------------------------------------------------------------

Outcome determinism() {
  std::vector<fs::path> runs;
  for (int r = 0; r < 2; ++r) {
    const fs::path out = scratch("determinism" + std::to_string(r));
    const std::string common = " --mock --seed " + std::to_string(kSeed) + " --corpus \"" +
                               demo_treebank().string() + "\" --out \"" + out.string() + "\"";
    run_cli("exp1" + common);
    run_cli("exp2" + common);
    runs.push_back(out);
  }
  std::size_t compared = 0;
  std::vector<std::string> differing;
  for (const auto& entry : fs::directory_iterator(runs[0])) {
    const auto name = entry.path().filename().string();
    const auto ext = entry.path().extension().string();
    if (ext != ".csv" && ext != ".txt" && name.find("results") == std::string::npos) continue;
    ++compared;
    if (!fs::exists(runs[1] / name) || slurp(entry.path()) != slurp(runs[1] / name)) {
      differing.push_back(name);
    }
  }
  std::string detail = std::to_string(compared) + " report files compared";
  for (const auto& d : differing) detail += ", differs: " + d;
  return {compared >= 10 && differing.empty(), detail};
}

// --- 8 -------------------------------------------------------------------

Outcome corpus_checks() {
  const fs::path fixtures(CXPROBE_FIXTURES);
  const std::string raw = slurp(fixtures / "roundtrip50.conllu");
  const auto parsed = corpus::parse_conllu(raw);
  const bool roundtrip =
      parsed.size() == 50 && corpus::to_conllu(parsed) == raw && corpus::parse_conllu(corpus::to_conllu(parsed)) == parsed;

  const std::string annotated = slurp(fixtures / "annotated_examples.conllu");
  std::vector<std::string> expected;
  std::istringstream in(annotated);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("# expected = ", 0) == 0) expected.push_back(line.substr(13));
  }
  const auto examples = corpus::parse_conllu(annotated);
  int correct = 0;
  for (std::size_t i = 0; i < examples.size() && i < expected.size(); ++i) {
    const auto got = corpus::classify_clause(examples[i]);
    correct += got && corpus::to_string(*got) == expected[i];
  }
  return {roundtrip && examples.size() == 10 && expected.size() == 10 && correct == 10,
          std::string("50-sentence round trip ") + (roundtrip ? "byte-identical" : "differs") + ", " +
              std::to_string(correct) + "/10 examples classified as annotated"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"mock-exp1", mock_experiment1},
      {"random-baseline", random_baseline},
      {"confirmation-bias", confirmation_bias},
      {"validation-sanity", validation_sanity},
      {"numerical-core", numerical_core},
      {"grammar-focus-identity", grammar_focus_identity},
      {"determinism", determinism},
      {"corpus", corpus_checks},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
