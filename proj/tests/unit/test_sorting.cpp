#include <doctest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/sorting/chat.hpp"
#include "cxprobe/sorting/metrics.hpp"
#include "cxprobe/sorting/prompt.hpp"
#include "cxprobe/sorting/response.hpp"
#include "cxprobe/sorting/trial.hpp"
#include "mock_sidecar.hpp"

using namespace cxprobe;
using namespace cxprobe::sorting;
using corpus::ConstructionCategory;

namespace {

corpus::Dataset synthetic_dataset(std::size_t per_category) {
  corpus::Dataset ds;
  ds.per_category = per_category;
  for (auto c : corpus::kAllCategories) {
    for (std::size_t i = 0; i < per_category; ++i) {
      const std::string id = std::string(corpus::to_string(c)) + "-" + std::to_string(i);
      ds.entries.push_back({id, "sentence " + id + " here", c, "synthetic"});
    }
  }
  return ds;
}

SortingTrial trial(std::vector<std::string> stimuli, std::vector<std::string> returned,
                   bool degenerate = false) {
  SortingTrial t;
  t.stimuli_ids = std::move(stimuli);
  t.returned_ids = std::move(returned);
  t.degenerate = degenerate;
  return t;
}

const std::vector<std::string> kSix{"a", "b", "c", "d", "e", "f"};

}  // namespace

TEST_CASE("prompt layout") {
  const std::vector<std::string> stimuli{"One.", "Two.", "Three."};
  const std::string p = build_prompt(NonceName::RevertedFocus, "Ex here.", stimuli);
  CHECK(p.find("instances of the Reverted Focus construction, as exemplified by the following "
               "sentence: \"Ex here.\"") != std::string::npos);
  CHECK(p.ends_with(std::string(kOutputInstruction) + "\nOne.\nTwo.\nThree."));
  const std::string withp = build_prompt(NonceName::RevertedFocus, "Ex here.", stimuli,
                                         std::string("Be careful."));
  CHECK(withp == "Be careful.\n" + p);
  CHECK(extract_stimuli(p) == stimuli);
  const std::vector<std::string> repeated{"One.", "One."};
  CHECK_THROWS_AS(build_prompt(NonceName::RevertedFocus, "x", repeated), std::invalid_argument);
  for (NonceName n : kAllNonces) CHECK(parse_nonce(to_string(n)) == n);
}

TEST_CASE("sample_trials") {
  const auto ds = synthetic_dataset(100);
  SUBCASE("100 trials use 100 distinct exemplars and valid stimuli") {
    const auto trials = sample_trials(ds, ConstructionCategory::Passive, NonceName::PristineExemplar, 100, 5);
    REQUIRE(trials.size() == 100);
    std::set<std::string> exemplars;
    for (const auto& t : trials) {
      exemplars.insert(t.exemplar_id);
      CHECK(t.stimuli_ids.size() == kStimuliPerTrial);
      std::set<std::string> s(t.stimuli_ids.begin(), t.stimuli_ids.end());
      CHECK(s.size() == kStimuliPerTrial);
      CHECK(s.count(t.exemplar_id) == 0);
      for (const auto& id : s) CHECK(id.starts_with("Passive-"));
      CHECK(t.category == ConstructionCategory::Passive);
    }
    CHECK(exemplars.size() == 100);
    CHECK(sample_trials(ds, ConstructionCategory::Passive, NonceName::PristineExemplar, 100, 5) == trials);
  }
  SUBCASE("n = 1") {
    CHECK(sample_trials(ds, ConstructionCategory::Intransitive, NonceName::RevertedFocus, 1, 1).size() == 1);
  }
  SUBCASE("category below 7 sentences") {
    const auto small = synthetic_dataset(6);
    CHECK_THROWS_AS(sample_trials(small, ConstructionCategory::Intransitive, NonceName::RevertedFocus, 3, 1),
                    CategoryTooSmallError);
  }
}

TEST_CASE("parse_response") {
  const std::vector<std::string> stimuli{"The cat slept.",  "She gave him a book.", "It rained.",
                                         "They saw a bird.", "He was seen.",         "I know that it works."};
  SUBCASE("verbatim lines") {
    const auto r = parse_response("It rained.\nThe cat slept.\nHe was seen.", stimuli);
    CHECK_FALSE(r.degenerate);
    CHECK(r.returned == std::vector<std::size_t>{0, 2, 4});
  }
  SUBCASE("refusal is degenerate") {
    const auto r = parse_response("None of the provided sentences fit this construction.", stimuli);
    CHECK(r.degenerate);
    CHECK(r.returned.empty());
  }
  SUBCASE("numbered and quoted lines") {
    const auto r = parse_response("1. \"The cat slept.\"\n2) 'It rained.'\n- They saw a bird", stimuli);
    CHECK_FALSE(r.degenerate);
    CHECK(r.returned == std::vector<std::size_t>{0, 2, 3});
  }
  SUBCASE("small typo matches fuzzily") {
    const auto r = parse_response("The cat slept\nShe gave him a bok.\nIt rained.", stimuli);
    CHECK_FALSE(r.degenerate);
    CHECK(r.returned == std::vector<std::size_t>{0, 1, 2});
  }
  SUBCASE("two or four lines are degenerate") {
    CHECK(parse_response("It rained.\nThe cat slept.", stimuli).degenerate);
    CHECK(parse_response("It rained.\nThe cat slept.\nHe was seen.\nThey saw a bird.", stimuli).degenerate);
  }
  SUBCASE("a repeated line counts once") {
    CHECK(parse_response("It rained.\nIt rained.\nHe was seen.", stimuli).degenerate);
  }
}

TEST_CASE("consistency_accuracy") {
  SUBCASE("identical partitions give 100") {
    std::vector<SortingTrial> trials(3, trial(kSix, {"a", "b", "c"}));
    const auto r = consistency_accuracy(trials);
    CHECK(r.percentage == doctest::Approx(100.0));
    CHECK(r.qualifying_pairs == 15);
  }
  SUBCASE("2 together, 1 apart") {
    std::vector<SortingTrial> trials{trial({"a", "b", "x", "y", "z", "w"}, {"a", "b", "x"}),
                                     trial({"a", "b", "p", "q", "r", "s"}, {"a", "b", "p"}),
                                     trial({"a", "b", "m", "n", "o", "t"}, {"a", "m", "n"})};
    const auto stats = pair_statistics(trials);
    const auto& ab = stats.at({"a", "b"});
    CHECK(ab.together == 2);
    CHECK(ab.apart == 1);
    const auto r = consistency_accuracy(trials);
    CHECK(r.qualifying_pairs == 1);
    CHECK(r.percentage == doctest::Approx(200.0 / 3.0));
  }
  SUBCASE("no qualifying pair") {
    std::vector<SortingTrial> trials{trial(kSix, {"a", "b", "c"})};
    CHECK_THROWS_AS(consistency_accuracy(trials), UndefinedMetricError);
  }
  SUBCASE("degenerate trials are ignored") {
    std::vector<SortingTrial> trials{trial(kSix, {"a", "b", "c"}), trial(kSix, {"a", "d", "e"}, true),
                                     trial(kSix, {"a", "b", "c"})};
    const auto r = consistency_accuracy(trials);
    CHECK(r.trials_used == 2);
    CHECK(r.percentage == doctest::Approx(100.0));
  }
}

TEST_CASE("co-occurrence matrix") {
  SUBCASE("single trial") {
    const auto m = build_cooccurrence({trial(kSix, {"a", "c", "e"})});
    REQUIRE(m.sentence_ids == kSix);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) {
        const bool both = i != j && i % 2 == 0 && j % 2 == 0;
        CHECK(m.counts[i][j] == (both ? 1u : 0u));
      }
    }
    const auto both = build_cooccurrence({trial(kSix, {"a", "c", "e"})}, MatrixMode::BothSides);
    CHECK(both.counts[1][3] == 1);
    CHECK(both.counts[0][1] == 0);
  }
  SUBCASE("symmetric and independent of trial order") {
    Rng rng(3);
    std::vector<SortingTrial> trials;
    for (int i = 0; i < 40; ++i) {
      std::vector<std::string> ids;
      for (int k = 0; k < 20; ++k) ids.push_back("s" + std::to_string(k));
      rng.shuffle(std::span<std::string>(ids));
      ids.resize(6);
      std::vector<std::string> ret(ids.begin(), ids.begin() + 3);
      trials.push_back(trial(ids, ret));
    }
    const auto m = build_cooccurrence(trials);
    for (std::size_t i = 0; i < m.counts.size(); ++i) {
      CHECK(m.counts[i][i] == 0);
      for (std::size_t j = 0; j < m.counts.size(); ++j) CHECK(m.counts[i][j] == m.counts[j][i]);
    }
    std::reverse(trials.begin(), trials.end());
    CHECK(build_cooccurrence(trials).counts == m.counts);
  }
}

TEST_CASE("cluster_accuracy") {
  SUBCASE("two disjoint cliques") {
    std::vector<SortingTrial> trials;
    for (int i = 0; i < 5; ++i) {
      trials.push_back(trial({"a", "b", "c", "x", "y", "z"}, {"a", "b", "c"}));
      trials.push_back(trial({"a", "b", "c", "x", "y", "z"}, {"x", "y", "z"}));
      trials.push_back(trial({"a", "b", "d", "x", "y", "w"}, {"x", "y", "w"}));
      trials.push_back(trial({"a", "c", "d", "x", "z", "w"}, {"a", "c", "d"}));
    }
    for (auto mode : {VectorMode::Raw, VectorMode::Binary, VectorMode::RowNormalized}) {
      const auto r = cluster_accuracy(build_cooccurrence(trials), 1, mode);
      CHECK(r.percentage == 100.0);
      CHECK(r.paired == 8);
      CHECK(r.labels[0] != r.labels[4]);  // a vs w
    }
  }
  SUBCASE("a complete graph cannot be split consistently") {
    std::vector<SortingTrial> trials{trial(kSix, {"a", "b", "c"}), trial(kSix, {"d", "e", "f"}),
                                     trial(kSix, {"a", "d", "e"}), trial(kSix, {"b", "c", "f"}),
                                     trial(kSix, {"a", "b", "f"}), trial(kSix, {"c", "d", "e"}),
                                     trial(kSix, {"a", "c", "e"}), trial(kSix, {"b", "d", "f"}),
                                     trial(kSix, {"a", "d", "f"}), trial(kSix, {"b", "c", "e"})};
    const auto m = build_cooccurrence(trials);
    for (std::size_t i = 0; i < 6; ++i) {
      for (std::size_t j = 0; j < 6; ++j) CHECK((i == j) == (m.counts[i][j] == 0));
    }
    CHECK(cluster_accuracy(m, 1).percentage == 0.0);
  }
  SUBCASE("unpaired sentences are skipped") {
    const auto m = build_cooccurrence({trial(kSix, {"a", "b", "c"})});
    CHECK_THROWS_AS(cluster_accuracy(build_cooccurrence({trial(kSix, {"a", "b"}, true)}), 1),
                    DegenerateInputError);
    const auto r = cluster_accuracy(m, 1);
    CHECK(r.paired == 3);
    CHECK(r.labels[3] == -1);
  }
}

TEST_CASE("trial log round trip") {
  const auto ds = synthetic_dataset(20);
  auto trials = sample_trials(ds, ConstructionCategory::DoubleObject, NonceName::EntrenchedObjective, 4, 9);
  trials[0].raw_response = "line one\n\"quoted\", with comma";
  trials[0].returned_ids = {trials[0].stimuli_ids[1], trials[0].stimuli_ids[4], trials[0].stimuli_ids[5]};
  trials[1].degenerate = true;
  std::stringstream ss;
  write_trial_log(ss, trials);
  CHECK(read_trial_log(ss) == trials);
  const auto first_line = ss.str().substr(0, ss.str().find('\n'));
  const auto j = nlohmann::json::parse(first_line);
  for (const char* key : {"trial_id", "category", "nonce", "exemplar_id", "stimuli_ids", "raw_response",
                          "returned_ids", "degenerate"}) {
    CHECK(j.contains(key));
  }
}

TEST_CASE("a responder that ignores the construction name gives identical statistics for every nonce") {
  const auto ds = synthetic_dataset(100);
  auto text_of = [&](const std::string& id) -> const std::string& {
    for (const auto& e : ds.entries) {
      if (e.sentence_id == id) return e.text;
    }
    throw std::out_of_range(id);
  };
  const auto base = sample_trials(ds, ConstructionCategory::TransitiveNP, NonceName::PristineExemplar, 30, 4);
  std::optional<std::map<PairKey, PairStat>> reference;
  for (NonceName n : kAllNonces) {
    auto trials = base;
    for (auto& t : trials) t.nonce = n;
    AlphabeticalResponder responder;
    run_trials(trials, text_of, responder);
    const auto stats = pair_statistics(trials);
    if (!reference) reference = stats;
    for (const auto& [k, v] : stats) {
      CHECK(reference->at(k).together == v.together);
      CHECK(reference->at(k).apart == v.apart);
    }
  }
}

TEST_CASE("mock responders") {
  const std::vector<std::string> stimuli{"delta one", "alpha two", "echo three",
                                         "bravo four", "foxtrot five", "charlie six"};
  const std::string prompt = build_prompt(NonceName::PristineExemplar, "ex", stimuli);
  SUBCASE("alphabetical") {
    AlphabeticalResponder r;
    const auto parsed = parse_response(r.complete(prompt), stimuli);
    CHECK(parsed.returned == std::vector<std::size_t>{1, 3, 5});
  }
  SUBCASE("random picks three, reproducibly") {
    RandomResponder r(11);
    const std::string a = r.complete(prompt);
    CHECK(a == r.complete(prompt));
    CHECK_FALSE(parse_response(a, stimuli).degenerate);
  }
  SUBCASE("puppet output depends on the stimuli set only") {
    PuppetResponder r(5);
    std::vector<std::string> reordered(stimuli.rbegin(), stimuli.rend());
    const auto a = parse_response(r.complete(prompt), stimuli);
    const auto b = parse_response(
        r.complete(build_prompt(NonceName::RevertedFocus, "other", reordered)), reordered);
    std::set<std::string> sa, sb;
    for (auto i : a.returned) sa.insert(stimuli[i]);
    for (auto i : b.returned) sb.insert(reordered[i]);
    CHECK(sa == sb);
    for (const auto& s : sa) {
      for (const auto& t : sa) CHECK(r.group_of(s) == r.group_of(t));
    }
  }
}

TEST_CASE("puppet responder sorts with perfect consistency and clustering") {
  const auto ds = synthetic_dataset(100);
  std::map<std::string, std::string> texts;
  for (const auto& e : ds.entries) texts[e.sentence_id] = e.text;
  auto text_of = [&](const std::string& id) -> const std::string& { return texts.at(id); };
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    // One category, all five names pooled, as the co-occurrence table is built.
    std::vector<SortingTrial> pooled;
    PuppetResponder responder(seed);
    for (NonceName n : kAllNonces) {
      auto trials = sample_trials(ds, ConstructionCategory::TransitiveC, n, 100,
                                  derive_seed(seed, "nonce", {static_cast<std::uint64_t>(n)}));
      run_trials(trials, text_of, responder, ExecutionOptions{.in_flight = 3});
      CHECK(consistency_accuracy(trials).percentage == doctest::Approx(100.0));
      pooled.insert(pooled.end(), trials.begin(), trials.end());
    }
    CHECK(responder.request_count() == 500);
    CAPTURE(seed);
    CHECK(cluster_accuracy(build_cooccurrence(pooled), seed).percentage == doctest::Approx(100.0));
  }
}

TEST_CASE("HTTP chat adapter against a local sidecar") {
  MockSidecar sidecar;
  std::string seen;
  sidecar.chat = [&](const httplib::Request& req, httplib::Response& res) {
    seen = req.body;
    res.set_content(R"({"text":"a\nb\nc"})", "application/json");
  };
  SUBCASE("request body carries prompt and decoding parameters") {
    HttpChatAdapter chat(sidecar.url(), DecodingParams{0.0, 64, "m1"});
    CHECK(chat.complete("hello") == "a\nb\nc");
    const auto j = nlohmann::json::parse(seen);
    CHECK(j.at("prompt") == "hello");
    CHECK(j.at("decoding").at("temperature") == 0.0);
    CHECK(j.at("decoding").at("max_tokens") == 64);
    CHECK(j.at("decoding").at("model") == "m1");
    CHECK(chat.request_count() == 1);
  }
  SUBCASE("server errors are retried") {
    int calls = 0;
    sidecar.chat = [&](const httplib::Request&, httplib::Response& res) {
      if (++calls < 3) {
        res.status = 503;
        return;
      }
      res.set_content(R"({"text":"ok"})", "application/json");
    };
    HttpChatAdapter chat(sidecar.url(), {}, 5000, 3, 1);
    CHECK(chat.complete("p") == "ok");
    CHECK(sidecar.chat_calls == 3);
  }
  SUBCASE("retries are bounded") {
    sidecar.chat = [](const httplib::Request&, httplib::Response& res) { res.status = 500; };
    HttpChatAdapter chat(sidecar.url(), {}, 5000, 2, 1);
    CHECK_THROWS_AS(chat.complete("p"), TransportError);
    CHECK(sidecar.chat_calls == 3);
  }
  SUBCASE("client errors are not retried") {
    sidecar.chat = [](const httplib::Request&, httplib::Response& res) { res.status = 400; };
    HttpChatAdapter chat(sidecar.url(), {}, 5000, 3, 1);
    CHECK_THROWS_AS(chat.complete("p"), TransportError);
    CHECK(sidecar.chat_calls == 1);
  }
  SUBCASE("malformed body") {
    sidecar.chat = [](const httplib::Request&, httplib::Response& res) {
      res.set_content("{\"txt\":1}", "application/json");
    };
    HttpChatAdapter chat(sidecar.url(), {}, 5000, 0, 1);
    CHECK_THROWS_AS(chat.complete("p"), TransportError);
  }
}
