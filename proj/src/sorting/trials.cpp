#include "cxprobe/sorting/trial.hpp"

#include <cstdio>

#include <json.hpp>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/common/text.hpp"

namespace cxprobe::sorting {

using json = nlohmann::json;

namespace {

std::string slug(NonceName n) {
  std::string s;
  for (char c : to_string(n)) {
    if (c != ' ') s += c;
  }
  return s;
}

}  // namespace

std::vector<SortingTrial> sample_trials(const corpus::Dataset& dataset,
                                        corpus::ConstructionCategory category, NonceName nonce,
                                        std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_trials: n must be at least 1");
  std::vector<std::string> ids;
  for (const auto* e : dataset.of_category(category)) ids.push_back(e->sentence_id);
  if (ids.size() < kStimuliPerTrial + 1) {
    throw CategoryTooSmallError("category " + std::string(corpus::to_string(category)) +
                                " has " + std::to_string(ids.size()) +
                                " sentences; a trial needs " +
                                std::to_string(kStimuliPerTrial + 1));
  }

  Rng rng(seed);
  std::vector<std::size_t> exemplar_order;
  std::vector<SortingTrial> trials;
  trials.reserve(n);
  for (std::size_t t = 0; t < n; ++t) {
    // Exemplars come from successive permutations of the category, so they
    // are distinct until every sentence has served once.
    if (t % ids.size() == 0) {
      exemplar_order.resize(ids.size());
      for (std::size_t i = 0; i < ids.size(); ++i) exemplar_order[i] = i;
      rng.shuffle(std::span<std::size_t>(exemplar_order));
    }
    const std::size_t exemplar = exemplar_order[t % ids.size()];

    std::vector<std::size_t> pool;
    pool.reserve(ids.size() - 1);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i != exemplar) pool.push_back(i);
    }
    for (std::size_t i = 0; i < kStimuliPerTrial; ++i) {
      std::swap(pool[i], pool[i + rng.uniform_index(pool.size() - i)]);
    }

    SortingTrial trial;
    char num[32];
    std::snprintf(num, sizeof num, "%03zu", t + 1);
    trial.trial_id = std::string(corpus::to_string(category)) + "/" + slug(nonce) + "/" + num;
    trial.category = category;
    trial.nonce = nonce;
    trial.exemplar_id = ids[exemplar];
    for (std::size_t i = 0; i < kStimuliPerTrial; ++i) trial.stimuli_ids.push_back(ids[pool[i]]);
    trials.push_back(std::move(trial));
  }
  return trials;
}

void write_trial_log(std::ostream& out, const std::vector<SortingTrial>& trials) {
  for (const SortingTrial& t : trials) {
    json j;
    j["trial_id"] = t.trial_id;
    j["category"] = corpus::to_string(t.category);
    j["nonce"] = to_string(t.nonce);
    j["exemplar_id"] = t.exemplar_id;
    j["stimuli_ids"] = t.stimuli_ids;
    j["raw_response"] = t.raw_response;
    j["returned_ids"] = t.returned_ids;
    j["degenerate"] = t.degenerate;
    out << j.dump() << '\n';
  }
}

std::vector<SortingTrial> read_trial_log(std::istream& in) {
  std::vector<SortingTrial> trials;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      const json j = json::parse(line);
      SortingTrial t;
      t.trial_id = j.at("trial_id").get<std::string>();
      const auto category = corpus::parse_category(j.at("category").get<std::string>());
      const auto nonce = parse_nonce(j.at("nonce").get<std::string>());
      if (!category || !nonce) throw ParseError(line_no, "unknown category or nonce name");
      t.category = *category;
      t.nonce = *nonce;
      t.exemplar_id = j.at("exemplar_id").get<std::string>();
      t.stimuli_ids = j.at("stimuli_ids").get<std::vector<std::string>>();
      t.raw_response = j.at("raw_response").get<std::string>();
      t.returned_ids = j.at("returned_ids").get<std::vector<std::string>>();
      t.degenerate = j.at("degenerate").get<bool>();
      trials.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("malformed trial record: ") + e.what());
    }
  }
  return trials;
}

}  // namespace cxprobe::sorting
