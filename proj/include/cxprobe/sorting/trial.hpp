#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cxprobe/corpus/dataset.hpp"
#include "cxprobe/sorting/prompt.hpp"

namespace cxprobe::sorting {

inline constexpr std::size_t kStimuliPerTrial = 6;
inline constexpr std::size_t kExpectedReturns = 3;

struct SortingTrial {
  std::string trial_id;
  corpus::ConstructionCategory category = corpus::ConstructionCategory::Intransitive;
  NonceName nonce = NonceName::PristineExemplar;
  std::string exemplar_id;
  std::vector<std::string> stimuli_ids;   // 6, distinct, exemplar excluded
  std::vector<std::string> returned_ids;  // subset of stimuli_ids, in stimulus order
  std::string raw_response;
  bool degenerate = false;  // unparseable, or returned count != 3

  friend bool operator==(const SortingTrial&, const SortingTrial&) = default;
};

// n trials drawn from one category: 1 exemplar + 6 other stimuli each.
// Exemplars are all distinct while n <= category size. Throws
// CategoryTooSmallError below 7 sentences.
std::vector<SortingTrial> sample_trials(const corpus::Dataset& dataset,
                                        corpus::ConstructionCategory category, NonceName nonce,
                                        std::size_t n, std::uint64_t seed);

// Trial log: one JSON object per line with keys trial_id, category, nonce,
// exemplar_id, stimuli_ids, raw_response, returned_ids, degenerate.
void write_trial_log(std::ostream& out, const std::vector<SortingTrial>& trials);
std::vector<SortingTrial> read_trial_log(std::istream& in);

}  // namespace cxprobe::sorting
