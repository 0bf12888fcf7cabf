#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cxprobe::sorting {

inline constexpr double kFuzzyMatchThreshold = 0.9;

// Lowercased, with list numbering/bullets, surrounding quotes and edge
// punctuation removed and whitespace collapsed.
std::string normalize_line(std::string_view line);

struct ParsedResponse {
  std::vector<std::size_t> returned;  // positions in the stimuli list, ascending
  bool degenerate = true;
};

// Matches each non-empty response line to at most one stimulus: exact match
// after normalization, else the most similar unmatched stimulus when the
// normalized similarity is at least kFuzzyMatchThreshold. Degenerate unless
// exactly three stimuli matched.
ParsedResponse parse_response(std::string_view raw, std::span<const std::string> stimuli);

}  // namespace cxprobe::sorting
