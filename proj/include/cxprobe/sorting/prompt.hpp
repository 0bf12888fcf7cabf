#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace cxprobe::sorting {

// Invented construction names with no referent in the literature.
enum class NonceName {
  PristineExemplar,
  RevertedFocus,
  AlternateApplication,
  NormalizedAttribution,
  EntrenchedObjective,
};

inline constexpr std::array<NonceName, 5> kAllNonces = {
    NonceName::PristineExemplar, NonceName::RevertedFocus, NonceName::AlternateApplication,
    NonceName::NormalizedAttribution, NonceName::EntrenchedObjective};

// "Pristine Exemplar", ...
std::string_view to_string(NonceName n);
std::optional<NonceName> parse_nonce(std::string_view s);

// Marker line that ends the instruction and precedes the stimuli.
inline constexpr std::string_view kOutputInstruction =
    "Output only the three sentences in three separate lines:";

// Instruction, then the stimuli one per line in the given order. A preamble,
// when given, comes first on its own line.
std::string build_prompt(NonceName nonce, std::string_view exemplar,
                         std::span<const std::string> stimuli,
                         const std::optional<std::string>& preamble = std::nullopt);

}  // namespace cxprobe::sorting
