#include "cxprobe/sorting/prompt.hpp"

#include <set>
#include <stdexcept>

namespace cxprobe::sorting {

std::string_view to_string(NonceName n) {
  switch (n) {
    case NonceName::PristineExemplar: return "Pristine Exemplar";
    case NonceName::RevertedFocus: return "Reverted Focus";
    case NonceName::AlternateApplication: return "Alternate Application";
    case NonceName::NormalizedAttribution: return "Normalized Attribution";
    case NonceName::EntrenchedObjective: return "Entrenched Objective";
  }
  return "?";
}

std::optional<NonceName> parse_nonce(std::string_view s) {
  for (NonceName n : kAllNonces) {
    if (s == to_string(n)) return n;
  }
  return std::nullopt;
}

std::string build_prompt(NonceName nonce, std::string_view exemplar,
                         std::span<const std::string> stimuli,
                         const std::optional<std::string>& preamble) {
  std::set<std::string_view> distinct;
  for (const std::string& s : stimuli) {
    if (s.empty()) throw std::invalid_argument("build_prompt: empty stimulus");
    if (!distinct.insert(s).second) throw std::invalid_argument("build_prompt: repeated stimulus");
  }

  std::string prompt;
  if (preamble && !preamble->empty()) {
    prompt += *preamble;
    prompt += '\n';
  }
  prompt += "From amongst the following sentences, extract the three sentences which are "
            "instances of the ";
  prompt += to_string(nonce);
  prompt += " construction, as exemplified by the following sentence: \"";
  prompt += exemplar;
  prompt += "\" ";
  prompt += kOutputInstruction;
  for (const std::string& s : stimuli) {
    prompt += '\n';
    prompt += s;
  }
  return prompt;
}

}  // namespace cxprobe::sorting
