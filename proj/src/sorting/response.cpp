#include "cxprobe/sorting/response.hpp"

#include <array>
#include <cctype>
#include <optional>

#include "cxprobe/common/text.hpp"

namespace cxprobe::sorting {

namespace {

constexpr std::array<std::string_view, 4> kCurlyQuotes = {"“", "”", "‘", "’"};
constexpr std::string_view kBullet = "•";

bool strip_prefix(std::string& s, std::string_view p) {
  if (!s.starts_with(p)) return false;
  s.erase(0, p.size());
  return true;
}

bool strip_suffix(std::string& s, std::string_view p) {
  if (!s.ends_with(p)) return false;
  s.erase(s.size() - p.size());
  return true;
}

// "1.", "2)", "3:", "-", "*", bullet.
bool strip_list_marker(std::string& s) {
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i > 0 && i < s.size() && (s[i] == '.' || s[i] == ')' || s[i] == ':') &&
      (i + 1 == s.size() || s[i + 1] == ' ' || s[i + 1] == '\t')) {
    s.erase(0, i + 1);
    return true;
  }
  if (!s.empty() && (s[0] == '-' || s[0] == '*') && s.size() > 1 && s[1] == ' ') {
    s.erase(0, 1);
    return true;
  }
  return strip_prefix(s, kBullet);
}

bool strip_quotes(std::string& s) {
  bool changed = false;
  for (std::string_view q : kCurlyQuotes) {
    changed |= strip_prefix(s, q);
    changed |= strip_suffix(s, q);
  }
  return changed;
}

bool is_edge_punct(unsigned char c) { return std::ispunct(c) != 0; }

}  // namespace

std::string normalize_line(std::string_view line) {
  std::string s = text::trim(line);
  for (bool changed = true; changed;) {
    changed = strip_list_marker(s);
    s = text::trim(s);
    changed |= strip_quotes(s);
    while (!s.empty() && is_edge_punct(static_cast<unsigned char>(s.front()))) {
      s.erase(0, 1);
      changed = true;
    }
    while (!s.empty() && is_edge_punct(static_cast<unsigned char>(s.back()))) {
      s.pop_back();
      changed = true;
    }
    s = text::trim(s);
  }
  return text::to_lower_ascii(text::collapse_whitespace(s));
}

ParsedResponse parse_response(std::string_view raw, std::span<const std::string> stimuli) {
  std::vector<std::string> targets;
  targets.reserve(stimuli.size());
  for (const std::string& s : stimuli) targets.push_back(normalize_line(s));

  std::vector<bool> matched(stimuli.size(), false);
  for (const std::string& line : text::split(raw, '\n')) {
    const std::string norm = normalize_line(line);
    if (norm.empty()) continue;

    std::optional<std::size_t> hit;
    bool already = false;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i] != norm) continue;
      if (matched[i]) {
        already = true;
        continue;
      }
      hit = i;
      break;
    }
    if (!hit && !already) {
      double best = kFuzzyMatchThreshold;
      for (std::size_t i = 0; i < targets.size(); ++i) {
        if (matched[i]) continue;
        const double sim = text::normalized_similarity(norm, targets[i]);
        if (sim >= best) {
          // Strictly better wins; the first of equals is kept.
          if (!hit || sim > best) hit = i;
          best = sim;
        }
      }
    }
    if (hit) matched[*hit] = true;
  }

  ParsedResponse out;
  for (std::size_t i = 0; i < matched.size(); ++i) {
    if (matched[i]) out.returned.push_back(i);
  }
  out.degenerate = out.returned.size() != 3;
  return out;
}

}  // namespace cxprobe::sorting
