#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace cxprobe::text {

std::vector<std::string> split_whitespace(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::string trim(std::string_view s);
std::string to_lower_ascii(std::string_view s);
std::string collapse_whitespace(std::string_view s);

// Lowercased, whitespace-collapsed form used as a deduplication key.
std::string dedup_key(std::string_view s);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

std::size_t levenshtein(std::string_view a, std::string_view b);

// 1 - distance / max(len); 1.0 for two empty strings.
double normalized_similarity(std::string_view a, std::string_view b);

// Strict integer parse of the whole string.
bool parse_int(std::string_view s, long long& out);

}  // namespace cxprobe::text
