#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cxprobe::corpus {

enum class ConstructionCategory {
  Intransitive,
  TransitiveNP,
  TransitiveC,
  Passive,
  DoubleObject,
};

inline constexpr std::array<ConstructionCategory, 5> kAllCategories = {
    ConstructionCategory::Intransitive, ConstructionCategory::TransitiveNP,
    ConstructionCategory::TransitiveC, ConstructionCategory::Passive,
    ConstructionCategory::DoubleObject};

// Identifier used in files: "Intransitive", "TransitiveNP", ...
std::string_view to_string(ConstructionCategory c);
// Table label: "Intransitive", "Transitive (NP)", ...
std::string_view display_name(ConstructionCategory c);
std::optional<ConstructionCategory> parse_category(std::string_view s);

inline std::size_t category_index(ConstructionCategory c) {
  return static_cast<std::size_t>(c);
}

}  // namespace cxprobe::corpus
