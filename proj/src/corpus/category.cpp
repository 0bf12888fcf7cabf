#include "cxprobe/corpus/category.hpp"

namespace cxprobe::corpus {

std::string_view to_string(ConstructionCategory c) {
  switch (c) {
    case ConstructionCategory::Intransitive: return "Intransitive";
    case ConstructionCategory::TransitiveNP: return "TransitiveNP";
    case ConstructionCategory::TransitiveC: return "TransitiveC";
    case ConstructionCategory::Passive: return "Passive";
    case ConstructionCategory::DoubleObject: return "DoubleObject";
  }
  return "?";
}

std::string_view display_name(ConstructionCategory c) {
  switch (c) {
    case ConstructionCategory::Intransitive: return "Intransitive";
    case ConstructionCategory::TransitiveNP: return "Transitive (NP)";
    case ConstructionCategory::TransitiveC: return "Transitive (C)";
    case ConstructionCategory::Passive: return "Passive";
    case ConstructionCategory::DoubleObject: return "Double Object";
  }
  return "?";
}

std::optional<ConstructionCategory> parse_category(std::string_view s) {
  for (ConstructionCategory c : kAllCategories) {
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

}  // namespace cxprobe::corpus
