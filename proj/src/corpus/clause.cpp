#include "cxprobe/corpus/clause.hpp"

#include <set>
#include <string>

namespace cxprobe::corpus {

namespace {

// Relation label without its subtype ("obl:tmod" -> "obl").
std::string_view base_relation(std::string_view deprel) {
  return deprel.substr(0, deprel.find(':'));
}

struct RootFrame {
  std::set<std::string, std::less<>> relations;  // full labels
  std::set<std::string, std::less<>> bases;
  bool any_passive = false;

  bool has(std::string_view full) const { return relations.contains(full); }
  bool has_base(std::string_view base) const { return bases.contains(base); }
};

}  // namespace

std::optional<ConstructionCategory> classify_clause(const UDSentence& sentence) {
  if (sentence.tokens.empty()) return std::nullopt;
  const UDToken& root = sentence.tokens[sentence.root_position()];
  if (root.upos != "VERB") return std::nullopt;

  RootFrame frame;
  for (const UDToken* dep : sentence.dependents_of(root.index)) {
    frame.relations.insert(dep->deprel);
    frame.bases.insert(std::string(base_relation(dep->deprel)));
    if (dep->deprel.ends_with(":pass")) frame.any_passive = true;
  }

  // nsubj:pass shares the nsubj base, so the active subject is matched on the
  // full label.
  const bool nsubj = frame.has("nsubj");
  const bool obj = frame.has_base("obj");
  const bool iobj = frame.has_base("iobj");
  const bool ccomp = frame.has_base("ccomp");
  const bool xcomp = frame.has_base("xcomp");

  if (nsubj && iobj && obj) return ConstructionCategory::DoubleObject;
  if (frame.has("nsubj:pass") && frame.has("aux:pass")) return ConstructionCategory::Passive;
  if (nsubj && ccomp) return ConstructionCategory::TransitiveC;
  if (nsubj && obj && !iobj && !ccomp) return ConstructionCategory::TransitiveNP;
  if (nsubj && !obj && !iobj && !ccomp && !xcomp && !frame.any_passive) {
    return ConstructionCategory::Intransitive;
  }
  return std::nullopt;
}

}  // namespace cxprobe::corpus
