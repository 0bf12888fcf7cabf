#pragma once

#include <optional>

#include "cxprobe/corpus/category.hpp"
#include "cxprobe/corpus/conllu.hpp"

namespace cxprobe::corpus {

// Classifies the main clause by the relations attached to a verbal root.
// Rules are tried most-specific first:
//   DoubleObject  nsubj + iobj + obj
//   Passive       nsubj:pass + aux:pass
//   TransitiveC   nsubj + ccomp
//   TransitiveNP  nsubj + obj, no iobj, no ccomp
//   Intransitive  nsubj, no obj/iobj/ccomp/xcomp, no :pass relation
// Returns nullopt when the root is not a VERB or nothing matches.
std::optional<ConstructionCategory> classify_clause(const UDSentence& sentence);

}  // namespace cxprobe::corpus
