#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cxprobe::corpus {

// One basic-dependency word line of a CoNLL-U block.
struct UDToken {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;  // 0 = root
  std::string deprel;
  std::string deps = "_";
  std::string misc = "_";

  friend bool operator==(const UDToken&, const UDToken&) = default;
};

struct UDSentence {
  std::string sent_id;
  std::string text;
  std::vector<UDToken> tokens;

  // Index into tokens of the head=0 token.
  std::size_t root_position() const;

  // Tokens whose head is the given 1-based index.
  std::vector<const UDToken*> dependents_of(int index) const;

  // The # text value, or the forms joined by spaces when absent.
  std::string surface_text() const;

  friend bool operator==(const UDSentence&, const UDSentence&) = default;
};

// Parses CoNLL-U. Multiword-token ranges ("3-4") and empty nodes ("5.1") are
// skipped. Throws ParseError carrying the 1-based line number.
std::vector<UDSentence> parse_conllu(std::istream& in);
std::vector<UDSentence> parse_conllu(std::string_view content);

void write_conllu(std::ostream& out, const std::vector<UDSentence>& sentences);
std::string to_conllu(const std::vector<UDSentence>& sentences);

}  // namespace cxprobe::corpus
