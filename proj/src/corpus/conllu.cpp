#include "cxprobe/corpus/conllu.hpp"

#include <sstream>

#include "cxprobe/common/error.hpp"
#include "cxprobe/common/text.hpp"

namespace cxprobe::corpus {

std::size_t UDSentence::root_position() const {
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].head == 0) return i;
  }
  throw DegenerateInputError("sentence " + sent_id + " has no root");
}

std::vector<const UDToken*> UDSentence::dependents_of(int index) const {
  std::vector<const UDToken*> out;
  for (const UDToken& t : tokens) {
    if (t.head == index) out.push_back(&t);
  }
  return out;
}

std::string UDSentence::surface_text() const {
  if (!text.empty()) return text;
  std::vector<std::string> forms;
  forms.reserve(tokens.size());
  for (const UDToken& t : tokens) forms.push_back(t.form);
  return text::join(forms, " ");
}

namespace {

// Reads "# key = value" comments; other comments are ignored.
void read_comment(const std::string& line, UDSentence& sentence) {
  std::string body = text::trim(std::string_view(line).substr(1));
  const auto eq = body.find('=');
  if (eq == std::string::npos) return;
  const std::string key = text::trim(std::string_view(body).substr(0, eq));
  const std::string value = text::trim(std::string_view(body).substr(eq + 1));
  if (key == "sent_id") sentence.sent_id = value;
  else if (key == "text") sentence.text = value;
}

void check_block(const UDSentence& s, std::size_t first_line) {
  int roots = 0;
  const int n = static_cast<int>(s.tokens.size());
  for (int i = 0; i < n; ++i) {
    const UDToken& t = s.tokens[i];
    if (t.index != i + 1) {
      throw ParseError(first_line, "token indices are not contiguous from 1 (found " +
                                       std::to_string(t.index) + " at position " +
                                       std::to_string(i + 1) + ")");
    }
    if (t.head > n) {
      throw ParseError(first_line, "head " + std::to_string(t.head) +
                                       " outside sentence of length " + std::to_string(n));
    }
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    throw ParseError(first_line, "expected exactly one root, found " + std::to_string(roots));
  }
}

}  // namespace

std::vector<UDSentence> parse_conllu(std::istream& in) {
  std::vector<UDSentence> sentences;
  UDSentence current;
  std::size_t block_start = 0;
  std::size_t line_no = 0;
  std::string line;

  auto flush = [&] {
    if (!current.tokens.empty()) {
      check_block(current, block_start);
      sentences.push_back(std::move(current));
    }
    current = UDSentence{};
    block_start = 0;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) {
      flush();
      continue;
    }
    if (block_start == 0) block_start = line_no;
    if (line[0] == '#') {
      read_comment(line, current);
      continue;
    }

    std::vector<std::string> cols = text::split(line, '\t');
    if (cols.size() != 10) {
      throw ParseError(line_no, "expected 10 tab-separated columns, found " +
                                    std::to_string(cols.size()));
    }
    // Multiword-token ranges and empty nodes are not part of the basic tree.
    if (cols[0].find('-') != std::string::npos || cols[0].find('.') != std::string::npos) {
      continue;
    }

    long long index = 0, head = 0;
    if (!text::parse_int(cols[0], index) || index < 1) {
      throw ParseError(line_no, "invalid token index '" + cols[0] + "'");
    }
    if (!text::parse_int(cols[6], head) || head < 0) {
      throw ParseError(line_no, "non-numeric head '" + cols[6] + "'");
    }
    if (head == index) throw ParseError(line_no, "token is its own head");
    if (cols[7].empty() || cols[7] == "_") throw ParseError(line_no, "missing deprel");

    UDToken tok;
    tok.index = static_cast<int>(index);
    tok.form = std::move(cols[1]);
    tok.lemma = std::move(cols[2]);
    tok.upos = std::move(cols[3]);
    tok.xpos = std::move(cols[4]);
    tok.feats = std::move(cols[5]);
    tok.head = static_cast<int>(head);
    tok.deprel = std::move(cols[7]);
    tok.deps = std::move(cols[8]);
    tok.misc = std::move(cols[9]);
    current.tokens.push_back(std::move(tok));
  }
  flush();
  return sentences;
}

std::vector<UDSentence> parse_conllu(std::string_view content) {
  std::istringstream in{std::string(content)};
  return parse_conllu(in);
}

void write_conllu(std::ostream& out, const std::vector<UDSentence>& sentences) {
  for (const UDSentence& s : sentences) {
    if (!s.sent_id.empty()) out << "# sent_id = " << s.sent_id << '\n';
    if (!s.text.empty()) out << "# text = " << s.text << '\n';
    for (const UDToken& t : s.tokens) {
      out << t.index << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t'
          << t.xpos << '\t' << t.feats << '\t' << t.head << '\t' << t.deprel << '\t'
          << t.deps << '\t' << t.misc << '\n';
    }
    out << '\n';
  }
}

std::string to_conllu(const std::vector<UDSentence>& sentences) {
  std::ostringstream out;
  write_conllu(out, sentences);
  return out.str();
}

}  // namespace cxprobe::corpus
