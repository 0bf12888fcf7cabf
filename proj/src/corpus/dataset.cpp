#include "cxprobe/corpus/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "cxprobe/common/csv.hpp"
#include "cxprobe/common/error.hpp"
#include "cxprobe/common/rng.hpp"
#include "cxprobe/common/text.hpp"
#include "cxprobe/corpus/clause.hpp"

namespace cxprobe::corpus {

std::vector<const DatasetEntry*> Dataset::of_category(ConstructionCategory c) const {
  std::vector<const DatasetEntry*> out;
  for (const DatasetEntry& e : entries) {
    if (e.category == c) out.push_back(&e);
  }
  return out;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus " + path.string());
  try {
    return Corpus{path.filename().string(), parse_conllu(in)};
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path.string() + ": " + e.what());
  }
}

std::string entry_id(const Corpus& corpus, std::size_t position) {
  const UDSentence& s = corpus.sentences.at(position);
  return corpus.source + "#" + (s.sent_id.empty() ? std::to_string(position + 1) : s.sent_id);
}

Dataset build_dataset(const std::vector<Corpus>& corpora, std::size_t per_category,
                      std::uint64_t seed) {
  if (per_category == 0) throw std::invalid_argument("per_category must be at least 1");

  std::array<std::vector<DatasetEntry>, kAllCategories.size()> candidates;
  std::array<std::unordered_set<std::string>, kAllCategories.size()> seen_text;
  std::set<std::string> used_ids;

  for (const Corpus& corpus : corpora) {
    for (std::size_t i = 0; i < corpus.sentences.size(); ++i) {
      const UDSentence& s = corpus.sentences[i];
      const auto category = classify_clause(s);
      if (!category) continue;
      const std::size_t ci = category_index(*category);
      std::string surface = s.surface_text();
      if (!seen_text[ci].insert(text::dedup_key(surface)).second) continue;

      std::string id = entry_id(corpus, i);
      for (int dup = 2; used_ids.contains(id); ++dup) {
        id = entry_id(corpus, i) + "~" + std::to_string(dup);
      }
      used_ids.insert(id);
      candidates[ci].push_back(DatasetEntry{id, std::move(surface), *category, corpus.source});
    }
  }

  Dataset out;
  out.per_category = per_category;
  for (ConstructionCategory c : kAllCategories) {
    auto& pool = candidates[category_index(c)];
    if (pool.size() < per_category) {
      throw InsufficientDataError(std::string(to_string(c)), per_category - pool.size());
    }
    Rng rng(derive_seed(seed, "dataset.sample", {category_index(c)}));
    std::vector<std::size_t> order(pool.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    // Partial Fisher-Yates: the first per_category slots are a uniform sample.
    for (std::size_t i = 0; i < per_category; ++i) {
      std::size_t j = i + rng.uniform_index(order.size() - i);
      std::swap(order[i], order[j]);
    }
    order.resize(per_category);
    std::sort(order.begin(), order.end());
    for (std::size_t idx : order) out.entries.push_back(pool[idx]);
  }
  return out;
}

namespace {
constexpr std::string_view kCountPrefix = "# per_category=";
const csv::Row kHeader = {"sentence_id", "category", "source", "text"};
}  // namespace

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << kCountPrefix << dataset.per_category << '\n';
  csv::write_row(out, kHeader);
  for (const DatasetEntry& e : dataset.entries) {
    out << csv::escape(e.sentence_id) << ',' << to_string(e.category) << ','
        << csv::escape(e.source) << ',' << csv::quote(e.text) << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string first;
  if (!std::getline(in, first)) throw SchemaError("dataset file is empty");
  if (!first.empty() && first.back() == '\r') first.pop_back();
  long long declared = 0;
  if (!first.starts_with(kCountPrefix) ||
      !text::parse_int(std::string_view(first).substr(kCountPrefix.size()), declared) ||
      declared < 1) {
    throw SchemaError("dataset file must start with '# per_category=N'");
  }

  std::size_t line = 1;
  csv::Row row;
  if (!csv::read_row(in, row, line) || row != kHeader) {
    throw SchemaError("dataset header must be sentence_id,category,source,text");
  }

  Dataset d;
  d.per_category = static_cast<std::size_t>(declared);
  std::set<std::string> ids;
  std::array<std::set<std::string>, kAllCategories.size()> texts;
  std::array<std::size_t, kAllCategories.size()> counts{};
  while (csv::read_row(in, row, line)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != 4) {
      throw SchemaError("line " + std::to_string(line) + ": expected 4 fields, found " +
                        std::to_string(row.size()));
    }
    const auto category = parse_category(row[1]);
    if (!category) throw SchemaError("line " + std::to_string(line) + ": unknown category '" + row[1] + "'");
    if (row[0].empty() || !ids.insert(row[0]).second) {
      throw SchemaError("line " + std::to_string(line) + ": missing or duplicate sentence_id");
    }
    if (row[3].empty()) throw SchemaError("line " + std::to_string(line) + ": empty text");
    const std::size_t ci = category_index(*category);
    if (!texts[ci].insert(text::dedup_key(row[3])).second) {
      throw SchemaError("line " + std::to_string(line) + ": duplicate text within " + row[1]);
    }
    ++counts[ci];
    d.entries.push_back(DatasetEntry{row[0], row[3], *category, row[2]});
  }
  for (ConstructionCategory c : kAllCategories) {
    const std::size_t n = counts[category_index(c)];
    if (n != d.per_category) {
      throw SchemaError("category " + std::string(to_string(c)) + " has " + std::to_string(n) +
                        " rows, header declares " + std::to_string(d.per_category));
    }
  }
  return d;
}

void persist_dataset(const Dataset& dataset, const std::filesystem::path& location) {
  std::ofstream out(location, std::ios::binary);
  if (!out) throw Error("cannot write dataset " + location.string());
  write_dataset(out, dataset);
  if (!out) throw Error("write failed for " + location.string());
}

Dataset load_dataset(const std::filesystem::path& location) {
  std::ifstream in(location, std::ios::binary);
  if (!in) throw Error("dataset file not found: " + location.string());
  return read_dataset(in);
}

}  // namespace cxprobe::corpus
