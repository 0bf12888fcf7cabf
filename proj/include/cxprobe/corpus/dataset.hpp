#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cxprobe/corpus/category.hpp"
#include "cxprobe/corpus/conllu.hpp"

namespace cxprobe::corpus {

struct DatasetEntry {
  std::string sentence_id;
  std::string text;
  ConstructionCategory category = ConstructionCategory::Intransitive;
  std::string source;

  friend bool operator==(const DatasetEntry&, const DatasetEntry&) = default;
};

struct Dataset {
  std::vector<DatasetEntry> entries;
  std::size_t per_category = 0;

  std::vector<const DatasetEntry*> of_category(ConstructionCategory c) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// A parsed treebank file together with the identifier recorded as the
// entry source.
struct Corpus {
  std::string source;
  std::vector<UDSentence> sentences;
};

Corpus load_corpus(const std::filesystem::path& path);

// Sentence id assigned to a corpus sentence: "<source>#<sent_id>", or
// "<source>#<position>" when the block has no sent_id.
std::string entry_id(const Corpus& corpus, std::size_t position);

// Seeded uniform sample of per_category classified sentences per category,
// deduplicated by lowercased whitespace-collapsed text. Entries are grouped
// by category in canonical order. Throws InsufficientDataError naming the
// first category that falls short.
Dataset build_dataset(const std::vector<Corpus>& corpora,
                      std::size_t per_category, std::uint64_t seed);

// Dataset file: a "# per_category=N" line, then the CSV header
// sentence_id,category,source,text and one row per entry.
void persist_dataset(const Dataset& dataset, const std::filesystem::path& location);
Dataset load_dataset(const std::filesystem::path& location);

void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);

}  // namespace cxprobe::corpus
