#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "cxprobe/corpus/dataset.hpp"
#include "cxprobe/embedding/provider.hpp"
#include "cxprobe/experiment/config.hpp"
#include "cxprobe/experiment/report.hpp"
#include "cxprobe/sorting/trial.hpp"

namespace cxprobe::experiment {

// File names inside the output directory.
namespace files {
inline constexpr const char* kDataset = "dataset.csv";
inline constexpr const char* kTrialLog = "trials.jsonl";
inline constexpr const char* kExp1Results = "exp1_results.json";
inline constexpr const char* kExp2Results = "exp2_results.json";
inline constexpr const char* kEmbeddingCache = "embeddings.jsonl";
inline constexpr const char* kTable1 = "table1_consistency";
inline constexpr const char* kTable2 = "table2_cluster_accuracy";
inline constexpr const char* kTable3 = "table3_validation";
inline constexpr const char* kTable4 = "table4_false_positive";
}  // namespace files

struct ExtractOutputs {
  corpus::Dataset dataset;
  std::filesystem::path path;
};

// Corpora -> balanced dataset file.
ExtractOutputs run_extract(const RunConfig& config);

struct Exp1Outputs {
  Table consistency;  // nonce names x categories
  Table clusters;     // categories x 1
  std::vector<sorting::SortingTrial> trials;
  nlohmann::json results;
};

Exp1Outputs run_experiment1(const RunConfig& config);
Exp1Outputs run_experiment1(const RunConfig& config, sorting::ChatAdapter& adapter);

struct Exp2Outputs {
  Table validation;      // conditions x categories
  Table false_positive;  // categories x conditions
  nlohmann::json results;
};

Exp2Outputs run_experiment2(const RunConfig& config);
Exp2Outputs run_experiment2(const RunConfig& config, embedding::EmbeddingAcquirer& acquirer);

// Fetches every text either condition needs into the embedding cache.
std::size_t run_embed(const RunConfig& config);

// Re-renders the CSV and pretty tables from the full-precision results JSON
// files found in the output directory. Returns the tables written.
std::vector<std::filesystem::path> run_report(const std::filesystem::path& output_dir);

std::unique_ptr<sorting::ChatAdapter> make_chat_adapter(const RunConfig& config);

}  // namespace cxprobe::experiment
