#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace cxprobe::experiment {

enum class ValueKind { Percent, FScore };
enum class ReportFormat { Csv, Pretty };

struct TableRow {
  std::string label;
  std::vector<std::optional<double>> cells;  // nullopt renders as NA
};

struct Table {
  std::string title;
  std::string corner;  // header of the label column
  std::vector<std::string> columns;
  std::vector<TableRow> rows;
  ValueKind kind = ValueKind::FScore;
  int pretty_decimals = 2;
};

// Round half away from zero at the given number of decimals.
std::string format_fixed(double value, int decimals);

void write_csv(std::ostream& out, const Table& table);
void write_pretty(std::ostream& out, const Table& table);

// Writes the table in the given format. Throws Error on write failure.
void emit_report(const Table& table, ReportFormat format, const std::filesystem::path& destination);

nlohmann::json table_to_json(const Table& table);
Table table_from_json(const nlohmann::json& j);

}  // namespace cxprobe::experiment
