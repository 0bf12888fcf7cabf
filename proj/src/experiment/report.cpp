#include "cxprobe/experiment/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cxprobe/common/csv.hpp"
#include "cxprobe/common/error.hpp"

namespace cxprobe::experiment {

std::string format_fixed(double value, int decimals) {
  if (!std::isfinite(value)) return "NA";
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::fabs(value) * scale;
  double whole = std::floor(scaled);
  // Values like 2.675 are stored a hair below the tie; treat them as ties.
  const double frac = scaled - whole;
  if (frac >= 0.5 - 1e-9 * std::max(1.0, scaled)) whole += 1.0;
  double rounded = whole / scale;
  if (value < 0 && whole != 0.0) rounded = -rounded;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

namespace {

std::string csv_cell(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "NA";
  return format_fixed(*v, 2);
}

std::string pretty_cell(const Table& t, const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "NA";
  std::string s = format_fixed(*v, t.pretty_decimals);
  if (t.kind == ValueKind::Percent) s += "%";
  return s;
}

}  // namespace

void write_csv(std::ostream& out, const Table& table) {
  csv::Row header{table.corner};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  csv::write_row(out, header);
  for (const TableRow& row : table.rows) {
    if (row.cells.size() != table.columns.size()) {
      throw Error("row '" + row.label + "' has " + std::to_string(row.cells.size()) +
                  " cells, table has " + std::to_string(table.columns.size()) + " columns");
    }
    csv::Row r{row.label};
    for (const auto& c : row.cells) r.push_back(csv_cell(c));
    csv::write_row(out, r);
  }
}

void write_pretty(std::ostream& out, const Table& table) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> header{table.corner};
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  grid.push_back(header);
  for (const TableRow& row : table.rows) {
    std::vector<std::string> r{row.label};
    for (const auto& c : row.cells) r.push_back(pretty_cell(table, c));
    r.resize(header.size());
    grid.push_back(std::move(r));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& r : grid) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  auto rule = [&] {
    out << '+';
    for (std::size_t w : width) out << std::string(w + 2, '-') << '+';
    out << '\n';
  };
  auto line = [&](const std::vector<std::string>& r) {
    out << '|';
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string pad(width[i] - r[i].size(), ' ');
      // labels left-aligned, numbers right-aligned
      if (i == 0) out << ' ' << r[i] << pad << " |";
      else out << ' ' << pad << r[i] << " |";
    }
    out << '\n';
  };
  if (!table.title.empty()) out << table.title << '\n';
  rule();
  line(grid.front());
  rule();
  for (std::size_t i = 1; i < grid.size(); ++i) line(grid[i]);
  rule();
}

void emit_report(const Table& table, ReportFormat format, const std::filesystem::path& destination) {
  std::ostringstream buf;
  if (format == ReportFormat::Csv) write_csv(buf, table);
  else write_pretty(buf, table);
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write report " + destination.string());
  out << buf.str();
  out.flush();
  if (!out) throw Error("write failed for report " + destination.string());
}

nlohmann::json table_to_json(const Table& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const TableRow& row : table.rows) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : row.cells) {
      if (c && std::isfinite(*c)) cells.push_back(*c);
      else cells.push_back(nullptr);
    }
    rows.push_back({{"label", row.label}, {"cells", cells}});
  }
  return {{"title", table.title},
          {"corner", table.corner},
          {"columns", table.columns},
          {"rows", rows},
          {"kind", table.kind == ValueKind::Percent ? "percent" : "f-score"},
          {"pretty_decimals", table.pretty_decimals}};
}

Table table_from_json(const nlohmann::json& j) {
  try {
    Table t;
    t.title = j.at("title").get<std::string>();
    t.corner = j.at("corner").get<std::string>();
    t.columns = j.at("columns").get<std::vector<std::string>>();
    t.kind = j.at("kind").get<std::string>() == "percent" ? ValueKind::Percent : ValueKind::FScore;
    t.pretty_decimals = j.at("pretty_decimals").get<int>();
    for (const auto& r : j.at("rows")) {
      TableRow row;
      row.label = r.at("label").get<std::string>();
      for (const auto& c : r.at("cells")) {
        if (c.is_null()) row.cells.push_back(std::nullopt);
        else row.cells.push_back(c.get<double>());
      }
      t.rows.push_back(std::move(row));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed table in results: ") + e.what());
  }
}

}  // namespace cxprobe::experiment
