#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace scholarscope {

// kTable rows carry exactly one value per column. kDistribution rows carry a
// raw list of observations (for box/violin/swarm plots) under a single
// "values" column.
enum class ResultShape { kTable, kDistribution };

struct ResultRow {
  std::string label;
  std::vector<double> values;

  bool operator==(const ResultRow&) const = default;
};

// Uniform tabular output of every analysis. Consumed by charting, CSV export,
// the summarizer and the HTTP layer.
struct AnalysisResult {
  std::string kind;
  std::string label_column = "label";
  std::vector<std::string> columns;
  std::vector<ResultRow> rows;
  // Conventional keys: "analysis", "mode", "axis" ("year" when labels are
  // years), "aggregation" ("sum", "last" or "none": how rows may be re-binned).
  std::map<std::string, std::string> meta;
  ResultShape shape = ResultShape::kTable;

  bool empty() const { return rows.empty(); }
  bool operator==(const AnalysisResult&) const = default;
};

// Throws Error(kInvalidArgument) when a table row has the wrong width or a
// value is not finite.
void check_result(const AnalysisResult& result);

void to_json(nlohmann::json& j, const AnalysisResult& r);
void from_json(const nlohmann::json& j, AnalysisResult& r);

// Sorts rows by first value descending, then label ascending.
void sort_by_count_desc(std::vector<ResultRow>& rows);

}  // namespace scholarscope
