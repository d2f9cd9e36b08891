#include "scholarscope/analysis_result.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scholarscope/error.hpp"

namespace scholarscope {

void check_result(const AnalysisResult& result) {
  for (const auto& row : result.rows) {
    if (result.shape == ResultShape::kTable && row.values.size() != result.columns.size())
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("row '{}' has {} values for {} columns", row.label, row.values.size(),
                              result.columns.size()));
    for (double v : row.values)
      if (!std::isfinite(v))
        throw Error(ErrorCode::kInvalidArgument, fmt::format("row '{}' has a non-finite value", row.label));
  }
}

void to_json(nlohmann::json& j, const AnalysisResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) rows.push_back({{"label", row.label}, {"values", row.values}});
  j = {{"kind", r.kind},
       {"shape", r.shape == ResultShape::kTable ? "table" : "distribution"},
       {"label_column", r.label_column},
       {"columns", r.columns},
       {"rows", rows},
       {"meta", r.meta}};
}

void from_json(const nlohmann::json& j, AnalysisResult& r) {
  try {
    r = AnalysisResult{};
    r.kind = j.at("kind").get<std::string>();
    r.shape = j.value("shape", std::string("table")) == "distribution" ? ResultShape::kDistribution
                                                                       : ResultShape::kTable;
    r.label_column = j.value("label_column", std::string("label"));
    r.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows"))
      r.rows.push_back({row.at("label").get<std::string>(), row.at("values").get<std::vector<double>>()});
    if (j.contains("meta")) r.meta = j.at("meta").get<std::map<std::string, std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("malformed analysis result: {}", e.what()));
  }
  check_result(r);
}

void sort_by_count_desc(std::vector<ResultRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const ResultRow& a, const ResultRow& b) {
    double va = a.values.empty() ? 0.0 : a.values.front();
    double vb = b.values.empty() ? 0.0 : b.values.front();
    if (va != vb) return va > vb;
    return a.label < b.label;
  });
}

}  // namespace scholarscope
