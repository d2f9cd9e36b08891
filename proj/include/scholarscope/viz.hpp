#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scholarscope/analysis_result.hpp"

// Chart specifications, SVG rendering and CSV export of analysis results.
namespace scholarscope::viz {

enum class ChartType {
  kBar,
  kLine,
  kPie,
  kDoughnut,
  kBox,
  kViolin,
  kSwarm,
  kScatter,
  kStack,
  kWordcloud,
  kNetwork,
  kWorldmap,
};
inline constexpr ChartType kAllChartTypes[] = {
    ChartType::kBar,     ChartType::kLine,    ChartType::kPie,   ChartType::kDoughnut,
    ChartType::kBox,     ChartType::kViolin,  ChartType::kSwarm, ChartType::kScatter,
    ChartType::kStack,   ChartType::kWordcloud, ChartType::kNetwork, ChartType::kWorldmap,
};
std::string_view to_string(ChartType t);
std::optional<ChartType> parse_chart_type(std::string_view s);

enum class Orientation { kVertical, kHorizontal };
enum class Scale { kLinear, kLog };
enum class Period { kYearwise, kDecadewise };
enum class Background { kWhite, kTransparent };
std::optional<Background> parse_background(std::string_view s);

struct ChartOptions {
  ChartType chart_type = ChartType::kBar;
  std::optional<int> start_year;
  std::optional<int> end_year;
  int year_gap = 1;  // 1..5
  Orientation orientation = Orientation::kVertical;
  Scale x_scale = Scale::kLinear;
  Scale y_scale = Scale::kLinear;
  std::optional<int> top_count;  // unset = all rows
  Period period = Period::kYearwise;
  struct Labels {
    std::string x_label;
    std::string y_label;
    int fontsize = 14;
    bool operator==(const Labels&) const = default;
  } labels;
  struct Title {
    std::string text;
    int fontsize = 20;
    bool visible = true;
    bool operator==(const Title&) const = default;
  } title;
  struct Ticks {
    int fontsize = 12;
    int rotation_degrees = 0;
    bool operator==(const Ticks&) const = default;
  } ticks;
  struct Colors {
    std::string bar = "#4e79a7";
    std::string border = "#2f4b7c";
    std::string line = "#e15759";
    std::string marker = "#f28e2b";
    bool operator==(const Colors&) const = default;
  } colors;
  bool grid_visible = true;
  bool legend_visible = true;
  int width = 1200;
  int height = 800;

  // Throws Error(kInvalidOptions) naming the offending field.
  void validate() const;
  bool operator==(const ChartOptions&) const = default;
};

// Missing keys keep their defaults; unknown keys are rejected.
void to_json(nlohmann::json& j, const ChartOptions& o);
void from_json(const nlohmann::json& j, ChartOptions& o);

struct ChartSpec {
  ChartOptions options;
  AnalysisResult data;
  std::vector<std::string> warnings;

  bool operator==(const ChartSpec&) const = default;
};
void to_json(nlohmann::json& j, const ChartSpec& s);
void from_json(const nlohmann::json& j, ChartSpec& s);

// Which chart types each result kind admits. CSV rows: result_kind,chart_type.
class CompatibilityTable {
 public:
  static CompatibilityTable from_csv(std::string_view text);
  static const CompatibilityTable& bundled();
  bool allows(std::string_view kind, ChartType type) const;
  std::vector<ChartType> charts_for(std::string_view kind) const;
  std::vector<std::string> kinds() const;

 private:
  std::map<std::string, std::set<ChartType>, std::less<>> table_;
};

// Applies the year window, re-binning, top_count and log-scale filtering to a
// copy of `result`. Throws kIncompatibleChartType, kInvalidOptions.
ChartSpec build_chart_spec(const AnalysisResult& result, const ChartOptions& options,
                           const CompatibilityTable& table = CompatibilityTable::bundled());

// Deterministic SVG 1.1 document.
std::string render_svg(const ChartSpec& spec, Background background = Background::kWhite);

// Header = label column then columns. Distribution rows write one cell
// holding the observations joined by ';' under a "<column>[]" header.
std::string export_csv(const AnalysisResult& result);
// Inverse of export_csv for the table part (kind and meta are not stored).
AnalysisResult parse_exported_csv(std::string_view csv_text);

}  // namespace scholarscope::viz
