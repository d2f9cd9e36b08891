#include <algorithm>
#include <cstdlib>
#include <regex>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/resources.hpp"
#include "scholarscope/text.hpp"
#include "scholarscope/viz.hpp"

namespace scholarscope::viz {

namespace {

constexpr std::pair<ChartType, std::string_view> kChartNames[] = {
    {ChartType::kBar, "bar"},         {ChartType::kLine, "line"},       {ChartType::kPie, "pie"},
    {ChartType::kDoughnut, "doughnut"}, {ChartType::kBox, "box"},       {ChartType::kViolin, "violin"},
    {ChartType::kSwarm, "swarm"},     {ChartType::kScatter, "scatter"}, {ChartType::kStack, "stack"},
    {ChartType::kWordcloud, "wordcloud"}, {ChartType::kNetwork, "network"}, {ChartType::kWorldmap, "worldmap"},
};

[[noreturn]] void invalid(std::string_view field, std::string_view why) {
  throw Error(ErrorCode::kInvalidOptions, fmt::format("{}: {}", field, why));
}

bool is_hex_color(const std::string& s) {
  static const std::regex re("^#([0-9a-fA-F]{3}|[0-9a-fA-F]{6})$");
  return std::regex_match(s, re);
}

}  // namespace

std::string_view to_string(ChartType t) {
  for (const auto& [type, name] : kChartNames)
    if (type == t) return name;
  return "bar";
}

std::optional<ChartType> parse_chart_type(std::string_view s) {
  for (const auto& [type, name] : kChartNames)
    if (name == s) return type;
  return std::nullopt;
}

std::optional<Background> parse_background(std::string_view s) {
  if (s == "white" || s == "W") return Background::kWhite;
  if (s == "transparent" || s == "T") return Background::kTransparent;
  return std::nullopt;
}

void ChartOptions::validate() const {
  if (start_year && end_year && *start_year > *end_year) invalid("start_year", "must not exceed end_year");
  if (year_gap < 1 || year_gap > 5) invalid("year_gap", "must be in 1..5");
  if (top_count && *top_count < 1) invalid("top_count", "must be >= 1");
  if (labels.fontsize < 1) invalid("labels.fontsize", "must be >= 1");
  if (title.fontsize < 1) invalid("title.fontsize", "must be >= 1");
  if (ticks.fontsize < 1) invalid("ticks.fontsize", "must be >= 1");
  if (ticks.rotation_degrees < -90 || ticks.rotation_degrees > 90) invalid("ticks.rotation_degrees", "must be in -90..90");
  if (!is_hex_color(colors.bar)) invalid("colors.bar", "not a hex color");
  if (!is_hex_color(colors.border)) invalid("colors.border", "not a hex color");
  if (!is_hex_color(colors.line)) invalid("colors.line", "not a hex color");
  if (!is_hex_color(colors.marker)) invalid("colors.marker", "not a hex color");
  if (width < 100 || height < 100) invalid("width", "canvas must be at least 100x100");
}

void to_json(nlohmann::json& j, const ChartOptions& o) {
  j = nlohmann::json::object();
  j["chart_type"] = std::string(to_string(o.chart_type));
  j["start_year"] = o.start_year ? nlohmann::json(*o.start_year) : nlohmann::json(nullptr);
  j["end_year"] = o.end_year ? nlohmann::json(*o.end_year) : nlohmann::json(nullptr);
  j["year_gap"] = o.year_gap;
  j["orientation"] = o.orientation == Orientation::kVertical ? "vertical" : "horizontal";
  j["x_scale"] = o.x_scale == Scale::kLinear ? "linear" : "log";
  j["y_scale"] = o.y_scale == Scale::kLinear ? "linear" : "log";
  j["top_count"] = o.top_count ? nlohmann::json(*o.top_count) : nlohmann::json(nullptr);
  j["period"] = o.period == Period::kYearwise ? "yearwise" : "decadewise";
  j["labels"] = {{"x_label", o.labels.x_label}, {"y_label", o.labels.y_label}, {"fontsize", o.labels.fontsize}};
  j["title"] = {{"text", o.title.text}, {"fontsize", o.title.fontsize}, {"visible", o.title.visible}};
  j["ticks"] = {{"fontsize", o.ticks.fontsize}, {"rotation_degrees", o.ticks.rotation_degrees}};
  j["colors"] = {{"bar", o.colors.bar}, {"border", o.colors.border}, {"line", o.colors.line}, {"marker", o.colors.marker}};
  j["grid_visible"] = o.grid_visible;
  j["legend_visible"] = o.legend_visible;
  j["width"] = o.width;
  j["height"] = o.height;
}

namespace {

void check_keys(const nlohmann::json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(where, "expected an object");
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      invalid(where.empty() ? key : fmt::format("{}.{}", where, key), "unknown option");
}

template <typename T>
void read(const nlohmann::json& j, std::string_view key, T& out, std::string_view path) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    invalid(path, "wrong type");
  }
}

template <typename T>
void read_opt(const nlohmann::json& j, std::string_view key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(j, key, v, key);
  out = v;
}

template <typename E>
void read_enum(const nlohmann::json& j, std::string_view key, E& out, std::string_view a, E ea, std::string_view b,
               E eb) {
  if (!j.contains(key)) return;
  std::string s;
  read(j, key, s, key);
  if (s == a) {
    out = ea;
  } else if (s == b) {
    out = eb;
  } else {
    invalid(key, fmt::format("expected '{}' or '{}'", a, b));
  }
}

}  // namespace

void from_json(const nlohmann::json& j, ChartOptions& o) {
  check_keys(j, "", {"chart_type", "start_year", "end_year", "year_gap", "orientation", "x_scale", "y_scale",
                     "top_count", "period", "labels", "title", "ticks", "colors", "grid_visible", "legend_visible",
                     "width", "height"});
  if (j.contains("chart_type")) {
    std::string s;
    read(j, "chart_type", s, "chart_type");
    auto t = parse_chart_type(s);
    if (!t) invalid("chart_type", fmt::format("unknown chart type '{}'", s));
    o.chart_type = *t;
  }
  read_opt(j, "start_year", o.start_year);
  read_opt(j, "end_year", o.end_year);
  read(j, "year_gap", o.year_gap, "year_gap");
  read_enum(j, "orientation", o.orientation, "vertical", Orientation::kVertical, "horizontal", Orientation::kHorizontal);
  read_enum(j, "x_scale", o.x_scale, "linear", Scale::kLinear, "log", Scale::kLog);
  read_enum(j, "y_scale", o.y_scale, "linear", Scale::kLinear, "log", Scale::kLog);
  read_opt(j, "top_count", o.top_count);
  read_enum(j, "period", o.period, "yearwise", Period::kYearwise, "decadewise", Period::kDecadewise);
  if (j.contains("labels")) {
    const auto& l = j.at("labels");
    check_keys(l, "labels", {"x_label", "y_label", "fontsize"});
    read(l, "x_label", o.labels.x_label, "labels.x_label");
    read(l, "y_label", o.labels.y_label, "labels.y_label");
    read(l, "fontsize", o.labels.fontsize, "labels.fontsize");
  }
  if (j.contains("title")) {
    const auto& t = j.at("title");
    check_keys(t, "title", {"text", "fontsize", "visible"});
    read(t, "text", o.title.text, "title.text");
    read(t, "fontsize", o.title.fontsize, "title.fontsize");
    read(t, "visible", o.title.visible, "title.visible");
  }
  if (j.contains("ticks")) {
    const auto& t = j.at("ticks");
    check_keys(t, "ticks", {"fontsize", "rotation_degrees"});
    read(t, "fontsize", o.ticks.fontsize, "ticks.fontsize");
    read(t, "rotation_degrees", o.ticks.rotation_degrees, "ticks.rotation_degrees");
  }
  if (j.contains("colors")) {
    const auto& c = j.at("colors");
    check_keys(c, "colors", {"bar", "border", "line", "marker"});
    read(c, "bar", o.colors.bar, "colors.bar");
    read(c, "border", o.colors.border, "colors.border");
    read(c, "line", o.colors.line, "colors.line");
    read(c, "marker", o.colors.marker, "colors.marker");
  }
  read(j, "grid_visible", o.grid_visible, "grid_visible");
  read(j, "legend_visible", o.legend_visible, "legend_visible");
  read(j, "width", o.width, "width");
  read(j, "height", o.height, "height");
}

void to_json(nlohmann::json& j, const ChartSpec& s) {
  j = {{"options", s.options}, {"data", s.data}, {"warnings", s.warnings}};
}

void from_json(const nlohmann::json& j, ChartSpec& s) {
  try {
    s.options = j.at("options").get<ChartOptions>();
    s.data = j.at("data").get<AnalysisResult>();
    s.warnings = j.value("warnings", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("malformed chart spec: {}", e.what()));
  }
}

CompatibilityTable CompatibilityTable::from_csv(std::string_view text) {
  CompatibilityTable t;
  for (const auto& row : csv::parse(text)) {
    if (row.empty() || row[0].empty() || row[0].front() == '#') continue;
    if (row.size() < 2) continue;
    auto type = parse_chart_type(std::string(text::trim(row[1])));
    if (!type) throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown chart type '{}' in table", row[1]));
    t.table_[std::string(text::trim(row[0]))].insert(*type);
  }
  return t;
}

const CompatibilityTable& CompatibilityTable::bundled() {
  static const CompatibilityTable t = from_csv(resources::chart_compatibility());
  return t;
}

bool CompatibilityTable::allows(std::string_view kind, ChartType type) const {
  auto it = table_.find(kind);
  return it != table_.end() && it->second.contains(type);
}

std::vector<ChartType> CompatibilityTable::charts_for(std::string_view kind) const {
  auto it = table_.find(kind);
  if (it == table_.end()) return {};
  return {it->second.begin(), it->second.end()};
}

std::vector<std::string> CompatibilityTable::kinds() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : table_) out.push_back(k);
  return out;
}

namespace {

// "2019" -> {2019, 2019}; "2019-2020" -> {2019, 2020}.
std::optional<std::pair<int, int>> year_span(std::string_view label) {
  auto dash = label.find('-');
  auto a = text::parse_int(label.substr(0, dash));
  if (!a) return std::nullopt;
  if (dash == std::string_view::npos) return std::pair{static_cast<int>(*a), static_cast<int>(*a)};
  auto b = text::parse_int(label.substr(dash + 1));
  if (!b) return std::nullopt;
  return std::pair{static_cast<int>(*a), static_cast<int>(*b)};
}

void rebin(AnalysisResult& r, int base, int width, std::vector<std::string>& warnings) {
  const std::string agg = r.meta.contains("aggregation") ? r.meta.at("aggregation") : "none";
  const bool dist = r.shape == ResultShape::kDistribution;
  if (!dist && agg != "sum" && agg != "last") {
    warnings.push_back(fmt::format("re-binning skipped: '{}' values cannot be combined", r.meta.count("mode") ? r.meta.at("mode") : r.kind));
    return;
  }
  std::vector<ResultRow> out;
  int current = 0;
  for (const auto& row : r.rows) {
    auto span = year_span(row.label);
    const int offset = span->first - base;
    const int start = base + (offset >= 0 ? offset / width : -((-offset + width - 1) / width)) * width;
    if (out.empty() || start != current) {
      current = start;
      out.push_back({fmt::format("{}-{}", start, start + width - 1), row.values});
      continue;
    }
    auto& v = out.back().values;
    if (dist) {
      v.insert(v.end(), row.values.begin(), row.values.end());
    } else if (agg == "sum") {
      for (size_t i = 0; i < v.size(); ++i) v[i] += row.values[i];
    } else {
      v = row.values;
    }
  }
  r.rows = std::move(out);
}

bool value_axis_log(const ChartOptions& o) {
  switch (o.chart_type) {
    case ChartType::kBar:
    case ChartType::kStack:
    case ChartType::kBox:
    case ChartType::kViolin:
    case ChartType::kSwarm:
      return (o.orientation == Orientation::kHorizontal ? o.x_scale : o.y_scale) == Scale::kLog;
    case ChartType::kLine:
    case ChartType::kScatter:
      return o.y_scale == Scale::kLog;
    default:
      return false;
  }
}

}  // namespace

ChartSpec build_chart_spec(const AnalysisResult& result, const ChartOptions& options, const CompatibilityTable& table) {
  options.validate();
  if (!table.allows(result.kind, options.chart_type))
    throw Error(ErrorCode::kIncompatibleChartType,
                fmt::format("chart type '{}' is not available for '{}' results", to_string(options.chart_type),
                            result.kind.empty() ? "untyped" : result.kind));
  ChartSpec spec;
  spec.options = options;
  spec.data = result;
  auto& data = spec.data;
  auto& warnings = spec.warnings;

  const bool year_axis = data.meta.contains("axis") && data.meta.at("axis") == "year" &&
                         std::all_of(data.rows.begin(), data.rows.end(),
                                     [](const ResultRow& r) { return year_span(r.label).has_value(); });
  const bool wants_years = options.start_year || options.end_year || options.year_gap > 1 ||
                           options.period == Period::kDecadewise;
  if (year_axis) {
    if (options.start_year || options.end_year) {
      std::erase_if(data.rows, [&](const ResultRow& r) {
        auto span = year_span(r.label);
        return (options.start_year && span->first < *options.start_year) ||
               (options.end_year && span->second > *options.end_year);
      });
    }
    if (options.period == Period::kDecadewise) {
      rebin(data, 0, 10, warnings);
    } else if (options.year_gap > 1 && !data.rows.empty()) {
      const int base = options.start_year.value_or(year_span(data.rows.front().label)->first);
      rebin(data, base, options.year_gap, warnings);
    }
    if (options.top_count) warnings.push_back("top_count ignored: rows are years");
  } else {
    if (wants_years) warnings.push_back("year options ignored: result has no year axis");
    if (options.top_count && data.rows.size() > static_cast<size_t>(*options.top_count)) {
      if (data.shape == ResultShape::kDistribution) {
        std::stable_sort(data.rows.begin(), data.rows.end(), [](const ResultRow& a, const ResultRow& b) {
          return a.values.size() != b.values.size() ? a.values.size() > b.values.size() : a.label < b.label;
        });
      } else if (!data.columns.empty()) {
        sort_by_count_desc(data.rows);
      }
      data.rows.resize(static_cast<size_t>(*options.top_count));
    }
  }

  if (value_axis_log(options)) {
    if (data.shape == ResultShape::kDistribution) {
      size_t dropped = 0;
      for (auto& row : data.rows) dropped += std::erase_if(row.values, [](double v) { return v <= 0.0; });
      if (dropped) warnings.push_back(fmt::format("log scale: dropped {} non-positive value(s)", dropped));
    } else {
      const bool scatter = options.chart_type == ChartType::kScatter;
      const auto before = data.rows.size();
      std::erase_if(data.rows, [&](const ResultRow& r) {
        if (scatter) return r.values.size() >= 2 ? r.values[r.values.size() >= 3 ? 2 : 1] <= 0.0
                                                 : (!r.values.empty() && r.values[0] <= 0.0);
        return std::any_of(r.values.begin(), r.values.end(), [](double v) { return v <= 0.0; });
      });
      if (before != data.rows.size())
        warnings.push_back(fmt::format("log scale: dropped {} row(s) with non-positive values", before - data.rows.size()));
    }
  }
  if (options.chart_type == ChartType::kScatter && options.x_scale == Scale::kLog) {
    const auto before = data.rows.size();
    std::erase_if(data.rows, [&](const ResultRow& r) {
      return r.values.size() >= 2 && r.values[r.values.size() >= 3 ? 1 : 0] <= 0.0;
    });
    if (before != data.rows.size())
      warnings.push_back(fmt::format("log x scale: dropped {} row(s) with non-positive x", before - data.rows.size()));
  }
  return spec;
}

std::string export_csv(const AnalysisResult& result) {
  std::vector<csv::Row> rows;
  csv::Row header = {result.label_column};
  const bool dist = result.shape == ResultShape::kDistribution;
  for (const auto& c : result.columns) header.push_back(dist ? c + "[]" : c);
  rows.push_back(std::move(header));
  for (const auto& r : result.rows) {
    csv::Row row = {r.label};
    if (dist) {
      std::vector<std::string> parts;
      for (double v : r.values) parts.push_back(fmt::format("{}", v));
      row.push_back(text::join(parts, ";"));
    } else {
      for (double v : r.values) row.push_back(fmt::format("{}", v));
    }
    rows.push_back(std::move(row));
  }
  return csv::write(rows);
}

namespace {

double parse_number(const std::string& s) {
  char* end = nullptr;
  double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size())
    throw Error(ErrorCode::kInvalidArgument, fmt::format("not a number: '{}'", s));
  return v;
}

}  // namespace

AnalysisResult parse_exported_csv(std::string_view csv_text) {
  auto rows = csv::parse(text::strip_bom(csv_text));
  if (rows.empty() || rows[0].empty()) throw Error(ErrorCode::kNoHeaderRow, "result CSV has no header row");
  AnalysisResult r;
  r.label_column = rows[0][0];
  const bool dist = rows[0].size() == 2 && rows[0][1].ends_with("[]");
  if (dist) {
    r.shape = ResultShape::kDistribution;
    r.columns = {rows[0][1].substr(0, rows[0][1].size() - 2)};
  } else {
    r.columns.assign(rows[0].begin() + 1, rows[0].end());
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != rows[0].size())
      throw Error(ErrorCode::kInvalidArgument, fmt::format("row {} has {} cells, expected {}", i + 1, row.size(), rows[0].size()));
    ResultRow out{row[0], {}};
    if (dist) {
      if (!row[1].empty())
        for (const auto& part : text::split_trimmed(row[1], ";")) out.values.push_back(parse_number(part));
    } else {
      for (size_t c = 1; c < row.size(); ++c) out.values.push_back(parse_number(row[c]));
    }
    r.rows.push_back(std::move(out));
  }
  return r;
}

}  // namespace scholarscope::viz
