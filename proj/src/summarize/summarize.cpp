#include "scholarscope/summarize.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <map>
#include <numeric>

#include <fmt/format.h>

#include "scholarscope/http_client.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope::summarize {
namespace {

constexpr size_t kTopRows = 5;
constexpr size_t kMaxLabel = 80;

std::string clean_label(std::string_view s) {
  std::string out = text::normalize_whitespace(s);
  if (out.size() > kMaxLabel) {
    size_t cut = kMaxLabel;
    while (cut > 0 && (static_cast<unsigned char>(out[cut]) & 0xC0) == 0x80) --cut;
    out = out.substr(0, cut) + "...";
  }
  // ';' and '=' delimit facts in the prompt.
  std::replace(out.begin(), out.end(), ';', ',');
  std::replace(out.begin(), out.end(), '=', '-');
  return out;
}

std::string fmt_num(double v) {
  if (std::abs(v - std::round(v)) < 1e-9) return fmt::format("{}", static_cast<long long>(std::llround(v)));
  return fmt::format("{:.4g}", v);
}

double row_measure(const AnalysisResult& r, const ResultRow& row) {
  if (r.shape == ResultShape::kDistribution) return static_cast<double>(row.values.size());
  return row.values.empty() ? 0.0 : row.values.front();
}

std::string truncate_utf8(std::string s, size_t max) {
  if (s.size() <= max) return s;
  size_t cut = max;
  while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
  s.resize(cut);
  return s;
}

}  // namespace

std::string build_prompt(const AnalysisResult& input, const viz::ChartSpec* spec) {
  const AnalysisResult& r = spec ? spec->data : input;
  std::string p =
      "Write a short explanatory summary of the following analysis result for a researcher. "
      "Use only the facts listed.\n";
  std::string analysis = r.kind.empty() ? "analysis" : r.kind;
  std::replace(analysis.begin(), analysis.end(), '_', ' ');
  p += fmt::format("Analysis: {}\n", analysis);
  if (auto it = r.meta.find("mode"); it != r.meta.end()) p += fmt::format("Mode: {}\n", it->second);
  if (spec) p += fmt::format("Chart: {}\n", viz::to_string(spec->options.chart_type));
  p += fmt::format("Rows: {}\n", r.rows.size());
  if (r.rows.empty()) return p;

  const bool dist = r.shape == ResultShape::kDistribution;
  const std::string measure = dist ? "observations" : (r.columns.empty() ? "value" : r.columns.front());
  p += fmt::format("Label: {}\n", r.label_column);
  p += fmt::format("Measure: {}\n", clean_label(measure));

  std::vector<ResultRow> ranked;
  for (const auto& row : r.rows) ranked.push_back({row.label, {row_measure(r, row)}});
  sort_by_count_desc(ranked);
  std::vector<std::string> top;
  for (size_t i = 0; i < ranked.size() && i < kTopRows; ++i)
    top.push_back(fmt::format("{} = {}", clean_label(ranked[i].label), fmt_num(ranked[i].values[0])));
  p += fmt::format("Top: {}\n", text::join(top, "; "));
  p += fmt::format("Maximum: {} = {}\n", clean_label(ranked.front().label), fmt_num(ranked.front().values[0]));
  const auto& lowest = *std::find_if(ranked.begin(), ranked.end(), [&](const ResultRow& row) {
    return row.values[0] == ranked.back().values[0];
  });
  p += fmt::format("Minimum: {} = {}\n", clean_label(lowest.label), fmt_num(lowest.values[0]));

  const bool additive = !r.meta.contains("aggregation") || r.meta.at("aggregation") == "sum";
  if (!dist && additive) {
    double total = 0.0;
    for (const auto& row : ranked) total += row.values[0];
    p += fmt::format("Total: {}\n", fmt_num(total));
  }
  if (dist) {
    size_t n = 0;
    for (const auto& row : r.rows) n += row.values.size();
    p += fmt::format("Observations: {}\n", n);
  }

  const bool years = r.meta.contains("axis") && r.meta.at("axis") == "year";
  if (years && r.rows.size() >= 2) {
    // Least-squares slope of the measure against row position.
    const double n = static_cast<double>(r.rows.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      double y = row_measure(r, row);
      if (dist && !row.values.empty())
        y = std::accumulate(row.values.begin(), row.values.end(), 0.0) / static_cast<double>(row.values.size());
      const double x = static_cast<double>(i);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const char* dir = slope > 1e-12 ? "increasing" : (slope < -1e-12 ? "decreasing" : "flat");
    p += fmt::format("Trend: {}\n", dir);
    p += fmt::format("Slope: {}\n", fmt_num(slope));
    p += fmt::format("Span: {} to {}\n", clean_label(r.rows.front().label), clean_label(r.rows.back().label));
  }
  return p;
}

std::string TemplateProvider::summarize(const std::string& prompt) const {
  std::map<std::string, std::string> f;
  size_t pos = 0;
  while (pos < prompt.size()) {
    auto nl = prompt.find('\n', pos);
    auto line = std::string_view(prompt).substr(pos, nl == std::string::npos ? std::string::npos : nl - pos);
    auto colon = line.find(": ");
    if (colon != std::string_view::npos && colon < 20)
      f.emplace(std::string(line.substr(0, colon)), std::string(line.substr(colon + 2)));
    if (nl == std::string::npos) break;
    pos = nl + 1;
  }
  if (!f.contains("Rows") || f["Rows"] == "0") return std::string(kNoData);

  const std::string analysis = f.contains("Analysis") ? f["Analysis"] : "analysis";
  std::string out = fmt::format("This {} result", analysis);
  if (f.contains("Mode")) out += fmt::format(" ({} mode)", f["Mode"]);
  out += fmt::format(" has {} rows by {}.", f["Rows"], f["Label"]);
  if (f.contains("Maximum")) {
    out += fmt::format(" The largest {} is {}", f["Measure"], f["Maximum"]);
    if (f["Rows"] != "1" && f.contains("Minimum")) out += fmt::format(" and the smallest is {}", f["Minimum"]);
    out += ".";
  }
  if (f.contains("Top") && f["Rows"] != "1") out += fmt::format(" Leading entries: {}.", f["Top"]);
  if (f.contains("Total")) out += fmt::format(" The total is {}.", f["Total"]);
  if (f.contains("Observations")) out += fmt::format(" It holds {} observations in all.", f["Observations"]);
  if (f.contains("Trend")) {
    if (f["Trend"] == "flat") {
      out += fmt::format(" From {} the values stay flat overall.", f["Span"]);
    } else {
      out += fmt::format(" From {} the data show an {} trend (least-squares slope {} per period).", f["Span"],
                         f["Trend"] == "increasing" ? "increasing" : "overall decreasing", f["Slope"]);
    }
  }
  return truncate_utf8(std::move(out), kMaxFallbackLength);
}

HttpSummaryProvider::HttpSummaryProvider(std::string url, std::string token, std::chrono::seconds timeout)
    : url_(std::move(url)), token_(std::move(token)), timeout_(timeout) {}

std::string HttpSummaryProvider::summarize(const std::string& prompt) const {
  auto reply = net::post_json(url_, {{"prompt", prompt}}, timeout_, token_);
  if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
    throw std::runtime_error("summary reply lacks a text field");
  return reply["text"].get<std::string>();
}

std::unique_ptr<SummaryProvider> provider_from_env() {
  const char* url = std::getenv("SCHOLARSCOPE_SUMMARY_URL");
  if (url == nullptr || *url == '\0') return std::make_unique<TemplateProvider>();
  const char* token = std::getenv("SCHOLARSCOPE_SUMMARY_TOKEN");
  return std::make_unique<HttpSummaryProvider>(url, token ? token : "");
}

Summary summarize_result(const AnalysisResult& result, const viz::ChartSpec* spec, const SummaryProvider& provider) {
  const auto prompt = build_prompt(result, spec);
  const AnalysisResult& r = spec ? spec->data : result;
  TemplateProvider fallback;
  if (r.rows.empty()) return {std::string(kNoData), provider.identifier(), false};
  try {
    auto text = provider.summarize(prompt);
    if (!text::trim(text).empty()) return {std::move(text), provider.identifier(), false};
    std::cerr << "summary provider " << provider.identifier() << " returned empty text; using fallback\n";
  } catch (const std::exception& e) {
    std::cerr << "summary provider " << provider.identifier() << " failed: " << e.what() << "; using fallback\n";
  }
  return {fallback.summarize(prompt), fallback.identifier(), true};
}

}  // namespace scholarscope::summarize
