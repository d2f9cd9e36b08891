#include <algorithm>
#include <map>
#include <set>

#include <fmt/format.h>

#include "scholarscope/error.hpp"
#include "scholarscope/text.hpp"
#include "scholarscope/themantix.hpp"

namespace scholarscope::themantix {

EvolutionMap thematic_evolution(const Corpus& corpus, int slice_width, size_t top_terms) {
  if (slice_width < 1) throw Error(ErrorCode::kInvalidArgument, "slice_width must be >= 1");
  if (top_terms < 1) throw Error(ErrorCode::kInvalidArgument, "top_terms must be >= 1");
  std::optional<int> lo;
  std::optional<int> hi;
  for (const auto& r : corpus.records()) {
    if (!r.year) continue;
    lo = lo ? std::min(*lo, *r.year) : *r.year;
    hi = hi ? std::max(*hi, *r.year) : *r.year;
  }
  if (!lo) throw Error(ErrorCode::kNoDatedRecords, "no record carries a year");

  EvolutionMap map;
  for (int s = *lo; s <= *hi; s += slice_width) map.slices.push_back({s, s + slice_width - 1});
  std::vector<std::map<std::string, long long>> freq(map.slices.size());
  for (const auto& r : corpus.records()) {
    if (!r.year) continue;
    const auto slice = static_cast<size_t>((*r.year - *lo) / slice_width);
    std::set<std::string> terms;
    for (auto& t : document_tokens(r)) terms.insert(std::move(t));
    for (const auto& k : distinct_keywords(r)) {
      auto key = text::to_lower(text::normalize_whitespace(k));
      if (!key.empty()) terms.insert(std::move(key));
    }
    for (const auto& t : terms) ++freq[slice][t];
  }

  for (const auto& f : freq) {
    std::vector<ResultRow> rows;
    for (const auto& [t, c] : f) rows.push_back({t, {static_cast<double>(c)}});
    sort_by_count_desc(rows);
    std::vector<EvolutionMap::Theme> themes;
    for (size_t i = 0; i < rows.size() && i < top_terms; ++i)
      themes.push_back({rows[i].label, static_cast<long long>(rows[i].values[0])});
    map.themes_per_slice.push_back(std::move(themes));
  }
  for (size_t s = 0; s + 1 < map.themes_per_slice.size(); ++s) {
    for (const auto& a : map.themes_per_slice[s]) {
      for (const auto& b : map.themes_per_slice[s + 1]) {
        if (a.term == b.term) map.flows.push_back({s, a.term, b.term, std::min(a.frequency, b.frequency)});
      }
    }
  }
  return map;
}

namespace {

std::string slice_label(const EvolutionMap::Slice& s) {
  return s.start == s.end ? std::to_string(s.start) : fmt::format("{}-{}", s.start, s.end);
}

}  // namespace

void to_json(nlohmann::json& j, const EvolutionMap& map) {
  j = nlohmann::json::object();
  j["slices"] = nlohmann::json::array();
  for (size_t i = 0; i < map.slices.size(); ++i) {
    nlohmann::json themes = nlohmann::json::array();
    for (const auto& t : map.themes_per_slice[i]) themes.push_back({{"term", t.term}, {"frequency", t.frequency}});
    j["slices"].push_back({{"start", map.slices[i].start}, {"end", map.slices[i].end}, {"themes", themes}});
  }
  j["flows"] = nlohmann::json::array();
  for (const auto& f : map.flows)
    j["flows"].push_back({{"from_slice", f.from_slice},
                          {"from_term", f.from_term},
                          {"to_term", f.to_term},
                          {"weight", f.weight}});
}

AnalysisResult evolution_result(const EvolutionMap& map) {
  AnalysisResult res;
  res.kind = "thematic_evolution";
  res.label_column = "term";
  for (const auto& s : map.slices) res.columns.push_back(slice_label(s));
  std::vector<std::string> order;
  std::map<std::string, std::vector<double>> cells;
  for (size_t s = 0; s < map.slices.size(); ++s) {
    for (const auto& t : map.themes_per_slice[s]) {
      auto [it, fresh] = cells.try_emplace(t.term, std::vector<double>(map.slices.size(), 0.0));
      if (fresh) order.push_back(t.term);
      it->second[s] = static_cast<double>(t.frequency);
    }
  }
  for (const auto& t : order) res.rows.push_back({t, cells[t]});
  nlohmann::json flows = nlohmann::json::array();
  for (const auto& f : map.flows)
    flows.push_back({{"from", slice_label(map.slices[f.from_slice])},
                     {"to", slice_label(map.slices[f.from_slice + 1])},
                     {"term", f.from_term},
                     {"weight", f.weight}});
  res.meta["flows"] = flows.dump();
  res.meta["analysis"] = "thematic_evolution";
  res.meta["aggregation"] = "none";
  return res;
}

}  // namespace scholarscope::themantix
