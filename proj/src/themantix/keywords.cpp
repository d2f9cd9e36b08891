#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "scholarscope/error.hpp"
#include "scholarscope/resources.hpp"
#include "scholarscope/text.hpp"
#include "scholarscope/themantix.hpp"

namespace scholarscope::themantix {

StopWords StopWords::from_text(std::string_view text) {
  StopWords sw;
  size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    auto line = text::trim(text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos));
    if (!line.empty() && line.front() != '#') sw.words_.insert(text::to_lower(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return sw;
}

const StopWords& StopWords::bundled() {
  static const StopWords sw = from_text(resources::stopwords());
  return sw;
}

std::vector<std::string> filter_tokens(std::vector<std::string> tokens, const StopWords& stop) {
  std::erase_if(tokens, [&](const std::string& t) {
    return t.size() < kMinTokenLength || stop.contains(t) ||
           std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
  return tokens;
}

std::vector<std::string> document_tokens(const Record& r, const StopWords& stop) {
  auto tokens = text::tokenize(r.title);
  auto more = text::tokenize(r.abstract);
  tokens.insert(tokens.end(), more.begin(), more.end());
  return filter_tokens(std::move(tokens), stop);
}

std::optional<KeywordSource> parse_keyword_source(std::string_view s) {
  if (s == "author_keywords" || s == "author") return KeywordSource::kAuthor;
  if (s == "index_keywords" || s == "index") return KeywordSource::kIndex;
  if (s == "both") return KeywordSource::kBoth;
  return std::nullopt;
}

std::optional<MappingAxis> parse_mapping_axis(std::string_view s) {
  if (s == "country") return MappingAxis::kCountry;
  if (s == "doc_type" || s == "field") return MappingAxis::kDocType;
  return std::nullopt;
}

namespace {

std::string norm_keyword(std::string_view k) { return text::to_lower(text::normalize_whitespace(k)); }

void check_n(size_t n, std::string_view what) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be >= 1", what));
}

std::vector<std::string> top_labels(const std::map<std::string, long long>& counts, size_t n) {
  std::vector<ResultRow> rows;
  for (const auto& [k, c] : counts) rows.push_back({k, {static_cast<double>(c)}});
  sort_by_count_desc(rows);
  std::vector<std::string> out;
  for (size_t i = 0; i < rows.size() && i < n; ++i) out.push_back(rows[i].label);
  return out;
}

}  // namespace

AnalysisResult keyword_frequencies(const Corpus& corpus, KeywordSource source, size_t n) {
  check_n(n, "n");
  std::map<std::string, long long> counts;
  for (const auto& r : corpus.records()) {
    auto add = [&](const std::vector<std::string>& list) {
      for (const auto& k : list) {
        auto key = norm_keyword(k);
        if (!key.empty()) ++counts[key];
      }
    };
    if (source != KeywordSource::kIndex) add(r.author_keywords);
    if (source != KeywordSource::kAuthor) add(r.index_keywords);
  }
  AnalysisResult res;
  res.kind = "keywords";
  res.label_column = "keyword";
  res.columns = {"count"};
  for (const auto& [k, c] : counts) res.rows.push_back({k, {static_cast<double>(c)}});
  sort_by_count_desc(res.rows);
  if (res.rows.size() > n) res.rows.resize(n);
  res.meta["analysis"] = "keyword_frequencies";
  res.meta["source"] = source == KeywordSource::kAuthor ? "author_keywords"
                       : source == KeywordSource::kIndex ? "index_keywords"
                                                         : "both";
  res.meta["aggregation"] = "none";
  return res;
}

AnalysisResult keyword_mapping(const Corpus& corpus, MappingAxis axis, size_t top_keywords, size_t top_axis) {
  check_n(top_keywords, "top_keywords");
  check_n(top_axis, "top_axis");
  std::map<std::string, long long> kw_count;
  std::map<std::string, long long> axis_count;
  std::map<std::pair<std::string, std::string>, long long> cell;
  for (const auto& r : corpus.records()) {
    std::vector<std::string> kws;
    for (const auto& k : distinct_keywords(r)) {
      auto key = norm_keyword(k);
      if (!key.empty() && std::find(kws.begin(), kws.end(), key) == kws.end()) kws.push_back(key);
    }
    std::vector<std::string> values;
    if (axis == MappingAxis::kCountry) {
      values = distinct_countries(r);
    } else {
      auto t = text::trim(r.doc_type);
      values.push_back(t.empty() ? std::string(kUnspecified) : std::string(t));
    }
    for (const auto& k : kws) ++kw_count[k];
    for (const auto& v : values) ++axis_count[v];
    for (const auto& k : kws)
      for (const auto& v : values) ++cell[{k, v}];
  }
  const auto keys = top_labels(kw_count, top_keywords);
  const auto cols = top_labels(axis_count, top_axis);
  AnalysisResult res;
  res.kind = "keyword_mapping";
  res.label_column = "keyword";
  res.columns = cols;
  for (const auto& k : keys) {
    ResultRow row{k, {}};
    for (const auto& c : cols) {
      auto it = cell.find({k, c});
      row.values.push_back(it == cell.end() ? 0.0 : static_cast<double>(it->second));
    }
    res.rows.push_back(std::move(row));
  }
  res.meta["analysis"] = "keyword_mapping";
  res.meta["axis"] = axis == MappingAxis::kCountry ? "country" : "doc_type";
  res.meta["aggregation"] = "none";
  return res;
}

colabrix::Graph cooccurrence_graph(const Corpus& corpus, std::int64_t min_edge_weight) {
  if (min_edge_weight < 1) throw Error(ErrorCode::kInvalidArgument, "min_edge_weight must be >= 1");
  colabrix::Graph::Builder b;
  for (const auto& r : corpus.records()) {
    std::vector<std::string> kws;
    for (const auto& k : distinct_keywords(r)) {
      auto key = norm_keyword(k);
      if (!key.empty() && std::find(kws.begin(), kws.end(), key) == kws.end()) kws.push_back(key);
    }
    for (const auto& k : kws) b.add_node(k);
    for (size_t i = 0; i < kws.size(); ++i)
      for (size_t j = i + 1; j < kws.size(); ++j) b.add_edge(kws[i], kws[j]);
  }
  auto g = b.build();
  return min_edge_weight > 1 ? g.filter_edges(min_edge_weight) : g;
}

nlohmann::json word_cloud_json(const AnalysisResult& result) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& row : result.rows)
    out.push_back({{"term", row.label}, {"weight", row.values.empty() ? 0.0 : row.values.front()}});
  return out;
}

}  // namespace scholarscope::themantix
