#include "scholarscope/bibtrail.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/ingest.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope::bibtrail {

namespace {

std::string or_unspecified(const std::string& s) {
  return s.empty() ? std::string(kUnspecified) : s;
}

int decade_of(int year) {
  return static_cast<int>(std::floor(static_cast<double>(year) / 10.0)) * 10;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

AnalysisResult make_counts(std::string kind, std::string label_column, std::string column,
                           const std::map<std::string, double>& counts) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = std::move(label_column);
  r.columns = {std::move(column)};
  for (const auto& [label, n] : counts) r.rows.push_back({label, {n}});
  sort_by_count_desc(r.rows);
  r.meta["aggregation"] = "none";
  return r;
}

// Per-category citation lists ordered like the category counts.
AnalysisResult make_distribution(std::string kind, std::string label_column,
                                 const std::map<std::string, std::vector<double>>& lists) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = std::move(label_column);
  r.shape = ResultShape::kDistribution;
  r.columns = {"values"};
  for (const auto& [label, values] : lists)
    r.rows.push_back({label, values});
  std::stable_sort(r.rows.begin(), r.rows.end(), [](const ResultRow& a, const ResultRow& b) {
    if (a.values.size() != b.values.size()) return a.values.size() > b.values.size();
    return a.label < b.label;
  });
  r.meta["aggregation"] = "none";
  return r;
}

// Year x category matrix; categories ordered by overall count.
AnalysisResult make_matrix(std::string kind, std::string label_column,
                           const std::map<std::string, std::map<std::string, double>>& cells,
                           std::vector<std::string> columns) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = std::move(label_column);
  r.columns = std::move(columns);
  for (const auto& [label, row] : cells) {
    ResultRow out{label, {}};
    for (const auto& c : r.columns) {
      auto it = row.find(c);
      out.values.push_back(it == row.end() ? 0.0 : it->second);
    }
    r.rows.push_back(std::move(out));
  }
  return r;
}

std::vector<std::string> columns_by_total(const std::map<std::string, double>& totals) {
  std::vector<ResultRow> rows;
  for (const auto& [k, v] : totals) rows.push_back({k, {v}});
  sort_by_count_desc(rows);
  std::vector<std::string> out;
  for (auto& r : rows) out.push_back(r.label);
  return out;
}

void truncate(AnalysisResult& r, size_t top_n) {
  if (top_n > 0 && r.rows.size() > top_n) r.rows.resize(top_n);
  if (top_n > 0) r.meta["top_n"] = std::to_string(top_n);
}

}  // namespace

std::optional<PublicationMode> parse_publication_mode(std::string_view s) {
  if (s == "total") return PublicationMode::kTotal;
  if (s == "cumulative") return PublicationMode::kCumulative;
  if (s == "proportion") return PublicationMode::kProportion;
  return std::nullopt;
}

std::optional<CitationMode> parse_citation_mode(std::string_view s) {
  if (s == "total") return CitationMode::kTotal;
  if (s == "average") return CitationMode::kAverage;
  if (s == "median") return CitationMode::kMedian;
  if (s == "cumulative") return CitationMode::kCumulative;
  if (s == "proportion") return CitationMode::kProportion;
  if (s == "yearwise_distribution") return CitationMode::kYearwiseDistribution;
  return std::nullopt;
}

std::optional<DocTypeMode> parse_doc_type_mode(std::string_view s) {
  if (s == "total") return DocTypeMode::kTotal;
  if (s == "yearwise") return DocTypeMode::kYearwise;
  if (s == "decadewise") return DocTypeMode::kDecadewise;
  if (s == "vs_citations") return DocTypeMode::kVsCitations;
  return std::nullopt;
}

std::optional<JournalMode> parse_journal_mode(std::string_view s) {
  if (s == "top_journals") return JournalMode::kTopJournals;
  if (s == "quartile_counts") return JournalMode::kQuartileCounts;
  if (s == "quartile_yearly") return JournalMode::kQuartileYearly;
  if (s == "top_in_quartile") return JournalMode::kTopInQuartile;
  if (s == "journals_per_publisher") return JournalMode::kJournalsPerPublisher;
  return std::nullopt;
}

std::optional<CategoricalField> parse_categorical_field(std::string_view s) {
  if (s == "publisher") return CategoricalField::kPublisher;
  if (s == "open_access") return CategoricalField::kOpenAccess;
  if (s == "language") return CategoricalField::kLanguage;
  return std::nullopt;
}

std::optional<Quartile> parse_quartile(std::string_view s) {
  auto t = text::to_upper(text::trim(s));
  if (t == "Q1") return Quartile::kQ1;
  if (t == "Q2") return Quartile::kQ2;
  if (t == "Q3") return Quartile::kQ3;
  if (t == "Q4") return Quartile::kQ4;
  return std::nullopt;
}

std::string_view to_string(Quartile q) {
  switch (q) {
    case Quartile::kQ1: return "Q1";
    case Quartile::kQ2: return "Q2";
    case Quartile::kQ3: return "Q3";
    case Quartile::kQ4: return "Q4";
  }
  return "Q1";
}

std::optional<Quartile> QuartileIndex::lookup(const Record& r) const {
  for (const auto& issn : r.issn)
    if (auto it = entries.find(issn); it != entries.end()) return it->second;
  return std::nullopt;
}

AnalysisResult publications_series(const Corpus& corpus, PublicationMode mode, int year_gap) {
  if (year_gap < 1 || year_gap > 5)
    throw Error(ErrorCode::kInvalidArgument, fmt::format("year_gap must be in 1..5, got {}", year_gap));

  std::map<int, double> per_year;
  long long undated = 0;
  for (const auto& r : corpus.records()) {
    if (r.year) {
      per_year[*r.year] += 1;
    } else {
      ++undated;
    }
  }

  AnalysisResult result;
  result.kind = "publications_series";
  result.label_column = "year";
  result.columns = {"publications"};
  result.meta["analysis"] = "publications_series";
  result.meta["year_gap"] = std::to_string(year_gap);
  result.meta["excluded_undated"] = std::to_string(undated);
  result.meta["axis"] = "year";

  const char* mode_name = "total";
  switch (mode) {
    case PublicationMode::kTotal: mode_name = "total"; break;
    case PublicationMode::kCumulative: mode_name = "cumulative"; break;
    case PublicationMode::kProportion: mode_name = "proportion"; break;
  }
  result.meta["mode"] = mode_name;
  result.meta["aggregation"] = mode == PublicationMode::kCumulative ? "last" : "sum";
  if (per_year.empty()) return result;

  const int first = per_year.begin()->first;
  const int last = per_year.rbegin()->first;
  double dated_total = 0;
  for (auto& [y, n] : per_year) dated_total += n;

  double running = 0;
  for (int start = first; start <= last; start += year_gap) {
    int end = start + year_gap - 1;
    double n = 0;
    for (auto it = per_year.lower_bound(start); it != per_year.end() && it->first <= end; ++it) n += it->second;
    std::string label = year_gap == 1 ? std::to_string(start) : fmt::format("{}-{}", start, end);
    double value = n;
    if (mode == PublicationMode::kCumulative) {
      running += n;
      value = running;
    } else if (mode == PublicationMode::kProportion) {
      value = n / dated_total;
    }
    result.rows.push_back({std::move(label), {value}});
  }
  return result;
}

AnalysisResult citations_series(const Corpus& corpus, CitationMode mode) {
  std::map<int, std::vector<double>> per_year;
  long long undated = 0;
  double all_citations = 0;
  for (const auto& r : corpus.records()) {
    if (!r.year) {
      ++undated;
      continue;
    }
    per_year[*r.year].push_back(static_cast<double>(r.citations));
    all_citations += static_cast<double>(r.citations);
  }

  AnalysisResult result;
  result.kind = "citations_series";
  result.label_column = "year";
  result.columns = {"citations"};
  result.meta["analysis"] = "citations_series";
  result.meta["excluded_undated"] = std::to_string(undated);
  result.meta["axis"] = "year";

  double running = 0;
  for (const auto& [year, list] : per_year) {
    double total = 0;
    for (double c : list) total += c;
    double value = total;
    switch (mode) {
      case CitationMode::kTotal: break;
      case CitationMode::kAverage: value = total / static_cast<double>(list.size()); break;
      case CitationMode::kMedian: value = median_of(list); break;
      case CitationMode::kCumulative:
        running += total;
        value = running;
        break;
      case CitationMode::kProportion: value = all_citations > 0 ? total / all_citations : 0.0; break;
      case CitationMode::kYearwiseDistribution: break;
    }
    if (mode == CitationMode::kYearwiseDistribution) {
      result.rows.push_back({std::to_string(year), list});
    } else {
      result.rows.push_back({std::to_string(year), {value}});
    }
  }

  switch (mode) {
    case CitationMode::kTotal:
      result.meta["mode"] = "total";
      result.meta["aggregation"] = "sum";
      break;
    case CitationMode::kAverage:
      result.meta["mode"] = "average";
      result.meta["aggregation"] = "none";
      break;
    case CitationMode::kMedian:
      result.meta["mode"] = "median";
      result.meta["aggregation"] = "none";
      break;
    case CitationMode::kCumulative:
      result.meta["mode"] = "cumulative";
      result.meta["aggregation"] = "last";
      break;
    case CitationMode::kProportion:
      result.meta["mode"] = "proportion";
      result.meta["aggregation"] = "sum";
      result.meta["proportion_denominator"] = "all_citations";
      break;
    case CitationMode::kYearwiseDistribution:
      result.meta["mode"] = "yearwise_distribution";
      result.meta["aggregation"] = "none";
      result.shape = ResultShape::kDistribution;
      result.columns = {"values"};
      break;
  }
  return result;
}

AnalysisResult doc_type_analysis(const Corpus& corpus, DocTypeMode mode) {
  std::map<std::string, double> totals;
  for (const auto& r : corpus.records()) totals[or_unspecified(r.doc_type)] += 1;

  AnalysisResult result;
  switch (mode) {
    case DocTypeMode::kTotal:
      result = make_counts("doc_types", "doc_type", "publications", totals);
      result.meta["mode"] = "total";
      break;
    case DocTypeMode::kYearwise:
    case DocTypeMode::kDecadewise: {
      std::map<std::string, std::map<std::string, double>> cells;
      long long undated = 0;
      for (const auto& r : corpus.records()) {
        if (!r.year) {
          ++undated;
          continue;
        }
        int key = mode == DocTypeMode::kYearwise ? *r.year : decade_of(*r.year);
        cells[std::to_string(key)][or_unspecified(r.doc_type)] += 1;
      }
      result = make_matrix("doc_types", mode == DocTypeMode::kYearwise ? "year" : "decade", cells,
                           columns_by_total(totals));
      result.meta["mode"] = mode == DocTypeMode::kYearwise ? "yearwise" : "decadewise";
      result.meta["axis"] = "year";
      result.meta["aggregation"] = "sum";
      result.meta["excluded_undated"] = std::to_string(undated);
      break;
    }
    case DocTypeMode::kVsCitations: {
      std::map<std::string, std::vector<double>> lists;
      for (const auto& r : corpus.records())
        lists[or_unspecified(r.doc_type)].push_back(static_cast<double>(r.citations));
      result = make_distribution("doc_types", "doc_type", lists);
      result.meta["mode"] = "vs_citations";
      break;
    }
  }
  result.meta["analysis"] = "doc_type_analysis";
  return result;
}

QuartileIndex load_scimago(std::string_view bytes, int source_year) {
  if (!text::is_valid_utf8(bytes))
    throw Error(ErrorCode::kMalformedScimagoFile, "Scimago file is not valid UTF-8");
  auto rows = csv::parse(text::strip_bom(bytes), {.delimiter = ';', .quoting = true});
  if (rows.empty()) throw Error(ErrorCode::kMalformedScimagoFile, "Scimago file is empty");

  std::optional<size_t> issn_col, quartile_col;
  for (size_t c = 0; c < rows.front().size(); ++c) {
    auto h = text::normalize_whitespace(rows.front()[c]);
    if (text::iequals(h, "Issn")) issn_col = c;
    if (text::iequals(h, "SJR Best Quartile")) quartile_col = c;
  }
  if (!issn_col || !quartile_col)
    throw Error(ErrorCode::kMalformedScimagoFile, "Scimago file needs 'Issn' and 'SJR Best Quartile' columns");

  QuartileIndex index;
  index.source_year = source_year;
  for (size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() <= std::max(*issn_col, *quartile_col)) continue;
    auto q = parse_quartile(row[*quartile_col]);
    if (!q) continue;  // "-" or blank: journal has no quartile
    for (const auto& piece : text::split_trimmed(row[*issn_col], ",")) {
      auto issn = ingest::normalize_issn(piece);
      if (!issn) continue;
      auto [it, inserted] = index.entries.emplace(*issn, *q);
      if (!inserted && *q < it->second) it->second = *q;
    }
  }
  return index;
}

AnalysisResult journal_analysis(const Corpus& corpus, const QuartileIndex* index, JournalMode mode,
                                Quartile quartile, size_t top_n) {
  const bool needs_index = mode == JournalMode::kQuartileCounts || mode == JournalMode::kQuartileYearly ||
                           mode == JournalMode::kTopInQuartile;
  if (needs_index && index == nullptr)
    throw Error(ErrorCode::kMissingQuartileIndex, "quartile analyses need a Scimago quartile index");

  auto quartile_label = [&](const Record& r) -> std::string {
    auto q = index->lookup(r);
    return q ? std::string(to_string(*q)) : "Unranked";
  };
  static const std::vector<std::string> kQuartileColumns = {"Q1", "Q2", "Q3", "Q4", "Unranked"};

  AnalysisResult result;
  switch (mode) {
    case JournalMode::kTopJournals: {
      std::map<std::string, double> counts;
      for (const auto& r : corpus.records()) counts[or_unspecified(r.source_title)] += 1;
      result = make_counts("journals", "journal", "publications", counts);
      truncate(result, top_n);
      result.meta["mode"] = "top_journals";
      break;
    }
    case JournalMode::kQuartileCounts: {
      std::map<std::string, double> counts;
      for (const auto& r : corpus.records()) counts[quartile_label(r)] += 1;
      result.kind = "journals";
      result.label_column = "quartile";
      result.columns = {"publications"};
      for (const auto& q : kQuartileColumns) result.rows.push_back({q, {counts[q]}});
      result.meta["mode"] = "quartile_counts";
      result.meta["aggregation"] = "none";
      break;
    }
    case JournalMode::kQuartileYearly: {
      std::map<std::string, std::map<std::string, double>> cells;
      long long undated = 0;
      for (const auto& r : corpus.records()) {
        if (!r.year) {
          ++undated;
          continue;
        }
        cells[std::to_string(*r.year)][quartile_label(r)] += 1;
      }
      result = make_matrix("journals", "year", cells, kQuartileColumns);
      result.meta["mode"] = "quartile_yearly";
      result.meta["axis"] = "year";
      result.meta["aggregation"] = "sum";
      result.meta["excluded_undated"] = std::to_string(undated);
      break;
    }
    case JournalMode::kTopInQuartile: {
      std::map<std::string, double> counts;
      for (const auto& r : corpus.records()) {
        auto q = index->lookup(r);
        if (q && *q == quartile) counts[or_unspecified(r.source_title)] += 1;
      }
      result = make_counts("journals", "journal", "publications", counts);
      truncate(result, top_n);
      result.meta["mode"] = "top_in_quartile";
      result.meta["quartile"] = std::string(to_string(quartile));
      break;
    }
    case JournalMode::kJournalsPerPublisher: {
      std::map<std::string, std::set<std::string>> journals;
      for (const auto& r : corpus.records())
        journals[or_unspecified(r.publisher)].insert(text::to_lower(or_unspecified(r.source_title)));
      std::map<std::string, double> counts;
      for (const auto& [p, set] : journals) counts[p] = static_cast<double>(set.size());
      result = make_counts("publishers", "publisher", "journals", counts);
      truncate(result, top_n);
      result.meta["mode"] = "journals_per_publisher";
      break;
    }
  }
  if (index) result.meta["quartile_source_year"] = std::to_string(index->source_year);
  result.meta["analysis"] = "journal_analysis";
  return result;
}

AnalysisResult categorical_counts(const Corpus& corpus, CategoricalField field, bool vs_citations) {
  std::string kind, label_column;
  auto value_of = [&](const Record& r) -> const std::string& {
    switch (field) {
      case CategoricalField::kPublisher: return r.publisher;
      case CategoricalField::kOpenAccess: return r.open_access;
      case CategoricalField::kLanguage: return r.language;
    }
    return r.language;
  };
  switch (field) {
    case CategoricalField::kPublisher:
      kind = "publishers";
      label_column = "publisher";
      break;
    case CategoricalField::kOpenAccess:
      kind = "open_access";
      label_column = "open_access";
      break;
    case CategoricalField::kLanguage:
      kind = "language";
      label_column = "language";
      break;
  }
  if (vs_citations && field == CategoricalField::kLanguage)
    throw Error(ErrorCode::kInvalidArgument, "citation distributions are offered for publisher and open_access only");

  AnalysisResult result;
  if (vs_citations) {
    std::map<std::string, std::vector<double>> lists;
    for (const auto& r : corpus.records())
      lists[or_unspecified(value_of(r))].push_back(static_cast<double>(r.citations));
    result = make_distribution(kind, label_column, lists);
    result.meta["mode"] = "vs_citations";
  } else {
    std::map<std::string, double> counts;
    for (const auto& r : corpus.records()) counts[or_unspecified(value_of(r))] += 1;
    result = make_counts(kind, label_column, "publications", counts);
    result.meta["mode"] = "total";
  }
  result.meta["analysis"] = "categorical_counts";
  result.meta["field"] = label_column;
  return result;
}

}  // namespace scholarscope::bibtrail
