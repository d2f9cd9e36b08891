#include "scholarscope/corpus.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope {

namespace {

bool contains_ci(const std::vector<std::string>& allowed, std::string_view value) {
  return std::any_of(allowed.begin(), allowed.end(),
                     [&](const std::string& a) { return text::iequals(text::trim(a), value); });
}

const std::vector<std::string> kCorpusColumns = {
    "id",         "source_label", "title",     "authors",   "author_ids",     "affiliations",
    "countries",  "year",         "source_title", "issn",   "doi",            "citations",
    "doc_type",   "publisher",    "open_access", "language", "author_keywords", "index_keywords",
    "abstract",   "funding",
};

constexpr std::string_view kJoin = "; ";

}  // namespace

std::vector<std::string> distinct_countries(const Record& r) {
  std::vector<std::string> out;
  for (const auto& c : r.countries) {
    if (c.empty() || c == kUnknownCountry) continue;
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  }
  return out;
}

std::vector<std::string> distinct_keywords(const Record& r) {
  std::vector<std::string> out;
  for (const auto* list : {&r.author_keywords, &r.index_keywords})
    for (const auto& k : *list)
      if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
  return out;
}

Corpus::Corpus()
    : records_(std::make_shared<const std::vector<Record>>()),
      sources_(std::make_shared<const std::vector<std::string>>()) {}

Corpus::Corpus(std::vector<Record> records, std::vector<std::string> sources)
    : records_(std::make_shared<const std::vector<Record>>(std::move(records))),
      sources_(std::make_shared<const std::vector<std::string>>(std::move(sources))) {}

bool FilterSpec::empty() const {
  return !year_range && !doc_types && !languages && !countries && !journals && !min_citations &&
         !keyword_contains;
}

void FilterSpec::validate() const {
  if (year_range && (*year_range)[0] > (*year_range)[1])
    throw Error(ErrorCode::kInvalidSpec,
                fmt::format("year_range: start {} is after end {}", (*year_range)[0], (*year_range)[1]));
  if (min_citations && *min_citations < 0)
    throw Error(ErrorCode::kInvalidSpec, "min_citations: must be non-negative");
}

bool matches(const Record& r, const FilterSpec& spec) {
  if (spec.year_range) {
    if (!r.year || *r.year < (*spec.year_range)[0] || *r.year > (*spec.year_range)[1]) return false;
  }
  if (spec.doc_types && !contains_ci(*spec.doc_types, r.doc_type)) return false;
  if (spec.languages && !contains_ci(*spec.languages, r.language)) return false;
  if (spec.journals && !contains_ci(*spec.journals, r.source_title)) return false;
  if (spec.countries) {
    bool any = std::any_of(r.countries.begin(), r.countries.end(),
                           [&](const std::string& c) { return contains_ci(*spec.countries, c); });
    if (!any) return false;
  }
  if (spec.min_citations && r.citations < *spec.min_citations) return false;
  if (spec.keyword_contains) {
    bool any = false;
    for (const auto* list : {&r.author_keywords, &r.index_keywords}) {
      for (const auto& k : *list) {
        for (const auto& needle : *spec.keyword_contains) {
          if (k.find(text::to_lower(needle)) != std::string::npos) {
            any = true;
            break;
          }
        }
        if (any) break;
      }
      if (any) break;
    }
    if (!any) return false;
  }
  return true;
}

Corpus filter(const Corpus& corpus, const FilterSpec& spec) {
  spec.validate();
  if (spec.empty()) return corpus;
  std::vector<Record> kept;
  for (const auto& r : corpus.records())
    if (matches(r, spec)) kept.push_back(r);
  return Corpus(std::move(kept), corpus.sources());
}

CorpusStats summarize_corpus(const Corpus& corpus) {
  CorpusStats s;
  s.n_records = static_cast<long long>(corpus.size());
  std::set<std::string> authors, institutions, countries, journals;
  for (const auto& r : corpus.records()) {
    const bool ids_parallel = r.author_ids.size() == r.authors.size();
    for (size_t i = 0; i < r.authors.size(); ++i) {
      if (ids_parallel && !r.author_ids[i].empty()) {
        authors.insert("id:" + r.author_ids[i]);
      } else {
        authors.insert("name:" + text::to_lower(text::normalize_whitespace(r.authors[i])));
      }
    }
    for (const auto& a : r.affiliations) {
      auto t = text::trim(a);
      if (!t.empty()) institutions.emplace(t);
    }
    for (const auto& c : distinct_countries(r)) countries.insert(c);
    if (!r.source_title.empty()) journals.insert(text::to_lower(r.source_title));
    if (r.year) {
      s.year_min = s.year_min ? std::min(*s.year_min, *r.year) : *r.year;
      s.year_max = s.year_max ? std::max(*s.year_max, *r.year) : *r.year;
    }
  }
  s.n_distinct_authors = static_cast<long long>(authors.size());
  s.n_distinct_institutions = static_cast<long long>(institutions.size());
  s.n_distinct_countries = static_cast<long long>(countries.size());
  s.n_distinct_journals = static_cast<long long>(journals.size());
  return s;
}

std::string write_corpus_csv(const Corpus& corpus) {
  std::string out;
  csv::append_row(out, kCorpusColumns);
  for (const auto& r : corpus.records()) {
    csv::append_row(out, {r.id,
                          r.source_label,
                          r.title,
                          text::join(r.authors, kJoin),
                          text::join(r.author_ids, kJoin),
                          text::join(r.affiliations, kJoin),
                          text::join(r.countries, kJoin),
                          r.year ? std::to_string(*r.year) : "",
                          r.source_title,
                          text::join(r.issn, kJoin),
                          r.doi.value_or(""),
                          std::to_string(r.citations),
                          r.doc_type,
                          r.publisher,
                          r.open_access,
                          r.language,
                          text::join(r.author_keywords, kJoin),
                          text::join(r.index_keywords, kJoin),
                          r.abstract,
                          text::join(r.funding, kJoin)});
  }
  return out;
}

Corpus read_corpus_csv(std::string_view data) {
  if (!text::is_valid_utf8(data)) throw Error(ErrorCode::kUndecodableBytes, "corpus file is not valid UTF-8");
  auto rows = csv::parse(text::strip_bom(data));
  if (rows.empty()) throw Error(ErrorCode::kNoHeaderRow, "corpus file is empty");
  const auto& header = rows.front();
  std::vector<int> idx(kCorpusColumns.size(), -1);
  for (size_t c = 0; c < kCorpusColumns.size(); ++c) {
    auto it = std::find(header.begin(), header.end(), kCorpusColumns[c]);
    if (it == header.end())
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("corpus file lacks column '{}'", kCorpusColumns[c]));
    idx[c] = static_cast<int>(it - header.begin());
  }

  std::vector<Record> records;
  std::vector<std::string> sources;
  for (size_t i = 1; i < rows.size(); ++i) {
    auto& row = rows[i];
    if (row.size() == 1 && row[0].empty()) continue;
    row.resize(header.size());
    auto get = [&](size_t c) -> const std::string& { return row[static_cast<size_t>(idx[c])]; };
    auto list = [&](size_t c) { return text::split_trimmed(get(c), kJoin); };
    Record r;
    r.id = get(0);
    r.source_label = get(1);
    r.title = get(2);
    r.authors = list(3);
    r.author_ids = list(4);
    r.affiliations = list(5);
    r.countries = list(6);
    if (auto y = text::parse_int(get(7))) r.year = static_cast<int>(*y);
    r.source_title = get(8);
    r.issn = list(9);
    if (!get(10).empty()) r.doi = get(10);
    r.citations = text::parse_int(get(11)).value_or(0);
    if (r.citations < 0) throw Error(ErrorCode::kInvalidArgument, fmt::format("negative citations in record {}", r.id));
    r.doc_type = get(12);
    r.publisher = get(13);
    r.open_access = get(14);
    r.language = get(15);
    r.author_keywords = list(16);
    r.index_keywords = list(17);
    r.abstract = get(18);
    r.funding = list(19);
    if (std::find(sources.begin(), sources.end(), r.source_label) == sources.end())
      sources.push_back(r.source_label);
    records.push_back(std::move(r));
  }
  return Corpus(std::move(records), std::move(sources));
}

// ---------------------------------------------------------------------------
// JSON

void to_json(nlohmann::json& j, const FilterSpec& spec) {
  j = nlohmann::json::object();
  if (spec.year_range) j["year_range"] = {(*spec.year_range)[0], (*spec.year_range)[1]};
  if (spec.doc_types) j["doc_types"] = *spec.doc_types;
  if (spec.languages) j["languages"] = *spec.languages;
  if (spec.countries) j["countries"] = *spec.countries;
  if (spec.journals) j["journals"] = *spec.journals;
  if (spec.min_citations) j["min_citations"] = *spec.min_citations;
  if (spec.keyword_contains) j["keyword_contains"] = *spec.keyword_contains;
}

void from_json(const nlohmann::json& j, FilterSpec& spec) {
  spec = FilterSpec{};
  if (!j.is_object()) throw Error(ErrorCode::kInvalidSpec, "filter spec must be a JSON object");
  auto string_list = [&](const char* key) -> std::optional<std::vector<std::string>> {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    const auto& v = j.at(key);
    if (!v.is_array()) throw Error(ErrorCode::kInvalidSpec, fmt::format("{}: expected a list of strings", key));
    std::vector<std::string> out;
    for (const auto& e : v) {
      if (!e.is_string()) throw Error(ErrorCode::kInvalidSpec, fmt::format("{}: expected a list of strings", key));
      out.push_back(e.get<std::string>());
    }
    return out;
  };
  for (auto& [key, value] : j.items()) {
    static const std::set<std::string> kKnown = {"year_range", "doc_types",      "languages",
                                                 "countries",  "journals",       "min_citations",
                                                 "keyword_contains"};
    if (!kKnown.contains(key)) throw Error(ErrorCode::kInvalidSpec, fmt::format("{}: unknown filter field", key));
  }
  if (j.contains("year_range") && !j.at("year_range").is_null()) {
    const auto& yr = j.at("year_range");
    if (!yr.is_array() || yr.size() != 2 || !yr[0].is_number_integer() || !yr[1].is_number_integer())
      throw Error(ErrorCode::kInvalidSpec, "year_range: expected [start, end]");
    spec.year_range = std::array<int, 2>{yr[0].get<int>(), yr[1].get<int>()};
  }
  spec.doc_types = string_list("doc_types");
  spec.languages = string_list("languages");
  spec.countries = string_list("countries");
  spec.journals = string_list("journals");
  spec.keyword_contains = string_list("keyword_contains");
  if (spec.keyword_contains)
    for (auto& k : *spec.keyword_contains) k = text::to_lower(k);
  if (j.contains("min_citations") && !j.at("min_citations").is_null()) {
    if (!j.at("min_citations").is_number_integer())
      throw Error(ErrorCode::kInvalidSpec, "min_citations: expected an integer");
    spec.min_citations = j.at("min_citations").get<long long>();
  }
  spec.validate();
}

void to_json(nlohmann::json& j, const CorpusStats& s) {
  j = {{"n_records", s.n_records},
       {"n_distinct_authors", s.n_distinct_authors},
       {"n_distinct_institutions", s.n_distinct_institutions},
       {"n_distinct_countries", s.n_distinct_countries},
       {"n_distinct_journals", s.n_distinct_journals},
       {"year_min", s.year_min ? nlohmann::json(*s.year_min) : nlohmann::json(nullptr)},
       {"year_max", s.year_max ? nlohmann::json(*s.year_max) : nlohmann::json(nullptr)}};
}

void to_json(nlohmann::json& j, const Record& r) {
  j = {{"id", r.id},
       {"title", r.title},
       {"authors", r.authors},
       {"author_ids", r.author_ids},
       {"affiliations", r.affiliations},
       {"countries", r.countries},
       {"year", r.year ? nlohmann::json(*r.year) : nlohmann::json(nullptr)},
       {"source_title", r.source_title},
       {"issn", r.issn},
       {"doi", r.doi ? nlohmann::json(*r.doi) : nlohmann::json(nullptr)},
       {"citations", r.citations},
       {"doc_type", r.doc_type},
       {"publisher", r.publisher},
       {"open_access", r.open_access},
       {"language", r.language},
       {"author_keywords", r.author_keywords},
       {"index_keywords", r.index_keywords},
       {"abstract", r.abstract},
       {"funding", r.funding},
       {"source_label", r.source_label}};
}

}  // namespace scholarscope
