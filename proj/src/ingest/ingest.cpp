#include "scholarscope/ingest.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>

#include <fmt/format.h>

#include "scholarscope/error.hpp"
#include "scholarscope/resources.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope::ingest {

namespace {

constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
    "title",      "authors",   "author_ids", "affiliations", "countries",       "year",
    "source_title", "issn",    "doi",        "citations",    "doc_type",        "publisher",
    "open_access", "language", "author_keywords", "index_keywords", "abstract", "funding",
};

constexpr int kMinYear = 1500;
constexpr int kMaxYear = 2100;

// ---------------------------------------------------------------------------
// Web of Science field-tagged text

bool is_tag_line(std::string_view line) {
  auto tag_char = [](char c) { return (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'); };
  return line.size() >= 2 && line[0] >= 'A' && line[0] <= 'Z' && tag_char(line[1]) &&
         (line.size() == 2 || line[2] == ' ');
}

bool looks_field_tagged(std::string_view data) {
  size_t pos = 0;
  while (pos < data.size()) {
    size_t end = data.find('\n', pos);
    auto line = text::trim(data.substr(pos, end == std::string_view::npos ? end : end - pos));
    if (!line.empty()) {
      return is_tag_line(line) && line.find('\t') == std::string_view::npos &&
             (line.substr(0, 2) == "FN" || line.substr(0, 2) == "PT" || line.substr(0, 2) == "VR");
    }
    if (end == std::string_view::npos) break;
    pos = end + 1;
  }
  return false;
}

// Tags whose continuation lines are separate values rather than wrapped text.
bool tag_lines_are_values(std::string_view tag) {
  static const std::set<std::string_view> kTags = {"AU", "AF", "BA", "BF", "CA", "C1",
                                                   "C3", "CR", "RP", "EM", "GP"};
  return kTags.contains(tag);
}

std::vector<csv::Row> parse_field_tagged(std::string_view data) {
  std::vector<std::string> headers;
  std::map<std::string, size_t> header_index;
  std::vector<std::map<std::string, std::string>> records;
  std::map<std::string, std::string> current;
  std::string last_tag;
  bool in_record = false;

  auto add_value = [&](const std::string& tag, std::string_view value, bool continuation) {
    if (!header_index.contains(tag)) {
      header_index[tag] = headers.size();
      headers.push_back(tag);
    }
    auto& cell = current[tag];
    if (cell.empty()) {
      cell = std::string(value);
    } else if (!value.empty()) {
      cell += (continuation && !tag_lines_are_values(tag)) ? " " : "; ";
      cell += value;
    }
  };

  size_t pos = 0;
  while (pos <= data.size()) {
    size_t end = data.find('\n', pos);
    std::string_view line = data.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = (end == std::string_view::npos) ? data.size() + 1 : end + 1;

    if (text::trim(line).empty()) continue;
    if (line.size() > 2 && line[0] == ' ' && line[1] == ' ') {
      if (in_record && !last_tag.empty()) add_value(last_tag, text::trim(line), true);
      continue;
    }
    if (!is_tag_line(line)) continue;
    std::string tag(line.substr(0, 2));
    auto value = line.size() > 3 ? text::trim(line.substr(3)) : std::string_view{};
    if (tag == "FN" || tag == "VR" || tag == "EF") continue;
    if (tag == "ER") {
      if (in_record) records.push_back(std::move(current));
      current.clear();
      in_record = false;
      last_tag.clear();
      continue;
    }
    in_record = true;
    last_tag = tag;
    add_value(tag, value, false);
  }
  if (in_record && !current.empty()) records.push_back(std::move(current));

  std::vector<csv::Row> rows;
  rows.push_back(headers);
  for (auto& rec : records) {
    csv::Row row(headers.size());
    for (auto& [tag, value] : rec) row[header_index[tag]] = std::move(value);
    rows.push_back(std::move(row));
  }
  return rows;
}

bool row_is_blank(const csv::Row& row) {
  return std::all_of(row.begin(), row.end(),
                     [](const std::string& c) { return text::trim(c).empty(); });
}

RawTable rectangularize(std::vector<csv::Row> rows, SourceKind kind, std::string label) {
  if (rows.empty() || row_is_blank(rows.front()))
    throw Error(ErrorCode::kNoHeaderRow, "input has no header row");

  RawTable table;
  table.source_kind = kind;
  table.source_label = std::move(label);

  size_t width = rows.front().size();
  for (size_t i = 1; i < rows.size(); ++i)
    if (!row_is_blank(rows[i])) width = std::max(width, rows[i].size());

  std::map<std::string, int> seen;
  for (size_t c = 0; c < width; ++c) {
    std::string name = c < rows.front().size() ? text::normalize_whitespace(rows.front()[c])
                                               : fmt::format("column_{}", c + 1);
    int n = ++seen[name];
    if (n > 1) {
      std::string candidate;
      do {
        candidate = fmt::format("{}.{}", name, n);
      } while (seen.contains(candidate) && ++n);
      seen[candidate] = 1;
      name = candidate;
    }
    table.headers.push_back(std::move(name));
  }
  for (size_t i = 1; i < rows.size(); ++i) {
    if (row_is_blank(rows[i])) continue;
    rows[i].resize(width);
    table.rows.push_back(std::move(rows[i]));
  }
  return table;
}

// ---------------------------------------------------------------------------
// Bundled tables

struct SynonymEntry {
  Field field;
  std::string synonym;
};

const std::vector<SynonymEntry>& synonym_table() {
  static const std::vector<SynonymEntry> table = [] {
    std::vector<SynonymEntry> out;
    auto data = resources::header_synonyms();
    size_t pos = 0;
    while (pos < data.size()) {
      size_t end = data.find('\n', pos);
      auto line = text::trim(data.substr(pos, end == std::string_view::npos ? end : end - pos));
      pos = end == std::string_view::npos ? data.size() : end + 1;
      if (line.empty() || line.front() == '#') continue;
      size_t comma = line.find(',');
      if (comma == std::string_view::npos) continue;
      auto field = field_from_name(text::trim(line.substr(0, comma)));
      if (!field) continue;
      out.push_back({*field, text::normalize_whitespace(line.substr(comma + 1))});
    }
    return out;
  }();
  return table;
}

const std::unordered_map<std::string, std::string>& country_aliases() {
  static const std::unordered_map<std::string, std::string> table = [] {
    std::unordered_map<std::string, std::string> out;
    auto rows = csv::parse(resources::countries());
    for (const auto& row : rows) {
      if (row.empty() || row[0].empty() || row[0].front() == '#') continue;
      std::string canonical(text::trim(row[0]));
      out.emplace(text::to_lower(canonical), canonical);
      if (row.size() > 1) {
        for (auto& alias : text::split_trimmed(row[1], "|"))
          out.emplace(text::to_lower(alias), canonical);
      }
    }
    return out;
  }();
  return table;
}

// ---------------------------------------------------------------------------

std::optional<size_t> column_index(const RawTable& table, const std::string& column) {
  auto it = std::find(table.headers.begin(), table.headers.end(), column);
  if (it == table.headers.end()) return std::nullopt;
  return static_cast<size_t>(it - table.headers.begin());
}

void check_parse_rate(const RawTable& table, size_t col, Field field) {
  size_t non_empty = 0;
  size_t parsed = 0;
  for (const auto& row : table.rows) {
    if (text::trim(row[col]).empty()) continue;
    ++non_empty;
    if (text::parse_int(row[col])) ++parsed;
  }
  if (non_empty > 0 && parsed * 10 < non_empty * 9) {
    throw Error(ErrorCode::kMappingRejected,
                fmt::format("{} column '{}' parses as integer in only {}/{} non-empty cells",
                            field_name(field), table.headers[col], parsed, non_empty));
  }
}

std::vector<std::string> lowercase_keywords(std::string_view cell, const std::string& delim) {
  std::vector<std::string> out;
  for (auto& k : text::split_trimmed(cell, delim)) {
    auto norm = text::to_lower(text::normalize_whitespace(k));
    if (!norm.empty()) out.push_back(std::move(norm));
  }
  return out;
}

std::vector<std::string> split_normalized(std::string_view cell, const std::string& delim) {
  std::vector<std::string> out;
  for (auto& v : text::split_trimmed(cell, delim)) out.push_back(text::normalize_whitespace(v));
  return out;
}

size_t present_field_count(const Record& r) {
  size_t n = 1;  // citations always carries a value
  n += !r.title.empty();
  n += !r.authors.empty();
  n += !r.author_ids.empty();
  n += !r.affiliations.empty();
  n += !r.countries.empty();
  n += r.year.has_value();
  n += !r.source_title.empty();
  n += !r.issn.empty();
  n += r.doi.has_value();
  n += !r.doc_type.empty();
  n += !r.publisher.empty();
  n += !r.open_access.empty();
  n += !r.language.empty();
  n += !r.author_keywords.empty();
  n += !r.index_keywords.empty();
  n += !r.abstract.empty();
  n += !r.funding.empty();
  return n;
}

struct UnionFind {
  std::vector<size_t> parent;
  std::vector<bool> via_title;

  explicit UnionFind(size_t n) : parent(n), via_title(n, false) {
    std::iota(parent.begin(), parent.end(), size_t{0});
  }
  size_t find(size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(size_t a, size_t b, bool title_basis) {
    a = find(a);
    b = find(b);
    if (a == b) {
      via_title[a] = via_title[a] || title_basis;
      return;
    }
    if (b < a) std::swap(a, b);
    parent[b] = a;
    via_title[a] = via_title[a] || via_title[b] || title_basis;
  }
};

}  // namespace

// ---------------------------------------------------------------------------

std::string_view to_string(SourceKind kind) {
  switch (kind) {
    case SourceKind::kScopus: return "scopus";
    case SourceKind::kWos: return "wos";
    case SourceKind::kGenericCsv: return "generic_csv";
  }
  return "generic_csv";
}

std::optional<SourceKind> parse_source_kind(std::string_view name) {
  if (text::iequals(name, "scopus")) return SourceKind::kScopus;
  if (text::iequals(name, "wos")) return SourceKind::kWos;
  if (text::iequals(name, "csv") || text::iequals(name, "generic_csv")) return SourceKind::kGenericCsv;
  return std::nullopt;
}

RawTable parse_delimited(std::string_view bytes, SourceKind kind, std::string source_label) {
  if (!text::is_valid_utf8(bytes))
    throw Error(ErrorCode::kUndecodableBytes, "input is not valid UTF-8");
  auto data = text::strip_bom(bytes);

  std::vector<csv::Row> rows;
  if (kind == SourceKind::kWos) {
    if (looks_field_tagged(data)) {
      rows = parse_field_tagged(data);
    } else {
      rows = csv::parse(data, {.delimiter = '\t', .quoting = false});
    }
  } else {
    rows = csv::parse(data, {.delimiter = ',', .quoting = true});
  }
  return rectangularize(std::move(rows), kind, std::move(source_label));
}

std::string serialize(const RawTable& table) {
  std::string out;
  csv::append_row(out, table.headers);
  for (const auto& row : table.rows) csv::append_row(out, row);
  return out;
}

std::string_view field_name(Field f) { return kFieldNames[static_cast<size_t>(f)]; }

std::optional<Field> field_from_name(std::string_view name) {
  for (size_t i = 0; i < kFieldCount; ++i)
    if (kFieldNames[i] == name) return kAllFields[i];
  return std::nullopt;
}

bool is_multi_valued(Field f) {
  switch (f) {
    case Field::kAuthors:
    case Field::kAuthorIds:
    case Field::kAffiliations:
    case Field::kCountries:
    case Field::kIssn:
    case Field::kAuthorKeywords:
    case Field::kIndexKeywords:
    case Field::kFunding:
      return true;
    default:
      return false;
  }
}

FieldMapping FieldMapping::defaults_for(SourceKind kind) {
  FieldMapping m;
  const std::string base = kind == SourceKind::kGenericCsv ? ";" : "; ";
  m.delimiters.fill(base);
  // Scopus author ids come as "5719...;5720...;" with no space.
  if (kind == SourceKind::kScopus) m.delimiter(Field::kAuthorIds) = ";";
  return m;
}

void to_json(nlohmann::json& j, const FieldMapping& m) {
  j = nlohmann::json::object();
  auto& assignments = j["assignments"] = nlohmann::json::object();
  auto& delimiters = j["delimiters"] = nlohmann::json::object();
  for (Field f : kAllFields) {
    const auto& col = m.column(f);
    assignments[std::string(field_name(f))] = col ? nlohmann::json(*col) : nlohmann::json(nullptr);
    delimiters[std::string(field_name(f))] = m.delimiter(f);
  }
}

void from_json(const nlohmann::json& j, FieldMapping& m) {
  m = FieldMapping::defaults_for(SourceKind::kGenericCsv);
  if (!j.is_object()) throw Error(ErrorCode::kInvalidArgument, "field mapping must be a JSON object");
  for (auto& [key, value] : j.items())
    if (key != "assignments" && key != "delimiters")
      throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown field mapping key '{}'", key));
  if (j.contains("assignments")) {
    for (auto& [key, value] : j.at("assignments").items()) {
      auto f = field_from_name(key);
      if (!f) throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown canonical field '{}'", key));
      if (value.is_null()) {
        m.column(*f).reset();
      } else if (value.is_string()) {
        m.column(*f) = value.get<std::string>();
      } else {
        throw Error(ErrorCode::kInvalidArgument, fmt::format("assignment for '{}' must be a string or null", key));
      }
    }
  }
  if (j.contains("delimiters")) {
    for (auto& [key, value] : j.at("delimiters").items()) {
      auto f = field_from_name(key);
      if (!f || !value.is_string())
        throw Error(ErrorCode::kInvalidArgument, fmt::format("bad delimiter entry '{}'", key));
      m.delimiter(*f) = value.get<std::string>();
    }
  }
}

FieldMapping infer_field_mapping(const RawTable& table) {
  FieldMapping mapping = FieldMapping::defaults_for(table.source_kind);
  std::set<size_t> used;
  for (const auto& entry : synonym_table()) {
    auto& slot = mapping.column(entry.field);
    if (slot) continue;
    for (size_t c = 0; c < table.headers.size(); ++c) {
      if (used.contains(c)) continue;
      if (text::iequals(table.headers[c], entry.synonym)) {
        slot = table.headers[c];
        used.insert(c);
        break;
      }
    }
  }
  return mapping;
}

void validate_mapping(const RawTable& table, const FieldMapping& mapping) {
  std::map<std::string, Field> owners;
  for (Field f : kAllFields) {
    const auto& col = mapping.column(f);
    if (!col) continue;
    if (!column_index(table, *col))
      throw Error(ErrorCode::kMappingRejected,
                  fmt::format("{} is mapped to missing column '{}'", field_name(f), *col));
    auto [it, inserted] = owners.emplace(*col, f);
    if (!inserted)
      throw Error(ErrorCode::kMappingRejected,
                  fmt::format("column '{}' is assigned to both {} and {}", *col,
                              field_name(it->second), field_name(f)));
  }
  if (!mapping.column(Field::kTitle) && !mapping.column(Field::kDoi))
    throw Error(ErrorCode::kMissingMandatoryField, "mapping must assign title or doi");
  for (Field f : {Field::kYear, Field::kCitations}) {
    if (const auto& col = mapping.column(f)) check_parse_rate(table, *column_index(table, *col), f);
  }
}

std::vector<Record> apply_mapping(const RawTable& table, const FieldMapping& mapping) {
  validate_mapping(table, mapping);

  std::array<std::optional<size_t>, kFieldCount> cols;
  for (Field f : kAllFields)
    if (const auto& col = mapping.column(f)) cols[static_cast<size_t>(f)] = column_index(table, *col);

  const std::string label = table.source_label.empty() ? "rec" : table.source_label;
  std::vector<Record> out;
  out.reserve(table.rows.size());
  for (size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto cell = [&](Field f) -> std::string_view {
      const auto& c = cols[static_cast<size_t>(f)];
      return c ? std::string_view(row[*c]) : std::string_view{};
    };
    auto delim = [&](Field f) -> const std::string& { return mapping.delimiter(f); };

    Record rec;
    rec.id = fmt::format("{}#{}", label, r + 1);
    rec.source_label = table.source_label;
    rec.title = text::normalize_whitespace(cell(Field::kTitle));
    rec.authors = split_normalized(cell(Field::kAuthors), delim(Field::kAuthors));
    rec.author_ids = split_normalized(cell(Field::kAuthorIds), delim(Field::kAuthorIds));
    rec.affiliations = split_normalized(cell(Field::kAffiliations), delim(Field::kAffiliations));

    if (cols[static_cast<size_t>(Field::kCountries)]) {
      for (auto& c : split_normalized(cell(Field::kCountries), delim(Field::kCountries)))
        rec.countries.push_back(canonical_country(c).value_or(std::string(kUnknownCountry)));
    } else {
      for (auto& a : rec.affiliations) rec.countries.push_back(country_of_affiliation(a));
    }

    if (auto y = text::parse_int(cell(Field::kYear)); y && *y >= kMinYear && *y <= kMaxYear)
      rec.year = static_cast<int>(*y);
    rec.source_title = text::normalize_whitespace(cell(Field::kSourceTitle));

    for (auto& piece : text::split_trimmed(cell(Field::kIssn), delim(Field::kIssn))) {
      std::string spaced = piece;
      std::replace(spaced.begin(), spaced.end(), ',', ' ');
      for (auto& token : text::split_trimmed(spaced, " ")) {
        if (auto issn = normalize_issn(token);
            issn && std::find(rec.issn.begin(), rec.issn.end(), *issn) == rec.issn.end())
          rec.issn.push_back(*issn);
      }
    }
    if (auto doi = normalize_doi(cell(Field::kDoi)); !doi.empty()) rec.doi = doi;
    if (auto c = text::parse_int(cell(Field::kCitations)); c && *c > 0) rec.citations = *c;

    rec.doc_type = text::normalize_whitespace(cell(Field::kDocType));
    rec.publisher = text::normalize_whitespace(cell(Field::kPublisher));
    rec.open_access = text::normalize_whitespace(cell(Field::kOpenAccess));
    rec.language = text::normalize_whitespace(cell(Field::kLanguage));
    rec.author_keywords = lowercase_keywords(cell(Field::kAuthorKeywords), delim(Field::kAuthorKeywords));
    rec.index_keywords = lowercase_keywords(cell(Field::kIndexKeywords), delim(Field::kIndexKeywords));
    rec.abstract = text::normalize_whitespace(cell(Field::kAbstract));
    if (text::iequals(rec.abstract, "[No abstract available]")) rec.abstract.clear();
    rec.funding = split_normalized(cell(Field::kFunding), delim(Field::kFunding));
    out.push_back(std::move(rec));
  }
  return out;
}

std::string_view to_string(MatchBasis basis) {
  return basis == MatchBasis::kDoi ? "doi" : "title_year";
}

void to_json(nlohmann::json& j, const DedupReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.duplicate_groups) {
    groups.push_back({{"kept_record_id", g.kept_record_id},
                      {"dropped_record_ids", g.dropped_record_ids},
                      {"match_basis", to_string(g.match_basis)}});
  }
  j = {{"input_count", report.input_count}, {"kept", report.kept}, {"duplicate_groups", groups}};
}

MergeResult merge_and_dedup(const std::vector<std::vector<Record>>& record_lists) {
  struct Slot {
    const Record* record;
    size_t file;
    size_t row;
  };
  std::vector<Slot> slots;
  for (size_t f = 0; f < record_lists.size(); ++f)
    for (size_t r = 0; r < record_lists[f].size(); ++r) slots.push_back({&record_lists[f][r], f, r});
  if (slots.empty()) throw Error(ErrorCode::kEmptyInput, "no records to merge");

  const size_t n = slots.size();
  UnionFind uf(n);

  std::unordered_map<std::string, size_t> by_doi;
  for (size_t i = 0; i < n; ++i) {
    if (!slots[i].record->doi) continue;
    auto key = normalize_doi(*slots[i].record->doi);
    auto [it, inserted] = by_doi.emplace(key, i);
    if (!inserted) uf.unite(it->second, i, false);
  }

  // Title+year matching applies to every pair that does not have two DOIs.
  struct Bucket {
    std::optional<size_t> first_without_doi;
    std::vector<size_t> with_doi;
  };
  std::map<std::string, Bucket> buckets;
  for (size_t i = 0; i < n; ++i) {
    const Record& rec = *slots[i].record;
    auto title_key = text::alnum_key(rec.title);
    if (title_key.empty()) continue;
    auto key = fmt::format("{}|{}", title_key, rec.year ? std::to_string(*rec.year) : "");
    auto& bucket = buckets[key];
    if (rec.doi) {
      bucket.with_doi.push_back(i);
      if (bucket.first_without_doi) uf.unite(*bucket.first_without_doi, i, true);
    } else if (!bucket.first_without_doi) {
      bucket.first_without_doi = i;
      for (size_t j : bucket.with_doi) uf.unite(i, j, true);
    } else {
      uf.unite(*bucket.first_without_doi, i, true);
    }
  }

  std::map<size_t, std::vector<size_t>> groups;  // root -> members in input order
  for (size_t i = 0; i < n; ++i) groups[uf.find(i)].push_back(i);

  struct Kept {
    size_t index;
    Record record;
    std::vector<size_t> dropped;
    bool title_basis;
  };
  std::vector<Kept> kept;
  for (auto& [root, members] : groups) {
    size_t best = members.front();
    long long max_citations = 0;
    for (size_t m : members) {
      max_citations = std::max(max_citations, slots[m].record->citations);
      auto rank = [&](size_t i) {
        return std::make_tuple(present_field_count(*slots[i].record), slots[i].record->citations);
      };
      // Earlier input order wins remaining ties since members are ordered.
      if (rank(m) > rank(best)) best = m;
    }
    Kept k{best, *slots[best].record, {}, uf.via_title[root]};
    k.record.citations = max_citations;
    for (size_t m : members)
      if (m != best) k.dropped.push_back(m);
    kept.push_back(std::move(k));
  }
  std::sort(kept.begin(), kept.end(), [](const Kept& a, const Kept& b) { return a.index < b.index; });

  MergeResult result;
  result.report.input_count = static_cast<long long>(n);
  result.report.kept = static_cast<long long>(kept.size());
  std::vector<Record> records;
  std::vector<std::string> sources;
  for (auto& k : kept) {
    if (!k.dropped.empty()) {
      DuplicateGroup g;
      g.kept_record_id = k.record.id;
      for (size_t d : k.dropped) g.dropped_record_ids.push_back(slots[d].record->id);
      g.match_basis = k.title_basis ? MatchBasis::kTitleYear : MatchBasis::kDoi;
      result.report.duplicate_groups.push_back(std::move(g));
    }
    if (std::find(sources.begin(), sources.end(), k.record.source_label) == sources.end())
      sources.push_back(k.record.source_label);
    records.push_back(std::move(k.record));
  }
  result.corpus = Corpus(std::move(records), std::move(sources));
  return result;
}

std::string normalize_doi(std::string_view doi) {
  std::string d = text::to_lower(text::trim(doi));
  for (std::string_view prefix : {"https://doi.org/", "http://doi.org/", "https://dx.doi.org/",
                                  "http://dx.doi.org/", "doi.org/", "doi:"}) {
    if (d.starts_with(prefix)) {
      d.erase(0, prefix.size());
      break;
    }
  }
  return std::string(text::trim(d));
}

std::optional<std::string> canonical_country(std::string_view name) {
  const auto& aliases = country_aliases();
  auto key = text::to_lower(text::normalize_whitespace(name));
  while (!key.empty() && (key.back() == '.' || key.back() == ';')) key.pop_back();
  if (auto it = aliases.find(key); it != aliases.end()) return it->second;
  std::string no_dots;
  for (char c : key)
    if (c != '.') no_dots.push_back(c);
  if (auto it = aliases.find(no_dots); it != aliases.end()) return it->second;
  return std::nullopt;
}

std::string country_of_affiliation(std::string_view affiliation) {
  auto a = text::trim(affiliation);
  // WoS C1 entries start with "[Author; Author]".
  if (!a.empty() && a.front() == '[') {
    if (auto close = a.find(']'); close != std::string_view::npos) a = text::trim(a.substr(close + 1));
  }
  auto comma = a.rfind(',');
  auto last = text::trim(comma == std::string_view::npos ? a : a.substr(comma + 1));
  if (auto c = canonical_country(last)) return *c;
  // "Boston, MA 02115 USA": try trailing word runs of the last token.
  auto words = text::split_trimmed(last, " ");
  for (size_t take = std::min<size_t>(words.size(), 4); take >= 1; --take) {
    std::vector<std::string> tail(words.end() - static_cast<long>(take), words.end());
    if (auto c = canonical_country(text::join(tail, " "))) return *c;
  }
  return std::string(kUnknownCountry);
}

std::optional<std::string> normalize_issn(std::string_view issn) {
  std::string out;
  for (char c : issn) {
    if (c == '-' || c == ' ') continue;
    out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (out.size() != 8) return std::nullopt;
  for (size_t i = 0; i < 7; ++i)
    if (out[i] < '0' || out[i] > '9') return std::nullopt;
  if (!((out[7] >= '0' && out[7] <= '9') || out[7] == 'X')) return std::nullopt;
  return out;
}

}  // namespace scholarscope::ingest
