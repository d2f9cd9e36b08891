#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/csv.hpp"

namespace scholarscope::ingest {

enum class SourceKind { kScopus, kWos, kGenericCsv };

std::string_view to_string(SourceKind kind);
// Accepts "scopus", "wos", "csv" and "generic_csv".
std::optional<SourceKind> parse_source_kind(std::string_view name);

struct RawTable {
  std::vector<std::string> headers;
  std::vector<csv::Row> rows;
  std::string source_label;
  SourceKind source_kind = SourceKind::kGenericCsv;

  bool operator==(const RawTable&) const = default;
};

// Decodes one export file. Scopus and generic files are RFC 4180 CSV; WoS
// files are either tab-delimited or field-tagged plain text (auto-detected).
// Rows are padded to the header width; rows wider than the header extend it
// with "column_N" headers. Blank rows are skipped.
RawTable parse_delimited(std::string_view bytes, SourceKind kind, std::string source_label = {});

// RFC 4180 serialization of a table (header row first). Reparsing the output
// as generic CSV reproduces headers and rows exactly.
std::string serialize(const RawTable& table);

enum class Field {
  kTitle,
  kAuthors,
  kAuthorIds,
  kAffiliations,
  kCountries,
  kYear,
  kSourceTitle,
  kIssn,
  kDoi,
  kCitations,
  kDocType,
  kPublisher,
  kOpenAccess,
  kLanguage,
  kAuthorKeywords,
  kIndexKeywords,
  kAbstract,
  kFunding,
};
inline constexpr size_t kFieldCount = 18;
inline constexpr std::array<Field, kFieldCount> kAllFields = {
    Field::kTitle,        Field::kAuthors,        Field::kAuthorIds,     Field::kAffiliations,
    Field::kCountries,    Field::kYear,           Field::kSourceTitle,   Field::kIssn,
    Field::kDoi,          Field::kCitations,      Field::kDocType,       Field::kPublisher,
    Field::kOpenAccess,   Field::kLanguage,       Field::kAuthorKeywords, Field::kIndexKeywords,
    Field::kAbstract,     Field::kFunding,
};

std::string_view field_name(Field f);
std::optional<Field> field_from_name(std::string_view name);
bool is_multi_valued(Field f);

struct FieldMapping {
  // Source column per canonical field; nullopt means ABSENT.
  std::array<std::optional<std::string>, kFieldCount> assignments;
  // Separator used to split multi-valued cells of each field.
  std::array<std::string, kFieldCount> delimiters;

  const std::optional<std::string>& column(Field f) const {
    return assignments[static_cast<size_t>(f)];
  }
  std::optional<std::string>& column(Field f) { return assignments[static_cast<size_t>(f)]; }
  const std::string& delimiter(Field f) const { return delimiters[static_cast<size_t>(f)]; }
  std::string& delimiter(Field f) { return delimiters[static_cast<size_t>(f)]; }

  static FieldMapping defaults_for(SourceKind kind);
  bool operator==(const FieldMapping&) const = default;
};

void to_json(nlohmann::json& j, const FieldMapping& m);
// Missing fields stay ABSENT; missing delimiters take the generic default.
void from_json(const nlohmann::json& j, FieldMapping& m);

FieldMapping infer_field_mapping(const RawTable& table);

// Checks the structural rules (columns exist, one field per column, title or
// DOI present) and the integer parse-rate rule for year and citations.
void validate_mapping(const RawTable& table, const FieldMapping& mapping);

std::vector<Record> apply_mapping(const RawTable& table, const FieldMapping& mapping);

enum class MatchBasis { kDoi, kTitleYear };
std::string_view to_string(MatchBasis basis);

struct DuplicateGroup {
  std::string kept_record_id;
  std::vector<std::string> dropped_record_ids;
  MatchBasis match_basis = MatchBasis::kDoi;

  bool operator==(const DuplicateGroup&) const = default;
};

struct DedupReport {
  long long input_count = 0;
  long long kept = 0;
  std::vector<DuplicateGroup> duplicate_groups;

  bool operator==(const DedupReport&) const = default;
};

void to_json(nlohmann::json& j, const DedupReport& report);

struct MergeResult {
  Corpus corpus;
  DedupReport report;
};

// Each inner list is one source file, in upload order.
MergeResult merge_and_dedup(const std::vector<std::vector<Record>>& record_lists);

// DOI as compared for deduplication: lowercase, resolver prefix removed.
std::string normalize_doi(std::string_view doi);
// Returns the canonical country for an affiliation string or "Unknown".
std::string country_of_affiliation(std::string_view affiliation);
// Canonical name for a country name or alias, if known.
std::optional<std::string> canonical_country(std::string_view name);
// 8-character ISSN or nullopt when the input does not normalize to one.
std::optional<std::string> normalize_issn(std::string_view issn);

}  // namespace scholarscope::ingest
