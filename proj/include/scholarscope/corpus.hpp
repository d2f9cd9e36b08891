#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace scholarscope {

// One publication after mapping. All normalizations (lowercase keywords,
// 8-character ISSNs, DOI without resolver prefix) are applied at construction
// time by the ingest module, so analyses can compare fields directly.
struct Record {
  std::string id;
  std::string title;
  std::vector<std::string> authors;
  std::vector<std::string> author_ids;  // parallel to authors when present
  std::vector<std::string> affiliations;
  // Country per affiliation (or per author when the export carries an explicit
  // country column). Unresolvable entries hold kUnknownCountry.
  std::vector<std::string> countries;
  std::optional<int> year;
  std::string source_title;
  std::vector<std::string> issn;
  std::optional<std::string> doi;
  long long citations = 0;
  std::string doc_type;
  std::string publisher;
  std::string open_access;
  std::string language;
  std::vector<std::string> author_keywords;
  std::vector<std::string> index_keywords;
  std::string abstract;
  std::vector<std::string> funding;
  std::string source_label;

  bool operator==(const Record&) const = default;
};

inline constexpr std::string_view kUnknownCountry = "Unknown";
inline constexpr std::string_view kUnspecified = "Unspecified";

// Distinct countries of a record in first-seen order, excluding "Unknown".
std::vector<std::string> distinct_countries(const Record& r);
// Distinct author keywords followed by index keywords, first-seen order.
std::vector<std::string> distinct_keywords(const Record& r);

// Immutable, cheaply copyable set of records plus the labels of the files they
// came from. Copies share storage.
class Corpus {
 public:
  Corpus();
  explicit Corpus(std::vector<Record> records, std::vector<std::string> sources = {});

  std::span<const Record> records() const { return *records_; }
  size_t size() const { return records_->size(); }
  bool empty() const { return records_->empty(); }
  const Record& operator[](size_t i) const { return (*records_)[i]; }
  const std::vector<std::string>& sources() const { return *sources_; }

  bool operator==(const Corpus& other) const {
    return *records_ == *other.records_ && *sources_ == *other.sources_;
  }

 private:
  std::shared_ptr<const std::vector<Record>> records_;
  std::shared_ptr<const std::vector<std::string>> sources_;
};

struct FilterSpec {
  std::optional<std::array<int, 2>> year_range;
  std::optional<std::vector<std::string>> doc_types;
  std::optional<std::vector<std::string>> languages;
  std::optional<std::vector<std::string>> countries;
  std::optional<std::vector<std::string>> journals;
  std::optional<long long> min_citations;
  std::optional<std::vector<std::string>> keyword_contains;

  bool empty() const;
  // Throws Error(kInvalidSpec) naming the offending field.
  void validate() const;
  bool operator==(const FilterSpec&) const = default;
};

struct CorpusStats {
  long long n_records = 0;
  long long n_distinct_authors = 0;
  long long n_distinct_institutions = 0;
  long long n_distinct_countries = 0;
  long long n_distinct_journals = 0;
  std::optional<int> year_min;
  std::optional<int> year_max;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats summarize_corpus(const Corpus& corpus);

// Conjunction of every present criterion. Set-valued criteria compare
// case-insensitively. Record order is preserved.
Corpus filter(const Corpus& corpus, const FilterSpec& spec);
bool matches(const Record& record, const FilterSpec& spec);

// Canonical corpus CSV: id, source_label, then one column per canonical field,
// multi-valued fields joined with "; ".
std::string write_corpus_csv(const Corpus& corpus);
Corpus read_corpus_csv(std::string_view data);

void to_json(nlohmann::json& j, const FilterSpec& spec);
void from_json(const nlohmann::json& j, FilterSpec& spec);
void to_json(nlohmann::json& j, const CorpusStats& stats);
void to_json(nlohmann::json& j, const Record& record);

}  // namespace scholarscope
