#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>

#include "scholarscope/analysis_result.hpp"
#include "scholarscope/corpus.hpp"

// Scientometric analyses: authorship, team size, countries, gender,
// institutes and funding bodies.
namespace scholarscope::scitrace {

enum class Gender { kFemale, kMale, kUnknown };
std::string_view to_string(Gender g);
std::optional<Gender> parse_gender(std::string_view s);

struct GenderPrediction {
  Gender label = Gender::kUnknown;
  double confidence = 0.0;  // 0 for unknown, otherwise >= 0.5

  bool operator==(const GenderPrediction&) const = default;
};

// Predicts the likely gender for a given name, optionally conditioned on a
// country. Implementations must be deterministic for fixed inputs.
class GenderProvider {
 public:
  virtual ~GenderProvider() = default;
  virtual GenderPrediction predict(std::string_view given_name,
                                   std::optional<std::string_view> country) const = 0;
  virtual std::string identifier() const = 0;
};

// Offline lookup table. CSV rows: name,country,label,confidence where an
// empty country applies everywhere. Country-specific rows win.
class TableGenderProvider final : public GenderProvider {
 public:
  static TableGenderProvider from_csv(std::string_view csv_text);
  static const TableGenderProvider& bundled();

  GenderPrediction predict(std::string_view given_name,
                           std::optional<std::string_view> country) const override;
  std::string identifier() const override { return "table"; }
  size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, GenderPrediction> table_;
};

// Remote model: POST {"name","country"} -> {"label","confidence"}. Replies are
// memoized; transport failures yield unknown (not cached).
class HttpGenderProvider final : public GenderProvider {
 public:
  explicit HttpGenderProvider(std::string url, std::chrono::milliseconds timeout = std::chrono::seconds(5));

  GenderPrediction predict(std::string_view given_name,
                           std::optional<std::string_view> country) const override;
  std::string identifier() const override { return "http:" + url_; }

 private:
  std::string url_;
  std::chrono::milliseconds timeout_;
  mutable std::shared_mutex mu_;
  mutable std::map<std::pair<std::string, std::string>, GenderPrediction> cache_;
};

// Given name of an author string: the token after the comma for
// "Surname, Given", otherwise the first whitespace token. Punctuation is
// stripped and the result lowercased.
std::string given_name_of(std::string_view author);

enum class AuthorMode { kPapersPerAuthorCount, kTopAuthors, kTeamSize, kPairCollaboration };
enum class CountryMode { kCounts, kLeadCounts, kTeamSize, kPairCollaboration, kPapersVsCitations };
enum class GenderMode { kTotals, kByPosition, kByCountry };
enum class EntityField { kInstitutes, kFunding };

std::optional<AuthorMode> parse_author_mode(std::string_view s);
std::optional<CountryMode> parse_country_mode(std::string_view s);
std::optional<GenderMode> parse_gender_mode(std::string_view s);
std::optional<EntityField> parse_entity_field(std::string_view s);

// Labels of pair rows: "a -- b" with a <= b.
inline constexpr std::string_view kPairSeparator = " -- ";

// `n` bounds kTopAuthors (>= 1).
AnalysisResult author_analysis(const Corpus& corpus, AuthorMode mode, size_t n = 10);
AnalysisResult country_analysis(const Corpus& corpus, CountryMode mode);
// `top_k` bounds kByCountry.
AnalysisResult gender_analysis(const Corpus& corpus, const GenderProvider& provider, GenderMode mode,
                               size_t top_k = 10);
AnalysisResult top_entities(const Corpus& corpus, EntityField field, size_t n);

}  // namespace scholarscope::scitrace
