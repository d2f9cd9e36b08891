#include "scholarscope/scitrace.hpp"

#include <algorithm>
#include <mutex>
#include <set>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/http_client.hpp"
#include "scholarscope/resources.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope::scitrace {

namespace {

std::string strip_punctuation(std::string_view s) {
  std::string out;
  for (char ch : s) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c) || c >= 0x80) out.push_back(ch);
  }
  return out;
}

GenderPrediction sanitize(GenderPrediction p) {
  if (p.label == Gender::kUnknown || p.confidence < 0.5) return {Gender::kUnknown, 0.0};
  p.confidence = std::min(p.confidence, 1.0);
  return p;
}

struct AuthorSlot {
  std::string key;
  const std::string* name;
};

std::vector<AuthorSlot> author_slots(const Record& r) {
  std::vector<AuthorSlot> out;
  const bool ids = r.author_ids.size() == r.authors.size();
  for (size_t i = 0; i < r.authors.size(); ++i) {
    std::string key = ids && !r.author_ids[i].empty()
                          ? "id:" + r.author_ids[i]
                          : "name:" + text::to_lower(text::normalize_whitespace(r.authors[i]));
    out.push_back({std::move(key), &r.authors[i]});
  }
  return out;
}

// Country credited to author slot i, if one can be attributed.
std::optional<std::string> author_country(const Record& r, size_t i) {
  auto distinct = distinct_countries(r);
  if (distinct.size() == 1) return distinct.front();
  if (r.countries.size() == r.authors.size() && r.countries[i] != kUnknownCountry) return r.countries[i];
  return std::nullopt;
}

std::optional<std::string> lead_country(const Record& r) {
  for (const auto& c : r.countries)
    if (c != kUnknownCountry && !c.empty()) return c;
  return std::nullopt;
}

std::string pair_label(const std::string& a, const std::string& b) {
  return a <= b ? fmt::format("{}{}{}", a, kPairSeparator, b) : fmt::format("{}{}{}", b, kPairSeparator, a);
}

AnalysisResult histogram(std::string kind, std::string label_column, std::string column,
                         const std::map<long long, double>& bins) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = std::move(label_column);
  r.columns = {std::move(column)};
  for (const auto& [k, n] : bins) r.rows.push_back({std::to_string(k), {n}});
  r.meta["aggregation"] = "none";
  return r;
}

AnalysisResult ranked(std::string kind, std::string label_column, std::string column,
                      const std::map<std::string, double>& counts, size_t top_n = 0) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = std::move(label_column);
  r.columns = {std::move(column)};
  for (const auto& [label, n] : counts) r.rows.push_back({label, {n}});
  sort_by_count_desc(r.rows);
  if (top_n > 0 && r.rows.size() > top_n) r.rows.resize(top_n);
  r.meta["aggregation"] = "none";
  return r;
}

}  // namespace

std::string_view to_string(Gender g) {
  switch (g) {
    case Gender::kFemale: return "female";
    case Gender::kMale: return "male";
    case Gender::kUnknown: return "unknown";
  }
  return "unknown";
}

std::optional<Gender> parse_gender(std::string_view s) {
  auto t = text::to_lower(text::trim(s));
  if (t == "female" || t == "f") return Gender::kFemale;
  if (t == "male" || t == "m") return Gender::kMale;
  if (t == "unknown" || t.empty()) return Gender::kUnknown;
  return std::nullopt;
}

TableGenderProvider TableGenderProvider::from_csv(std::string_view csv_text) {
  TableGenderProvider p;
  for (const auto& row : csv::parse(csv_text)) {
    if (row.empty() || row[0].empty() || row[0].front() == '#' || row.size() < 4) continue;
    auto label = parse_gender(row[2]);
    char* end = nullptr;
    double conf = std::strtod(row[3].c_str(), &end);
    if (!label || end == row[3].c_str()) continue;
    auto pred = sanitize({*label, conf});
    if (pred.label == Gender::kUnknown) continue;
    p.table_[{text::to_lower(text::trim(row[0])), text::to_lower(text::trim(row[1]))}] = pred;
  }
  return p;
}

const TableGenderProvider& TableGenderProvider::bundled() {
  static const TableGenderProvider provider = from_csv(resources::gender_names());
  return provider;
}

GenderPrediction TableGenderProvider::predict(std::string_view given_name,
                                              std::optional<std::string_view> country) const {
  auto name = text::to_lower(text::trim(given_name));
  if (name.empty()) return {};
  if (country) {
    if (auto it = table_.find({name, text::to_lower(*country)}); it != table_.end()) return it->second;
  }
  if (auto it = table_.find({name, ""}); it != table_.end()) return it->second;
  return {};
}

HttpGenderProvider::HttpGenderProvider(std::string url, std::chrono::milliseconds timeout)
    : url_(std::move(url)), timeout_(timeout) {}

GenderPrediction HttpGenderProvider::predict(std::string_view given_name,
                                             std::optional<std::string_view> country) const {
  std::pair<std::string, std::string> key{text::to_lower(given_name),
                                          country ? std::string(*country) : std::string()};
  {
    std::shared_lock lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  GenderPrediction pred;
  try {
    nlohmann::json body = {{"name", key.first},
                           {"country", country ? nlohmann::json(key.second) : nlohmann::json(nullptr)}};
    auto reply = net::post_json(url_, body, timeout_);
    auto label = parse_gender(reply.value("label", std::string("unknown")));
    pred = sanitize({label.value_or(Gender::kUnknown), reply.value("confidence", 0.0)});
  } catch (const std::exception&) {
    return {};
  }
  std::unique_lock lock(mu_);
  cache_.emplace(std::move(key), pred);
  return pred;
}

std::string given_name_of(std::string_view author) {
  auto a = text::trim(author);
  auto comma = a.find(',');
  std::string_view part = comma == std::string_view::npos ? a : text::trim(a.substr(comma + 1));
  auto tokens = text::split_trimmed(part, " ");
  for (const auto& t : tokens) {
    auto cleaned = strip_punctuation(t);
    if (!cleaned.empty()) return text::to_lower(cleaned);
  }
  return {};
}

std::optional<AuthorMode> parse_author_mode(std::string_view s) {
  if (s == "papers_per_author_count") return AuthorMode::kPapersPerAuthorCount;
  if (s == "top_authors") return AuthorMode::kTopAuthors;
  if (s == "team_size") return AuthorMode::kTeamSize;
  if (s == "pair_collaboration") return AuthorMode::kPairCollaboration;
  return std::nullopt;
}

std::optional<CountryMode> parse_country_mode(std::string_view s) {
  if (s == "counts") return CountryMode::kCounts;
  if (s == "lead_counts") return CountryMode::kLeadCounts;
  if (s == "team_size") return CountryMode::kTeamSize;
  if (s == "pair_collaboration") return CountryMode::kPairCollaboration;
  if (s == "papers_vs_citations") return CountryMode::kPapersVsCitations;
  return std::nullopt;
}

std::optional<GenderMode> parse_gender_mode(std::string_view s) {
  if (s == "totals") return GenderMode::kTotals;
  if (s == "by_position") return GenderMode::kByPosition;
  if (s == "by_country") return GenderMode::kByCountry;
  return std::nullopt;
}

std::optional<EntityField> parse_entity_field(std::string_view s) {
  if (s == "institutes") return EntityField::kInstitutes;
  if (s == "funding") return EntityField::kFunding;
  return std::nullopt;
}

AnalysisResult author_analysis(const Corpus& corpus, AuthorMode mode, size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");

  std::map<std::string, std::string> display;  // key -> first-seen name
  std::map<std::string, double> papers;
  for (const auto& r : corpus.records()) {
    std::set<std::string> seen;
    for (auto& slot : author_slots(r)) {
      display.emplace(slot.key, *slot.name);
      if (seen.insert(slot.key).second) papers[slot.key] += 1;
    }
  }

  AnalysisResult result;
  switch (mode) {
    case AuthorMode::kPapersPerAuthorCount: {
      std::map<long long, double> bins;
      for (auto& [key, k] : papers) bins[static_cast<long long>(k)] += 1;
      result = histogram("authors", "papers", "authors", bins);
      result.meta["mode"] = "papers_per_author_count";
      break;
    }
    case AuthorMode::kTopAuthors: {
      std::map<std::string, double> by_name;
      for (auto& [key, k] : papers) {
        // Different ids may share a display name; keep them apart.
        std::string label = display[key];
        if (by_name.contains(label)) label = fmt::format("{} [{}]", label, key);
        by_name[label] = k;
      }
      result = ranked("authors", "author", "papers", by_name, n);
      result.meta["mode"] = "top_authors";
      result.meta["n"] = std::to_string(n);
      break;
    }
    case AuthorMode::kTeamSize: {
      std::map<long long, double> bins;
      for (const auto& r : corpus.records())
        if (!r.authors.empty()) bins[static_cast<long long>(r.authors.size())] += 1;
      result = histogram("authors", "team_size", "papers", bins);
      result.meta["mode"] = "team_size";
      break;
    }
    case AuthorMode::kPairCollaboration: {
      std::map<std::string, double> pairs;
      for (const auto& r : corpus.records()) {
        std::vector<std::string> names;
        std::set<std::string> keys;
        for (auto& slot : author_slots(r))
          if (keys.insert(slot.key).second) names.push_back(display[slot.key]);
        for (size_t i = 0; i < names.size(); ++i)
          for (size_t j = i + 1; j < names.size(); ++j) pairs[pair_label(names[i], names[j])] += 1;
      }
      result = ranked("authors", "pair", "joint_papers", pairs);
      result.meta["mode"] = "pair_collaboration";
      break;
    }
  }
  result.meta["analysis"] = "author_analysis";
  return result;
}

AnalysisResult country_analysis(const Corpus& corpus, CountryMode mode) {
  AnalysisResult result;
  switch (mode) {
    case CountryMode::kCounts: {
      std::map<std::string, double> counts;
      for (const auto& r : corpus.records())
        for (const auto& c : distinct_countries(r)) counts[c] += 1;
      result = ranked("countries", "country", "papers", counts);
      result.meta["mode"] = "counts";
      result.meta["counting"] = "whole";
      break;
    }
    case CountryMode::kLeadCounts: {
      std::map<std::string, double> counts;
      for (const auto& r : corpus.records())
        if (auto c = lead_country(r)) counts[*c] += 1;
      result = ranked("countries", "country", "led_papers", counts);
      result.meta["mode"] = "lead_counts";
      break;
    }
    case CountryMode::kTeamSize: {
      std::map<long long, double> bins;
      for (const auto& r : corpus.records()) {
        auto n = distinct_countries(r).size();
        if (n > 0) bins[static_cast<long long>(n)] += 1;
      }
      result = histogram("countries", "countries_per_paper", "papers", bins);
      result.meta["mode"] = "team_size";
      break;
    }
    case CountryMode::kPairCollaboration: {
      std::map<std::string, double> pairs;
      for (const auto& r : corpus.records()) {
        auto cs = distinct_countries(r);
        for (size_t i = 0; i < cs.size(); ++i)
          for (size_t j = i + 1; j < cs.size(); ++j) pairs[pair_label(cs[i], cs[j])] += 1;
      }
      result = ranked("countries", "pair", "joint_papers", pairs);
      result.meta["mode"] = "pair_collaboration";
      break;
    }
    case CountryMode::kPapersVsCitations: {
      std::map<std::string, std::pair<double, double>> acc;
      for (const auto& r : corpus.records()) {
        for (const auto& c : distinct_countries(r)) {
          acc[c].first += 1;
          acc[c].second += static_cast<double>(r.citations);
        }
      }
      result.kind = "countries";
      result.label_column = "country";
      result.columns = {"papers", "citations"};
      for (auto& [c, pc] : acc) result.rows.push_back({c, {pc.first, pc.second}});
      sort_by_count_desc(result.rows);
      result.meta["mode"] = "papers_vs_citations";
      result.meta["aggregation"] = "none";
      break;
    }
  }
  result.meta["analysis"] = "country_analysis";
  return result;
}

AnalysisResult gender_analysis(const Corpus& corpus, const GenderProvider& provider, GenderMode mode,
                               size_t top_k) {
  if (top_k < 1) throw Error(ErrorCode::kInvalidArgument, "top_k must be at least 1");
  static const std::vector<std::string> kGenderColumns = {"female", "male", "unknown"};
  auto col = [](Gender g) { return static_cast<size_t>(g); };

  AnalysisResult result;
  result.kind = "gender";
  result.meta["analysis"] = "gender_analysis";
  result.meta["provider"] = provider.identifier();
  result.meta["denominator"] = "author_slots";
  result.meta["aggregation"] = "none";

  auto predict_slot = [&](const Record& r, size_t i) {
    auto country = author_country(r, i);
    std::optional<std::string_view> cv;
    if (country) cv = *country;
    return provider.predict(given_name_of(r.authors[i]), cv).label;
  };

  switch (mode) {
    case GenderMode::kTotals: {
      std::array<double, 3> counts{};
      for (const auto& r : corpus.records())
        for (size_t i = 0; i < r.authors.size(); ++i) counts[col(predict_slot(r, i))] += 1;
      double total = counts[0] + counts[1] + counts[2];
      result.label_column = "gender";
      result.columns = {"authors", "proportion"};
      for (Gender g : {Gender::kFemale, Gender::kMale, Gender::kUnknown})
        result.rows.push_back({std::string(to_string(g)), {counts[col(g)], total > 0 ? counts[col(g)] / total : 0.0}});
      result.meta["mode"] = "totals";
      break;
    }
    case GenderMode::kByPosition: {
      std::array<std::array<double, 3>, 3> cells{};  // first, middle, last
      for (const auto& r : corpus.records()) {
        const size_t n = r.authors.size();
        for (size_t i = 0; i < n; ++i) {
          size_t g = col(predict_slot(r, i));
          if (i == 0) cells[0][g] += 1;
          if (i == n - 1) cells[2][g] += 1;
          if (i != 0 && i != n - 1) cells[1][g] += 1;
        }
      }
      result.label_column = "position";
      result.columns = kGenderColumns;
      const char* names[] = {"first", "middle", "last"};
      for (size_t p = 0; p < 3; ++p)
        result.rows.push_back({names[p], {cells[p][0], cells[p][1], cells[p][2]}});
      result.meta["mode"] = "by_position";
      result.meta["single_author_rule"] = "counted as first and last";
      break;
    }
    case GenderMode::kByCountry: {
      auto countries = country_analysis(corpus, CountryMode::kCounts);
      if (countries.rows.size() > top_k) countries.rows.resize(top_k);
      std::map<std::string, std::array<double, 3>> cells;
      for (const auto& row : countries.rows) cells[row.label] = {};
      for (const auto& r : corpus.records()) {
        for (size_t i = 0; i < r.authors.size(); ++i) {
          auto c = author_country(r, i);
          if (!c) continue;
          auto it = cells.find(*c);
          if (it == cells.end()) continue;
          it->second[col(predict_slot(r, i))] += 1;
        }
      }
      result.label_column = "country";
      result.columns = kGenderColumns;
      for (const auto& row : countries.rows) {
        auto& c = cells[row.label];
        double total = c[0] + c[1] + c[2];
        std::vector<double> props(3, 0.0);
        if (total > 0)
          for (size_t g = 0; g < 3; ++g) props[g] = c[g] / total;
        result.rows.push_back({row.label, props});
      }
      result.meta["mode"] = "by_country";
      result.meta["top_k"] = std::to_string(top_k);
      break;
    }
  }
  return result;
}

AnalysisResult top_entities(const Corpus& corpus, EntityField field, size_t n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be at least 1");
  std::map<std::string, double> counts;
  size_t covered = 0;
  for (const auto& r : corpus.records()) {
    const auto& values = field == EntityField::kInstitutes ? r.affiliations : r.funding;
    std::set<std::string> distinct;
    for (const auto& v : values) {
      auto norm = text::normalize_whitespace(v);
      if (!norm.empty()) distinct.insert(norm);
    }
    if (!distinct.empty()) ++covered;
    for (const auto& v : distinct) counts[v] += 1;
  }
  const bool institutes = field == EntityField::kInstitutes;
  auto result = ranked(institutes ? "institutes" : "funding", institutes ? "institute" : "funder", "papers",
                       counts, n);
  result.meta["analysis"] = "top_entities";
  result.meta["field"] = institutes ? "institutes" : "funding";
  result.meta["n"] = std::to_string(n);
  result.meta["coverage"] = corpus.empty() ? "0" : fmt::format("{}", static_cast<double>(covered) / static_cast<double>(corpus.size()));
  return result;
}

}  // namespace scholarscope::scitrace
