#include "doctest.h"
#include "fixtures.hpp"
#include "scholarscope/scitrace.hpp"

using namespace scholarscope;
using namespace scholarscope::scitrace;

namespace {

std::map<std::string, std::vector<double>> rows_of(const AnalysisResult& r) {
  std::map<std::string, std::vector<double>> out;
  for (const auto& row : r.rows) out[row.label] = row.values;
  return out;
}

}  // namespace

TEST_CASE("T5 authors") {
  auto t5 = fixtures::t5();
  auto top = author_analysis(t5, AuthorMode::kTopAuthors, 3);
  REQUIRE(top.rows.size() == 3);
  CHECK(top.rows[0].label == "Sharma, Anita");
  CHECK(top.rows[1].label == "Lee, Kevin");
  CHECK(top.rows[2].label == "Muller, Thomas");
  CHECK(top.rows[0].values[0] == 4);

  auto pairs = rows_of(author_analysis(t5, AuthorMode::kPairCollaboration));
  CHECK(pairs.size() == 5);
  CHECK(pairs["Gupta, Rahul -- Sharma, Anita"][0] == 2);
  CHECK(pairs["Gupta, Rahul -- Lee, Kevin"][0] == 1);
  CHECK(pairs["Lee, Kevin -- Sharma, Anita"][0] == 2);

  auto team = rows_of(author_analysis(t5, AuthorMode::kTeamSize));
  CHECK(team["2"][0] == 3);
  CHECK(team["3"][0] == 2);

  auto per = rows_of(author_analysis(t5, AuthorMode::kPapersPerAuthorCount));
  CHECK(per["2"][0] == 1);
  CHECK(per["3"][0] == 2);
  CHECK(per["4"][0] == 1);
}

TEST_CASE("T5 countries") {
  auto t5 = fixtures::t5();
  auto pvc = rows_of(country_analysis(t5, CountryMode::kPapersVsCitations));
  CHECK(pvc["India"] == std::vector<double>{4, 27});
  CHECK(pvc["United States"] == std::vector<double>{3, 19});
  CHECK(pvc["Germany"] == std::vector<double>{3, 10});
  auto lead = rows_of(country_analysis(t5, CountryMode::kLeadCounts));
  CHECK(lead["India"][0] == 3);
  CHECK(lead["Germany"][0] == 1);
  CHECK(lead["United States"][0] == 1);
  auto team = rows_of(country_analysis(t5, CountryMode::kTeamSize));
  CHECK(team["1"][0] == 1);
  CHECK(team["2"][0] == 3);
  CHECK(team["3"][0] == 1);
  auto pairs = rows_of(country_analysis(t5, CountryMode::kPairCollaboration));
  CHECK(pairs["India -- United States"][0] == 2);
  CHECK(pairs["Germany -- United States"][0] == 2);
  CHECK(pairs["Germany -- India"][0] == 2);
}

TEST_CASE("lead counts sum to the records with a resolvable country") {
  auto syn = fixtures::syn50();
  long long with_country = 0;
  for (const auto& r : syn.records()) with_country += distinct_countries(r).empty() ? 0 : 1;
  double total = 0;
  for (const auto& row : country_analysis(syn, CountryMode::kLeadCounts).rows) total += row.values[0];
  CHECK(total == static_cast<double>(with_country));
  double team_total = 0;
  for (const auto& row : author_analysis(syn, AuthorMode::kTeamSize).rows) team_total += row.values[0];
  CHECK(team_total == 50);
}

TEST_CASE("T5 gender with the bundled table") {
  auto t5 = fixtures::t5();
  const auto& table = TableGenderProvider::bundled();
  auto totals = rows_of(gender_analysis(t5, table, GenderMode::kTotals));
  CHECK(totals["female"][0] == 4);
  CHECK(totals["male"][0] == 8);
  CHECK(totals["unknown"][0] == 0);
  auto pos = rows_of(gender_analysis(t5, table, GenderMode::kByPosition));
  CHECK(pos["first"] == std::vector<double>{2, 3, 0});
  CHECK(pos["middle"] == std::vector<double>{0, 2, 0});
  CHECK(pos["last"] == std::vector<double>{2, 3, 0});
  auto by_country = gender_analysis(t5, table, GenderMode::kByCountry, 2);
  CHECK(by_country.rows.size() == 2);
  CHECK(by_country.rows[0].label == "India");
  for (const auto& row : by_country.rows) {
    double s = 0;
    for (double v : row.values) s += v;
    CHECK(s == doctest::Approx(1.0));
  }
}

TEST_CASE("given names and the gender table") {
  CHECK(given_name_of("Sharma, Anita") == "anita");
  CHECK(given_name_of("Anita Sharma") == "anita");
  CHECK(given_name_of("  J.-P. Sartre") == "jp");
  auto t = TableGenderProvider::from_csv("name,country,label,confidence\nandrea,,female,0.6\nandrea,Italy,male,0.9\n");
  CHECK(t.predict("andrea", std::nullopt).label == Gender::kFemale);
  CHECK(t.predict("andrea", "Italy").label == Gender::kMale);
  CHECK(t.predict("zzz", std::nullopt).label == Gender::kUnknown);
  CHECK(t.predict("zzz", std::nullopt).confidence == 0.0);
}

TEST_CASE("HTTP gender provider falls back to unknown when unreachable") {
  HttpGenderProvider p("http://127.0.0.1:9/predict", std::chrono::milliseconds(200));
  CHECK(p.predict("anita", std::nullopt).label == Gender::kUnknown);
}

TEST_CASE("institutes and funding") {
  auto t5 = fixtures::t5();
  auto inst = top_entities(t5, EntityField::kInstitutes, 2);
  REQUIRE(inst.rows.size() == 2);
  CHECK(inst.rows[0].label == "BML Munjal University, Gurugram, India");
  CHECK(inst.rows[0].values[0] == 4);
  auto fund = top_entities(t5, EntityField::kFunding, 10);
  CHECK(fund.rows[0].label == "Science and Engineering Research Board");
  CHECK(fund.meta.at("coverage") == "0.8");
}
