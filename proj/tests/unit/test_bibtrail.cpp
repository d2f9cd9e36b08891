#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/error.hpp"

using namespace scholarscope;
using namespace scholarscope::bibtrail;

namespace {

std::vector<std::string> labels(const AnalysisResult& r) {
  std::vector<std::string> out;
  for (const auto& row : r.rows) out.push_back(row.label);
  return out;
}
std::vector<double> firsts(const AnalysisResult& r) {
  std::vector<double> out;
  for (const auto& row : r.rows) out.push_back(row.values.at(0));
  return out;
}
long long dated(const Corpus& c) {
  return std::count_if(c.records().begin(), c.records().end(), [](const Record& r) { return r.year.has_value(); });
}

}  // namespace

TEST_CASE("T5 publication series") {
  auto t5 = fixtures::t5();
  auto yearly = publications_series(t5, PublicationMode::kTotal);
  CHECK(labels(yearly) == std::vector<std::string>{"2019", "2020", "2021", "2022"});
  CHECK(firsts(yearly) == std::vector<double>{1, 1, 2, 1});
  auto gap2 = publications_series(t5, PublicationMode::kTotal, 2);
  CHECK(labels(gap2) == std::vector<std::string>{"2019-2020", "2021-2022"});
  CHECK(firsts(gap2) == std::vector<double>{2, 3});
  CHECK(firsts(publications_series(t5, PublicationMode::kCumulative)) == std::vector<double>{1, 2, 4, 5});
  CHECK(yearly.meta.at("axis") == "year");
}

TEST_CASE("T5 citation series") {
  auto t5 = fixtures::t5();
  CHECK(firsts(citations_series(t5, CitationMode::kTotal)) == std::vector<double>{12, 5, 3, 7});
  auto p = firsts(citations_series(t5, CitationMode::kProportion));
  CHECK(p[0] == doctest::Approx(12.0 / 27));
  CHECK(p[3] == doctest::Approx(7.0 / 27));
  CHECK(firsts(citations_series(t5, CitationMode::kAverage)) == std::vector<double>{12, 5, 1.5, 7});
  CHECK(firsts(citations_series(t5, CitationMode::kMedian)) == std::vector<double>{12, 5, 1.5, 7});
  auto dist = citations_series(t5, CitationMode::kYearwiseDistribution);
  CHECK(dist.shape == ResultShape::kDistribution);
  CHECK(dist.rows[2].values == std::vector<double>{0, 3});
}

TEST_CASE("T5 document types") {
  auto t5 = fixtures::t5();
  auto total = doc_type_analysis(t5, DocTypeMode::kTotal);
  CHECK(labels(total) == std::vector<std::string>{"Article", "Conference Paper", "Review"});
  CHECK(firsts(total) == std::vector<double>{3, 1, 1});
  auto vs = doc_type_analysis(t5, DocTypeMode::kVsCitations);
  CHECK(vs.rows[0].values == std::vector<double>{12, 5, 3});
  auto decade = doc_type_analysis(t5, DocTypeMode::kDecadewise);
  CHECK(labels(decade) == std::vector<std::string>{"2010", "2020"});
  CHECK(decade.rows[1].values == std::vector<double>{2, 1, 1});
}

TEST_CASE("quartile pipeline T5 + SCI3") {
  auto t5 = fixtures::t5();
  auto index = fixtures::sci3();
  CHECK(index.entries.size() == 4);
  CHECK(index.entries.at("15882861") == Quartile::kQ1);
  auto q = journal_analysis(t5, &index, JournalMode::kQuartileCounts);
  CHECK(labels(q) == std::vector<std::string>{"Q1", "Q2", "Q3", "Q4", "Unranked"});
  CHECK(firsts(q) == std::vector<double>{3, 1, 0, 0, 1});
  auto sum = firsts(q);
  CHECK(std::accumulate(sum.begin(), sum.end(), 0.0) == 5);

  auto top = journal_analysis(t5, &index, JournalMode::kTopInQuartile, Quartile::kQ1);
  CHECK(labels(top) == std::vector<std::string>{"Scientometrics", "Journal of Informetrics"});
  auto yearly = journal_analysis(t5, &index, JournalMode::kQuartileYearly);
  CHECK(yearly.meta.at("axis") == "year");

  auto tops = journal_analysis(t5, nullptr, JournalMode::kTopJournals, Quartile::kQ1, 2);
  CHECK(labels(tops) == std::vector<std::string>{"Scientometrics", "IEEE Access"});
  CHECK_THROWS_AS(journal_analysis(t5, nullptr, JournalMode::kQuartileCounts), Error);
}

TEST_CASE("malformed Scimago files are rejected") {
  CHECK_THROWS_AS(load_scimago("Title;Rank\nx;1\n"), Error);
  CHECK_THROWS_AS(load_scimago(""), Error);
}

TEST_CASE("categorical counts") {
  auto t5 = fixtures::t5();
  auto pub = categorical_counts(t5, CategoricalField::kPublisher, false);
  CHECK(labels(pub) == std::vector<std::string>{"Springer", "Elsevier", "IEEE", "Public Library of Science"});
  auto oa = categorical_counts(t5, CategoricalField::kOpenAccess, false);
  CHECK(labels(oa) == std::vector<std::string>{"Gold", "Green", "Unspecified"});
  CHECK(firsts(oa) == std::vector<double>{3, 1, 1});
  auto oa_cites = categorical_counts(t5, CategoricalField::kOpenAccess, true);
  CHECK(oa_cites.shape == ResultShape::kDistribution);
  CHECK(labels(oa_cites) == std::vector<std::string>{"Gold", "Green", "Unspecified"});
  CHECK_THROWS_AS(categorical_counts(t5, CategoricalField::kLanguage, true), Error);
}

TEST_CASE("series invariants on SYN50 for every gap") {
  auto syn = fixtures::syn50();
  const auto n_dated = dated(syn);
  CHECK(n_dated == 47);
  for (int gap = 1; gap <= 5; ++gap) {
    auto total = publications_series(syn, PublicationMode::kTotal, gap);
    auto t = firsts(total);
    CHECK(std::accumulate(t.begin(), t.end(), 0.0) == static_cast<double>(n_dated));
    CHECK(total.meta.at("excluded_undated") == "3");

    auto prop = firsts(publications_series(syn, PublicationMode::kProportion, gap));
    CHECK(std::abs(std::accumulate(prop.begin(), prop.end(), 0.0) - 1.0) <= 1e-9);

    auto cum = firsts(publications_series(syn, PublicationMode::kCumulative, gap));
    for (size_t i = 1; i < cum.size(); ++i) CHECK(cum[i] >= cum[i - 1]);
    CHECK(cum.back() == static_cast<double>(n_dated));
  }
  auto cprop = firsts(citations_series(syn, CitationMode::kProportion));
  auto ctot = firsts(citations_series(syn, CitationMode::kTotal));
  auto ccum = firsts(citations_series(syn, CitationMode::kCumulative));
  for (size_t i = 1; i < ccum.size(); ++i) CHECK(ccum[i] >= ccum[i - 1]);
  CHECK(ccum.back() == std::accumulate(ctot.begin(), ctot.end(), 0.0));
  CHECK(std::accumulate(cprop.begin(), cprop.end(), 0.0) <= 1.0 + 1e-9);
}

TEST_CASE("a corpus with no dated records gives an empty series") {
  Corpus c({fixtures::record("a", "x")});
  auto r = publications_series(c, PublicationMode::kTotal);
  CHECK(r.rows.empty());
  CHECK(r.meta.at("excluded_undated") == "1");
}
