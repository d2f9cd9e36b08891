#include "doctest.h"
#include "fixtures.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/error.hpp"

using namespace scholarscope;

TEST_CASE("T5 corpus statistics") {
  auto s = summarize_corpus(fixtures::t5());
  CHECK(s.n_records == 5);
  CHECK(s.n_distinct_authors == 4);
  CHECK(s.n_distinct_institutions == 3);
  CHECK(s.n_distinct_countries == 3);
  CHECK(s.n_distinct_journals == 4);
  CHECK(s.year_min == 2019);
  CHECK(s.year_max == 2022);
}

TEST_CASE("filters") {
  auto t5 = fixtures::t5();
  FilterSpec spec;
  spec.year_range = std::array{2020, 2021};
  auto f = filter(t5, spec);
  REQUIRE(f.size() == 3);
  CHECK(f[0].title == "Topic modeling of scholarly abstracts");
  CHECK(f[2].title == "Bibliometric indicators in German research");

  FilterSpec lang;
  lang.languages = std::vector<std::string>{"german"};
  CHECK(filter(t5, lang).size() == 1);

  FilterSpec combo;
  combo.countries = std::vector<std::string>{"United States"};
  combo.min_citations = 5;
  CHECK(filter(t5, combo).size() == 2);

  FilterSpec kw;
  kw.keyword_contains = std::vector<std::string>{"mining"};
  CHECK(filter(t5, kw).size() == 3);

  FilterSpec journals;
  journals.journals = std::vector<std::string>{"SCIENTOMETRICS"};
  journals.doc_types = std::vector<std::string>{"article"};
  CHECK(filter(t5, journals).size() == 2);

  CHECK(filter(t5, FilterSpec{}) == t5);
}

TEST_CASE("filter properties on SYN50") {
  auto syn = fixtures::syn50();
  for (int lo = 1998; lo <= 2023; lo += 5) {
    FilterSpec spec;
    spec.year_range = std::array{lo, lo + 4};
    auto f = filter(syn, spec);
    // Order preserved, every kept record matches, every dropped one does not.
    size_t j = 0;
    for (const auto& r : syn.records()) {
      if (matches(r, spec)) {
        REQUIRE(j < f.size());
        CHECK(f[j++] == r);
      }
    }
    CHECK(j == f.size());
    CHECK(filter(f, spec) == f);
  }
}

TEST_CASE("invalid filter specs name the field") {
  FilterSpec spec;
  spec.year_range = std::array{2022, 2019};
  try {
    spec.validate();
    FAIL("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSpec);
    CHECK(std::string(e.what()).find("year_range") != std::string::npos);
  }
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"colour":1})").get<FilterSpec>(), Error);
  CHECK_THROWS_AS(nlohmann::json::parse(R"({"doc_types":"Article"})").get<FilterSpec>(), Error);
}

TEST_CASE("FilterSpec JSON round trip") {
  FilterSpec spec;
  spec.year_range = std::array{2000, 2010};
  spec.countries = std::vector<std::string>{"India"};
  spec.min_citations = 3;
  CHECK(nlohmann::json(spec).get<FilterSpec>() == spec);
}

TEST_CASE("corpus CSV round trip") {
  for (const auto& c : {fixtures::t5(), fixtures::syn50()}) {
    auto text = write_corpus_csv(c);
    auto back = read_corpus_csv(text);
    CHECK(back == c);
    CHECK(write_corpus_csv(back) == text);
  }
}
