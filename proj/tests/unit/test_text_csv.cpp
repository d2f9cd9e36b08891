#include <random>

#include "doctest.h"
#include "scholarscope/csv.hpp"
#include "scholarscope/text.hpp"

using namespace scholarscope;

TEST_CASE("csv reader handles quoting, CRLF and embedded newlines") {
  auto rows = csv::parse("a,\"b,c\",\"d\"\"e\"\r\n1,\"two\nlines\",3\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == csv::Row{"a", "b,c", "d\"e"});
  CHECK(rows[1] == csv::Row{"1", "two\nlines", "3"});
}

TEST_CASE("csv reader keeps a stray quote inside an unquoted field") {
  auto rows = csv::parse("ab\"c,d");
  CHECK(rows[0] == csv::Row{"ab\"c", "d"});
}

TEST_CASE("tab dialect without quoting treats quotes as data") {
  auto rows = csv::parse("TI\tSO\n\"Quoted\" title\tJ\n", {.delimiter = '\t', .quoting = false});
  CHECK(rows[1][0] == "\"Quoted\" title");
}

TEST_CASE("csv write then parse is the identity on random tables") {
  std::mt19937_64 rng(3);
  const std::string alphabet = "ab ,\"\n\r;x\t";
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<csv::Row> rows(1 + rng() % 4, csv::Row(1 + rng() % 4));
    const size_t width = rows[0].size();
    for (auto& r : rows) {
      r.resize(width);
      for (auto& cell : r)
        for (size_t k = rng() % 6; k > 0; --k) cell += alphabet[rng() % alphabet.size()];
    }
    // A single empty cell on a line is indistinguishable from a blank line.
    for (auto& r : rows)
      if (width == 1 && r[0].empty()) r[0] = "x";
    CHECK(csv::parse(csv::write(rows)) == rows);
  }
}

TEST_CASE("text helpers") {
  CHECK(text::normalize_whitespace("  a \t b\n c ") == "a b c");
  CHECK(text::split_trimmed(" a ; ; b;", ";") == std::vector<std::string>{"a", "b"});
  CHECK(text::parse_int(" 42 ") == 42);
  CHECK_FALSE(text::parse_int("4x2"));
  CHECK_FALSE(text::parse_int(""));
  CHECK(text::is_valid_utf8("Müller"));
  CHECK_FALSE(text::is_valid_utf8("\xff\xfe"));
  CHECK(text::strip_bom("\xEF\xBB\xBFTitle") == "Title");
  CHECK(text::tokenize("Graph-mining, 2020!") == std::vector<std::string>{"graph", "mining", "2020"});
  CHECK(text::alnum_key("The Title: A Study") == "thetitleastudy");
}
