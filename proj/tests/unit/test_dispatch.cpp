#include "doctest.h"
#include "fixtures.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/centrality.hpp"
#include "scholarscope/community.hpp"
#include "scholarscope/dispatch.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/scitrace.hpp"
#include "scholarscope/themantix.hpp"

using namespace scholarscope;
using nlohmann::json;

TEST_CASE("dispatch matches direct library calls") {
  auto t5 = fixtures::t5();
  auto sci = fixtures::sci3();
  dispatch::Context ctx{&sci, nullptr};
  auto run = [&](const char* m, const char* op, json params) { return dispatch::run(t5, m, op, params, ctx); };

  CHECK(run("bibtrail", "publications_series", {{"mode", "total"}}) ==
        bibtrail::publications_series(t5, bibtrail::PublicationMode::kTotal));
  CHECK(run("bibtrail", "publications_series", {{"mode", "cumulative"}, {"year_gap", 3}}) ==
        bibtrail::publications_series(t5, bibtrail::PublicationMode::kCumulative, 3));
  CHECK(run("bibtrail", "journal_analysis", {{"mode", "quartile_counts"}}) ==
        bibtrail::journal_analysis(t5, &sci, bibtrail::JournalMode::kQuartileCounts));
  CHECK(run("scitrace", "author_analysis", {{"mode", "top_authors"}, {"n", 2}}) ==
        scitrace::author_analysis(t5, scitrace::AuthorMode::kTopAuthors, 2));
  CHECK(run("scitrace", "gender_analysis", json::object()) ==
        scitrace::gender_analysis(t5, scitrace::TableGenderProvider::bundled(), scitrace::GenderMode::kTotals));
  CHECK(run("themantix", "keyword_frequencies", {{"n", 5}}) ==
        themantix::keyword_frequencies(t5, themantix::KeywordSource::kBoth, 5));

  auto g = colabrix::build_graph(t5, colabrix::NetworkLevel::kAuthor);
  CHECK(run("colabrix", "build_graph", json::object()) == colabrix::network_result(g));
  auto cent = colabrix::centrality_result(colabrix::centrality(g, colabrix::Measure::kBetweenness));
  colabrix::attach_graph(cent, g);
  CHECK(run("colabrix", "centrality", {{"measure", "betweenness"}}) == cent);
  auto p = colabrix::detect_communities(g, colabrix::CommunityMethod::kLeiden);
  CHECK(run("colabrix", "detect_communities", json::object()) == colabrix::partition_result(g, p));

  auto kw = run("colabrix", "build_graph", {{"level", "keyword"}, {"min_edge_weight", 2}});
  CHECK(kw.rows.size() == 3);
  auto q = run("colabrix", "modularity",
               {{"partition", {{"Gupta, Rahul", 0}, {"Sharma, Anita", 0}, {"Lee, Kevin", 1}, {"Muller, Thomas", 1}}}});
  CHECK(q.rows[0].values[0] == doctest::Approx(colabrix::modularity(g, {0, 1, 1, 0})));
}

TEST_CASE("dispatch rejects bad requests") {
  auto t5 = fixtures::t5();
  auto code = [&](const char* m, const char* op, json params) {
    try {
      dispatch::run(t5, m, op, params);
    } catch (const Error& e) {
      return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::kInvalidArgument;
  };
  CHECK(code("bibtrail", "nope", json::object()) == ErrorCode::kInvalidArgument);
  CHECK(code("nope", "publications_series", json::object()) == ErrorCode::kInvalidArgument);
  CHECK(code("bibtrail", "publications_series", {{"colour", 1}}) == ErrorCode::kInvalidArgument);
  CHECK(code("bibtrail", "publications_series", {{"mode", "weekly"}}) == ErrorCode::kInvalidArgument);
  CHECK(code("bibtrail", "publications_series", {{"year_gap", "two"}}) == ErrorCode::kInvalidArgument);
  CHECK(code("bibtrail", "publications_series", json::array()) == ErrorCode::kInvalidArgument);
  CHECK(code("scitrace", "author_analysis", {{"n", 0}}) == ErrorCode::kInvalidArgument);
  CHECK(code("bibtrail", "journal_analysis", {{"mode", "quartile_counts"}}) == ErrorCode::kMissingQuartileIndex);
  CHECK(code("colabrix", "giant_component", {{"component", 2}}) == ErrorCode::kNoSuchComponent);
  CHECK(code("colabrix", "modularity", json::object()) == ErrorCode::kPartitionMismatch);
  CHECK(code("themantix", "cluster_documents", {{"k", 6}}) == ErrorCode::kKExceedsDocuments);
}

TEST_CASE("operation listing covers all four engines") {
  auto d = dispatch::describe_operations();
  for (const char* m : {"bibtrail", "scitrace", "colabrix", "themantix"}) CHECK(d["modules"].contains(m));
  CHECK(d["modules"]["bibtrail"]["publications_series"]["mode"]["choices"] ==
        json({"total", "cumulative", "proportion"}));
  CHECK(d["modules"]["themantix"]["lda_topics"]["k"]["default"] == 5);
  CHECK(dispatch::operations().size() == 21);
}
