// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <fmt/core.h>

#include "fixtures.hpp"
#include "json.hpp"
#include "oracles.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/centrality.hpp"
#include "scholarscope/community.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/ingest.hpp"
#include "scholarscope/service.hpp"
#include "scholarscope/themantix.hpp"
#include "scholarscope/viz.hpp"

namespace fs = std::filesystem;
using namespace scholarscope;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::vector<Record> load(const std::string& bytes, const std::string& label) {
  auto table = ingest::parse_delimited(bytes, ingest::SourceKind::kScopus, label);
  return ingest::apply_mapping(table, ingest::infer_field_mapping(table));
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double d = 0;
  for (size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

bool well_formed_svg(const std::string& svg) {
  try {
    std::istringstream in(svg);
    boost::property_tree::ptree tree;
    boost::property_tree::read_xml(in, tree);
    return tree.count("svg") == 1;
  } catch (const boost::property_tree::xml_parser_error&) {
    return false;
  }
}

colabrix::Graph labelled(std::initializer_list<std::pair<const char*, const char*>> edges) {
  colabrix::Graph::Builder b;
  for (auto [u, v] : edges) b.add_edge(u, v);
  return b.build();
}

Outcome ingest_check() {
  Outcome o;
  const auto bytes = fixtures::t5_bytes();
  auto table = ingest::parse_delimited(bytes, ingest::SourceKind::kScopus, "t5.csv");
  auto mapping = ingest::infer_field_mapping(table);
  auto once = ingest::merge_and_dedup({ingest::apply_mapping(table, mapping)});
  o.require(once.corpus.size() == 5, "T5 did not build to 5 records");
  o.require(once.report.duplicate_groups.empty(), "T5 reported duplicates");

  auto twice = ingest::merge_and_dedup({load(bytes + bytes.substr(bytes.find('\n') + 1), "t5x2.csv")});
  o.require(twice.corpus.size() == 5, "T5 x2 did not build to 5 records");
  o.require(twice.report.duplicate_groups.size() == 5, "T5 x2 did not give 5 duplicate groups");

  auto ser = ingest::serialize(table);
  o.require(ingest::serialize(ingest::parse_delimited(ser, ingest::SourceKind::kGenericCsv, "t5.csv")) == ser,
            "table serialize round trip not byte-stable");
  auto csv = write_corpus_csv(once.corpus);
  o.require(write_corpus_csv(read_corpus_csv(csv)) == csv, "corpus serialize round trip not byte-stable");
  o.require(read_corpus_csv(csv) == once.corpus, "corpus round trip changed records");
  return o;
}

Outcome centrality_check() {
  Outcome o;
  int graphs = 0;
  auto check = [&](const colabrix::Graph& g) {
    using colabrix::Backend;
    using colabrix::Measure;
    for (auto backend : {Backend::kSerial, Backend::kParallel}) {
      o.require(max_diff(colabrix::centrality(g, Measure::kBetweenness, backend).scores, oracles::betweenness(g)) <=
                    1e-8,
                "betweenness mismatch");
      o.require(max_diff(colabrix::centrality(g, Measure::kCloseness, backend).scores, oracles::closeness(g)) <= 1e-8,
                "closeness mismatch");
      o.require(max_diff(colabrix::centrality(g, Measure::kDegree, backend).scores, oracles::degree(g)) <= 1e-8,
                "degree mismatch");
    }
    if (g.node_count() >= 2) {
      auto ours = colabrix::centrality(g, Measure::kEigenvector);
      auto [vec, lambda] = oracles::eigenvector(g);
      o.require(max_diff(ours.scores, vec) <= 1e-8 && std::abs(*ours.lambda - lambda) <= 1e-8, "eigenvector mismatch");
    }
    ++graphs;
  };
  // Every labelled connected graph up to 6 nodes, then random 7-node graphs.
  for (int n = 1; n <= 6; ++n) {
    const int pairs = n * (n - 1) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) {
      auto g = oracles::graph_from_mask(n, mask);
      if (g.is_connected()) check(g);
    }
  }
  std::mt19937_64 rng(7007);
  for (int i = 0; i < 1000; ++i) check(oracles::random_connected(7, 0.2 + 0.6 * (i % 7) / 6.0, rng, i % 2 ? 4 : 1));
  o.detail = o.pass ? fmt::format("{} graphs", graphs) : o.detail;
  return o;
}

Outcome spot_checks() {
  using colabrix::Measure;
  Outcome o;
  auto path = labelled({{"a", "b"}, {"b", "c"}});
  o.require(std::abs(colabrix::centrality(path, Measure::kBetweenness).score_of("b") - 1.0) <= 1e-12, "C_B(b) != 1");
  o.require(std::abs(colabrix::centrality(path, Measure::kCloseness).score_of("b") - 0.5) <= 1e-12, "C_C(b) != 1/2");
  auto c4 = colabrix::centrality(labelled({{"a", "b"}, {"b", "c"}, {"c", "d"}, {"d", "a"}}), Measure::kEigenvector);
  for (double v : c4.scores) o.require(std::abs(v - 0.5) <= 1e-8, "C4 eigenvector not uniform");
  o.require(std::abs(*c4.lambda - 2.0) <= 1e-8, "C4 lambda != 2");
  for (int n = 2; n <= 10; ++n) {
    colabrix::Graph::Builder b;
    for (int i = 1; i < n; ++i) b.add_edge("hub", "leaf" + std::to_string(i));
    o.require(colabrix::centrality(b.build(), Measure::kDegree).score_of("hub") == n - 1, "star degree != n-1");
  }
  return o;
}

Outcome communities_check() {
  Outcome o;
  auto g = fixtures::gn6();
  const std::vector<int> truth = {0, 0, 0, 1, 1, 1};
  auto [best_q, best] = oracles::best_partition(g);
  o.require(colabrix::canonical_assignment(best) == truth, "brute force optimum is not the two triangles");
  for (auto method : {colabrix::CommunityMethod::kGirvanNewman, colabrix::CommunityMethod::kGreedyModularity,
                      colabrix::CommunityMethod::kLeiden}) {
    const std::string name(colabrix::to_string(method));
    auto p = colabrix::detect_communities(g, method);
    o.require(p.assignment == truth, name + " did not recover the triangles");
    o.require(std::abs(p.modularity - colabrix::modularity(g, p.assignment)) <= 1e-12,
              name + " reported modularity disagrees with modularity()");
    o.require(std::abs(p.modularity - best_q) <= 1e-9, name + " modularity is not optimal");
  }
  o.require(std::abs(colabrix::modularity(g, truth) - oracles::modularity(g, truth)) <= 1e-12,
            "modularity() disagrees with the pairwise sum");
  return o;
}

Outcome quartile_check() {
  Outcome o;
  auto sci = fixtures::sci3();
  auto r = bibtrail::journal_analysis(fixtures::t5(), &sci, bibtrail::JournalMode::kQuartileCounts);
  const std::vector<std::string> labels = {"Q1", "Q2", "Q3", "Q4", "Unranked"};
  const std::vector<double> want = {3, 1, 0, 0, 1};
  o.require(r.rows.size() == 5, "expected 5 quartile rows");
  double sum = 0;
  for (size_t i = 0; i < r.rows.size() && i < 5; ++i) {
    o.require(r.rows[i].label == labels[i], "unexpected quartile label " + r.rows[i].label);
    o.require(r.rows[i].values.at(0) == want[i], "count for " + labels[i] + " differs from the hand ledger");
    sum += r.rows[i].values.at(0);
  }
  o.require(sum == 5, "quartile counts do not sum to 5");
  return o;
}

Outcome series_check() {
  Outcome o;
  auto syn = fixtures::syn50();
  long dated = 0;
  for (const auto& r : syn.records()) dated += r.year.has_value();
  for (int gap = 1; gap <= 5; ++gap) {
    auto total = bibtrail::publications_series(syn, bibtrail::PublicationMode::kTotal, gap);
    auto cum = bibtrail::publications_series(syn, bibtrail::PublicationMode::kCumulative, gap);
    auto prop = bibtrail::publications_series(syn, bibtrail::PublicationMode::kProportion, gap);
    double t = 0, p = 0, prev = -1;
    for (const auto& row : total.rows) t += row.values.at(0);
    for (const auto& row : prop.rows) p += row.values.at(0);
    bool monotone = true;
    for (const auto& row : cum.rows) {
      monotone = monotone && row.values.at(0) >= prev;
      prev = row.values.at(0);
    }
    o.require(t == static_cast<double>(dated), fmt::format("gap {}: totals sum to {} not {}", gap, t, dated));
    o.require(std::abs(p - 1.0) <= 1e-9, fmt::format("gap {}: proportions sum to {}", gap, p));
    o.require(monotone, fmt::format("gap {}: cumulative series decreases", gap));
  }
  auto cites = bibtrail::citations_series(syn, bibtrail::CitationMode::kProportion);
  double p = 0;
  for (const auto& row : cites.rows) p += row.values.at(0);
  o.require(std::abs(p - 1.0) <= 1e-9, "citation proportions do not sum to 1");
  return o;
}

Outcome lda_check() {
  Outcome o;
  auto planted = fixtures::planted_topics(100, 150, 7);
  themantix::LdaOptions opts;
  opts.k = 2;
  opts.iterations = 1000;
  opts.seed = 42;
  auto model = themantix::lda_topics(planted.corpus, opts);
  const auto galaxy = static_cast<size_t>(std::find(model.vocabulary.begin(), model.vocabulary.end(), "galaxy") -
                                          model.vocabulary.begin());
  const int astro = model.topic_word[0][galaxy] > model.topic_word[1][galaxy] ? 0 : 1;
  int recovered = 0;
  for (size_t d = 0; d < planted.planted.size(); ++d) {
    const int want = planted.planted[d] == 0 ? astro : 1 - astro;
    recovered += model.doc_topic[d][static_cast<size_t>(want)] >= 0.8;
  }
  o.require(recovered >= 90, fmt::format("only {} documents recovered", recovered));
  o.require(themantix::lda_topics(planted.corpus, opts) == model, "same seed gave a different model");
  if (o.pass) o.detail = fmt::format("{}/100 recovered", recovered);
  return o;
}

Outcome clustering_check() {
  Outcome o;
  auto groups = fixtures::separable_groups(10, 11);
  auto r = themantix::cluster_documents(groups.corpus, 2, 0);
  for (size_t d = 0; d < r.rows.size(); ++d)
    o.require((r.rows[d].values[0] == r.rows[0].values[0]) == (groups.planted[d] == groups.planted[0]),
              "a document landed in the wrong cluster");
  o.require(r.rows.size() == 20, "expected 20 clustered documents");
  auto small = fixtures::separable_groups(4, 11);
  auto singles = themantix::cluster_documents(small.corpus, 8, 0);
  std::set<double> ids;
  for (const auto& row : singles.rows) ids.insert(row.values[0]);
  o.require(ids.size() == 8, "k = D did not give singleton clusters");
  return o;
}

// Every compatible (kind, chart) pair over the SYN50 and T5 results.
Outcome viz_check(std::vector<std::string>* artifacts = nullptr) {
  Outcome o;
  const auto& table = viz::CompatibilityTable::bundled();
  std::set<std::pair<std::string, viz::ChartType>> expected, rendered;
  for (const auto& kind : table.kinds())
    for (auto t : table.charts_for(kind)) expected.insert({kind, t});
  auto sci = fixtures::sci3();
  auto results = fixtures::every_result(fixtures::syn50(), &sci);
  auto t5 = fixtures::every_result(fixtures::t5(), &sci);
  results.insert(results.end(), t5.begin(), t5.end());
  for (const auto& [name, result] : results) {
    if (artifacts) artifacts->push_back(json(result).dump());
    for (auto type : viz::kAllChartTypes) {
      if (!table.allows(result.kind, type)) continue;
      viz::ChartOptions opts;
      opts.chart_type = type;
      auto spec = viz::build_chart_spec(result, opts);
      auto svg = viz::render_svg(spec);
      o.require(well_formed_svg(svg), name + " " + std::string(viz::to_string(type)) + " is not well-formed SVG");
      o.require(svg == viz::render_svg(spec), name + " double render differs");
      if (artifacts) artifacts->push_back(svg);
      rendered.insert({result.kind, type});
    }
    auto csv = viz::export_csv(result);
    auto back = viz::parse_exported_csv(csv);
    o.require(back.label_column == result.label_column && back.columns == result.columns && back.rows == result.rows,
              name + " CSV does not re-parse to the same table");
    if (artifacts) artifacts->push_back(csv);
  }
  for (const auto& pair : expected)
    o.require(rendered.contains(pair), "no result of kind " + pair.first + " rendered as " +
                                           std::string(viz::to_string(pair.second)));
  if (o.pass) o.detail = fmt::format("{} results, {} pairs", results.size(), rendered.size());
  return o;
}

class Server {
 public:
  explicit Server(const fs::path& dir) : svc_(config(dir)) {
    port_ = svc_.bind("127.0.0.1", 0);
    thread_ = std::thread([this] { svc_.listen(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int i = 0; i < 400 && !client->Get("/operations"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Server() {
    svc_.stop();
    thread_.join();
  }
  std::unique_ptr<httplib::Client> client;

 private:
  static service::ServiceConfig config(const fs::path& dir) {
    service::ServiceConfig c;
    c.data_dir = dir;
    c.secret = "acceptance";
    return c;
  }
  service::Service svc_;
  int port_ = 0;
  std::thread thread_;
};

bool has_keys(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) return false;
  return std::all_of(keys.begin(), keys.end(), [&](const char* k) { return j.contains(k); });
}

json parse_or_null(const httplib::Result& r) {
  if (!r) return nullptr;
  return json::parse(r->body, nullptr, false);
}

Outcome service_check(std::vector<std::string>* artifacts = nullptr) {
  Outcome o;
  auto dir = fs::temp_directory_path() / fmt::format("scholarscope_acceptance_{}", ::getpid());
  fs::remove_all(dir);
  std::string pid, rid, sid, analyzed, csv, svg, preview;
  FilterSpec spec;
  spec.year_range = std::array<int, 2>{2020, 2022};
  const json analyze = {{"module", "bibtrail"}, {"operation", "publications_series"}, {"params", {{"mode", "total"}}}};
  try {
    {
      Server s(dir);
      auto& c = *s.client;
      auto login = parse_or_null(c.Post("/auth/login", R"({"email":"ana@example.org"})", "application/json"));
      o.require(has_keys(login, {"token", "email"}), "login response");
      if (!o.pass) return o;
      httplib::Headers h = {{"Authorization", "Bearer " + login["token"].get<std::string>()}};
      auto created = parse_or_null(c.Post("/projects", h, "", "application/json"));
      o.require(has_keys(created, {"project_id"}), "create response");
      if (!o.pass) return o;
      pid = created["project_id"];
      const std::string base = "/projects/" + pid;
      httplib::MultipartFormDataItems items = {{"file", fixtures::t5_bytes(), "t5_scopus.csv", "text/csv"},
                                               {"kind", "scopus", "", ""}};
      auto up = parse_or_null(c.Post(base + "/files", h, items));
      o.require(has_keys(up, {"files"}) && up["files"].size() == 1 &&
                    has_keys(up["files"][0], {"index", "source_label", "kind", "headers", "row_count", "mapping"}),
                "upload response");
      auto built = parse_or_null(c.Post(base + "/build", h, "", "application/json"));
      o.require(has_keys(built, {"corpus_version", "report", "stats"}) && built["stats"]["n_records"] == 5,
                "build response");
      auto filtered = parse_or_null(c.Put(base + "/filters", h, json(spec).dump(), "application/json"));
      o.require(has_keys(filtered, {"n_records", "n_distinct_authors"}), "filters response");
      auto r = c.Post(base + "/analyze", h, analyze.dump(), "application/json");
      auto view = filter(fixtures::t5(), spec);
      o.require(r && r->status == 200 &&
                    r->body == json(bibtrail::publications_series(view, bibtrail::PublicationMode::kTotal)).dump(),
                "/analyze is not byte-equal to the library call");
      if (!o.pass) return o;
      analyzed = r->body;
      rid = r->get_header_value("X-Result-Id");
      auto chart = parse_or_null(c.Post(base + "/chart", h, json{{"result_ref", rid}}.dump(), "application/json"));
      o.require(has_keys(chart, {"spec_id", "spec"}), "chart response");
      if (!o.pass) return o;
      sid = chart["spec_id"];
      auto svg_r = c.Get(base + "/chart/" + sid + ".svg", h);
      o.require(svg_r && svg_r->status == 200 && well_formed_svg(svg_r->body), "chart SVG");
      svg = svg_r ? svg_r->body : "";
      auto csv_r = c.Get(base + "/export/" + rid + ".csv", h);
      o.require(csv_r && csv_r->status == 200 && viz::parse_exported_csv(csv_r->body).rows ==
                                                     json::parse(analyzed).get<AnalysisResult>().rows,
                "CSV export");
      csv = csv_r ? csv_r->body : "";
      auto summary = parse_or_null(c.Post(base + "/summary", h, json{{"result_ref", rid}, {"spec_ref", sid}}.dump(),
                                          "application/json"));
      o.require(has_keys(summary, {"text", "provider", "fell_back"}) && summary["provider"] == "fallback" &&
                    !summary["text"].get<std::string>().empty(),
                "summary response");
      auto pv = c.Get(base + "/preview", h);
      preview = pv ? pv->body : "";
      if (artifacts) {
        for (const auto& s : {analyzed, svg, csv, summary.dump(), preview}) artifacts->push_back(s);
      }
    }
    Server s(dir);
    auto& c = *s.client;
    auto login = parse_or_null(c.Post("/auth/login", R"({"email":"ana@example.org"})", "application/json"));
    httplib::Headers h = {{"Authorization", "Bearer " + login["token"].get<std::string>()}};
    const std::string base = "/projects/" + pid;
    auto list = parse_or_null(c.Get("/projects", h));
    o.require(has_keys(list, {"projects"}) && list["projects"].size() == 1, "project list after restart");
    auto again = c.Get(base + "/results/" + rid, h);
    o.require(again && again->body == analyzed, "stored result after restart");
    auto re = c.Post(base + "/analyze", h, analyze.dump(), "application/json");
    o.require(re && re->body == analyzed, "re-analysis after restart");
    auto pv = c.Get(base + "/preview", h);
    o.require(pv && pv->body == preview, "corpus after restart");
    auto svg2 = c.Get(base + "/chart/" + sid + ".svg", h);
    o.require(svg2 && svg2->body == svg, "chart after restart");
    auto csv2 = c.Get(base + "/export/" + rid + ".csv", h);
    o.require(csv2 && csv2->body == csv, "export after restart");
  } catch (const std::exception& e) {
    o.require(false, e.what());
  }
  fs::remove_all(dir);
  return o;
}

// Everything the suite produces, hashed.
std::string artifact_digest() {
  std::vector<std::string> parts;
  parts.push_back(write_corpus_csv(fixtures::t5()));
  parts.push_back(write_corpus_csv(fixtures::syn50()));
  viz_check(&parts);
  auto planted = fixtures::planted_topics(100, 150, 7);
  themantix::LdaOptions opts;
  opts.k = 2;
  opts.seed = 42;
  auto model = themantix::lda_topics(planted.corpus, opts);
  parts.push_back(themantix::topic_terms_csv(model));
  parts.push_back(themantix::doc_topic_csv(model));
  parts.push_back(json(themantix::cluster_documents(fixtures::separable_groups().corpus, 2, 0)).dump());
  auto g = colabrix::build_graph(fixtures::syn50(), colabrix::NetworkLevel::kAuthor);
  parts.push_back(colabrix::node_metrics_csv(g));
  for (auto m : {colabrix::CommunityMethod::kGirvanNewman, colabrix::CommunityMethod::kGreedyModularity,
                 colabrix::CommunityMethod::kLeiden})
    parts.push_back(colabrix::partition_csv(colabrix::detect_communities(g, m)));
  service_check(&parts);
  std::string all;
  for (const auto& p : parts) all += service::sha256_hex(p);
  return service::sha256_hex(all);
}

Outcome determinism_check() {
  Outcome o;
  auto first = artifact_digest();
  auto second = artifact_digest();
  o.require(first == second, "artifact hashes differ between runs");
  if (o.pass) o.detail = first.substr(0, 16);
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
  double budget_s;  // 0 = no runtime bound
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {"Ingest", ingest_check, 1.0},
      {"Centrality oracle", centrality_check, 60.0},
      {"Spot checks", spot_checks, 0},
      {"Communities", communities_check, 0},
      {"Quartile pipeline", quartile_check, 0},
      {"Series invariants", series_check, 0},
      {"LDA", lda_check, 30.0},
      {"Clustering", clustering_check, 0},
      {"Viz", [] { return viz_check(); }, 0},
      {"Service", [] { return service_check(); }, 0},
      {"Determinism", determinism_check, 0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs >= c.budget_s) o.require(false, fmt::format("took {:.2f} s, limit {} s", secs, c.budget_s));
    failed += !o.pass;
    fmt::print("{} {} ({:.3f} s){}\n", o.pass ? "PASS" : "FAIL", c.name, secs,
               o.detail.empty() ? "" : ": " + o.detail);
  }
  return failed == 0 ? 0 : 1;
}
