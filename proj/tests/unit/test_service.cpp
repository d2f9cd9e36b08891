#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include <filesystem>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "json.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/service.hpp"
#include "scholarscope/summarize.hpp"
#include "scholarscope/viz.hpp"

namespace fs = std::filesystem;
using namespace scholarscope;
using nlohmann::json;

namespace {

struct Running {
  explicit Running(const fs::path& dir) : svc(config(dir)) {
    port = svc.bind("127.0.0.1", 0);
    REQUIRE(port > 0);
    thread = std::thread([this] { svc.listen(); });
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    for (int i = 0; i < 200 && !client->Get("/operations"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ~Running() {
    svc.stop();
    thread.join();
  }
  static service::ServiceConfig config(const fs::path& dir) {
    service::ServiceConfig c;
    c.data_dir = dir;
    return c;
  }

  std::string login(const std::string& email) {
    auto r = client->Post("/auth/login", json{{"email", email}}.dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    return json::parse(r->body)["token"];
  }
  httplib::Headers auth(const std::string& token) { return {{"Authorization", "Bearer " + token}}; }

  service::Service svc;
  int port = 0;
  std::thread thread;
  std::unique_ptr<httplib::Client> client;
};

fs::path fresh_dir(const std::string& name) {
  auto d = fs::temp_directory_path() / ("scholarscope_svc_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

httplib::MultipartFormDataItems t5_upload() {
  return {{"file", fixtures::t5_bytes(), "t5_scopus.csv", "text/csv"}, {"kind", "scopus", "", ""}};
}

}  // namespace

TEST_CASE("end to end over HTTP") {
  auto dir = fresh_dir("e2e");
  std::string pid, rid, sid, analyze_body, csv_body, svg_body;
  {
    Running s(dir);
    auto& c = *s.client;
    auto tok = s.login("ana@example.org");
    auto h = s.auth(tok);

    auto r = c.Post("/projects", h, "", "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 201);
    pid = json::parse(r->body)["project_id"];

    r = c.Post("/projects/" + pid + "/files", h, t5_upload());
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto files = json::parse(r->body)["files"];
    REQUIRE(files.size() == 1);
    CHECK(files[0]["row_count"] == 5);
    CHECK(files[0]["kind"] == "scopus");
    CHECK(files[0]["mapping"]["assignments"]["title"] == "Title");

    r = c.Post("/projects/" + pid + "/build", h, "", "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto built = json::parse(r->body);
    CHECK(built["corpus_version"] == 1);
    CHECK(built["stats"]["n_records"] == 5);

    r = c.Get("/projects/" + pid + "/preview?n=3", h);
    REQUIRE(r);
    auto preview = json::parse(r->body);
    CHECK(preview["total"] == 5);
    CHECK(preview["records"].size() == 3);

    FilterSpec spec;
    spec.year_range = std::array<int, 2>{2020, 2022};
    r = c.Put("/projects/" + pid + "/filters", h, json(spec).dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto view = filter(fixtures::t5(), spec);
    CHECK(json::parse(r->body) == json(summarize_corpus(view)));

    json req = {{"module", "bibtrail"}, {"operation", "publications_series"}, {"params", {{"mode", "total"}}}};
    r = c.Post("/projects/" + pid + "/analyze", h, req.dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    CHECK(r->body == json(bibtrail::publications_series(view, bibtrail::PublicationMode::kTotal)).dump());
    rid = r->get_header_value("X-Result-Id");
    CHECK(rid.size() == 64);
    analyze_body = r->body;

    auto again = c.Post("/projects/" + pid + "/analyze", h, req.dump(), "application/json");
    CHECK(again->body == analyze_body);
    CHECK(again->get_header_value("X-Result-Id") == rid);

    r = c.Post("/projects/" + pid + "/chart", h,
               json{{"result_ref", rid}, {"options", {{"chart_type", "bar"}}}}.dump(), "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto chart = json::parse(r->body);
    sid = chart["spec_id"];
    viz::ChartOptions o;
    o.chart_type = viz::ChartType::kBar;
    auto direct_spec = viz::build_chart_spec(json::parse(analyze_body).get<AnalysisResult>(), o);
    CHECK(chart["spec"] == json(direct_spec));

    r = c.Get("/projects/" + pid + "/chart/" + sid + ".svg", h);
    REQUIRE(r);
    CHECK(r->status == 200);
    CHECK(r->body == viz::render_svg(direct_spec));
    svg_body = r->body;
    r = c.Get("/projects/" + pid + "/chart/" + sid + ".svg?bg=transparent", h);
    CHECK(r->body == viz::render_svg(direct_spec, viz::Background::kTransparent));
    CHECK(c.Get("/projects/" + pid + "/chart/" + sid + ".svg?bg=plaid", h)->status == 422);

    r = c.Get("/projects/" + pid + "/export/" + rid + ".csv", h);
    REQUIRE(r);
    CHECK(r->body == viz::export_csv(json::parse(analyze_body).get<AnalysisResult>()));
    csv_body = r->body;

    r = c.Post("/projects/" + pid + "/summary", h, json{{"result_ref", rid}, {"spec_ref", sid}}.dump(),
               "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    auto summary = json::parse(r->body);
    CHECK(summary["provider"] == "fallback");
    CHECK_FALSE(summary["text"].get<std::string>().empty());

    r = c.Post("/projects/" + pid + "/scimago?year=2022", h, fixtures::read("sci3_scimago.csv"), "text/csv");
    REQUIRE(r);
    CHECK(json::parse(r->body)["issns"] == 4);  // Scientometrics lists two
    r = c.Post("/projects/" + pid + "/analyze", h,
               json{{"module", "bibtrail"}, {"operation", "journal_analysis"}, {"params", {{"mode", "quartile_counts"}}}}
                   .dump(),
               "application/json");
    REQUIRE(r->status == 200);
    auto sci = fixtures::sci3();
    CHECK(r->body ==
          json(bibtrail::journal_analysis(view, &sci, bibtrail::JournalMode::kQuartileCounts)).dump());
  }

  // Restart on the same data directory.
  Running s(dir);
  auto h = s.auth(s.login("ana@example.org"));
  auto& c = *s.client;
  auto r = c.Get("/projects", h);
  REQUIRE(r);
  auto list = json::parse(r->body)["projects"];
  REQUIRE(list.size() == 1);
  CHECK(list[0]["project_id"] == pid);
  CHECK(list[0]["corpus_version"] == 1);
  CHECK(c.Get("/projects/" + pid + "/results/" + rid, h)->body == analyze_body);
  CHECK(c.Get("/projects/" + pid + "/export/" + rid + ".csv", h)->body == csv_body);
  CHECK(c.Get("/projects/" + pid + "/chart/" + sid + ".svg", h)->body == svg_body);
  json req = {{"module", "bibtrail"}, {"operation", "publications_series"}, {"params", {{"mode", "total"}}}};
  r = c.Post("/projects/" + pid + "/analyze", h, req.dump(), "application/json");
  CHECK(r->body == analyze_body);
  CHECK(json::parse(c.Get("/projects/" + pid + "/preview", h)->body)["total"] == 5);
}

TEST_CASE("status codes") {
  Running s(fresh_dir("codes"));
  auto& c = *s.client;
  auto a = s.auth(s.login("a@example.org"));
  auto b = s.auth(s.login("b@example.org"));

  CHECK(c.Get("/projects")->status == 401);
  CHECK(c.Get("/projects", {{"Authorization", "Bearer forged.abcdef"}})->status == 401);
  CHECK(c.Post("/auth/login", R"({"email":"nobody"})", "application/json")->status == 422);
  CHECK(c.Post("/auth/login", "not json", "application/json")->status == 400);

  auto pid = json::parse(c.Post("/projects", a, "", "application/json")->body)["project_id"].get<std::string>();
  CHECK(c.Get("/projects/" + pid, a)->status == 200);
  CHECK(c.Get("/projects/" + pid, b)->status == 404);
  CHECK(c.Get("/projects/nope", a)->status == 404);
  CHECK(c.Post("/projects/" + pid + "/files", b, t5_upload())->status == 404);

  CHECK(c.Post("/projects/" + pid + "/build", a, "", "application/json")->status == 409);
  json req = {{"module", "bibtrail"}, {"operation", "publications_series"}};
  CHECK(c.Post("/projects/" + pid + "/analyze", a, req.dump(), "application/json")->status == 409);
  CHECK(c.Put("/projects/" + pid + "/filters", a, "{}", "application/json")->status == 409);

  REQUIRE(c.Post("/projects/" + pid + "/files", a, t5_upload())->status == 200);
  CHECK(c.Put("/projects/" + pid + "/mapping?file=0", a, R"({"assignments":{"title":"No Such Column"}})", "application/json")->status ==
        422);
  CHECK(c.Put("/projects/" + pid + "/mapping?file=7", a, R"({"assignments":{"title":"Title"}})", "application/json")->status == 404);
  CHECK(c.Put("/projects/" + pid + "/mapping", a, R"({"title":"Title"})", "application/json")->status == 422);
  REQUIRE(c.Post("/projects/" + pid + "/build", a, "", "application/json")->status == 200);

  auto r = c.Put("/projects/" + pid + "/filters", a, R"({"year_range":[2022,2019]})", "application/json");
  CHECK(r->status == 422);
  CHECK(json::parse(r->body)["message"].get<std::string>().find("year_range") != std::string::npos);
  r = c.Post("/projects/" + pid + "/analyze", a,
             json{{"module", "bibtrail"}, {"operation", "publications_series"}, {"params", {{"mode", "weekly"}}}}.dump(),
             "application/json");
  CHECK(r->status == 422);
  r = c.Post("/projects/" + pid + "/analyze", a,
             json{{"module", "bibtrail"}, {"operation", "journal_analysis"}, {"params", {{"mode", "quartile_counts"}}}}
                 .dump(),
             "application/json");
  CHECK(r->status == 422);
  CHECK(json::parse(r->body)["error"] == "MissingQuartileIndex");
  CHECK(c.Get("/projects/" + pid + "/results/" + std::string(64, 'a'), a)->status == 404);
  CHECK(c.Post("/projects/" + pid + "/chart", a, "{}", "application/json")->status == 422);

  auto ops = c.Get("/operations");
  CHECK(ops->status == 200);
  CHECK(ops->get_header_value("Access-Control-Allow-Origin") == "*");
}

TEST_CASE("token signer") {
  service::TokenSigner s("k1"), other("k2");
  auto t = s.issue("x@y.org");
  CHECK(s.verify(t) == "x@y.org");
  CHECK_FALSE(other.verify(t));
  CHECK_FALSE(s.verify(t + "0"));
  CHECK_FALSE(s.verify(""));
  CHECK(service::plausible_email("a@b.co"));
  CHECK_FALSE(service::plausible_email("a@"));
  CHECK_FALSE(service::plausible_email("a b@c.org"));
  CHECK(service::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
