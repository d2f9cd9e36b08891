#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>

#include <fmt/format.h>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "scholarscope/bibtrail.hpp"
#include "scholarscope/dispatch.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/service.hpp"
#include "scholarscope/viz.hpp"

namespace scholarscope::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct HttpError {
  int status;
  std::string code;
  std::string message;
};

[[noreturn]] void fail(int status, std::string code, std::string message) {
  throw HttpError{status, std::move(code), std::move(message)};
}

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, std::string_view message) {
  send_json(res, {{"error", code}, {"message", message}}, status);
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    fail(400, "bad_json", fmt::format("request body is not JSON: {}", e.what()));
  }
}

template <typename T>
T field(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) fail(422, "missing_field", fmt::format("'{}' is required", key));
  try {
    return body.at(key).get<T>();
  } catch (const json::exception&) {
    fail(422, "bad_field", fmt::format("'{}' has the wrong type", key));
  }
}

std::string load_or_create_secret(const fs::path& data_dir) {
  const auto path = data_dir / "secret.key";
  {
    std::ifstream in(path);
    std::string s;
    if (in >> s && !s.empty()) return s;
  }
  std::random_device rd;
  std::string s;
  for (int i = 0; i < 32; ++i) s += fmt::format("{:02x}", rd() & 0xff);
  fs::create_directories(data_dir);
  std::ofstream(path) << s << '\n';
  fs::permissions(path, fs::perms::owner_read | fs::perms::owner_write, fs::perm_options::replace);
  return s;
}

}  // namespace

ServiceConfig config_from_env() {
  ServiceConfig c;
  if (const char* d = std::getenv("SCHOLARSCOPE_DATA_DIR"); d && *d) c.data_dir = d;
  if (const char* s = std::getenv("SCHOLARSCOPE_SECRET"); s && *s) c.secret = s;
  c.summary = summarize::provider_from_env();
  if (const char* g = std::getenv("SCHOLARSCOPE_GENDER_URL"); g && *g)
    c.gender = std::make_shared<scitrace::HttpGenderProvider>(g);
  return c;
}

struct Service::Impl {
  ServiceConfig config;
  ProjectStore store;
  TokenSigner signer;
  httplib::Server server;

  std::mutex locks_mu;
  std::map<std::string, std::shared_ptr<std::shared_mutex>> locks;

  struct Cached {
    int version = 0;
    Corpus corpus;
  };
  std::mutex cache_mu;
  std::map<std::string, Cached> corpora;

  explicit Impl(ServiceConfig c)
      : config(std::move(c)),
        store(config.data_dir),
        signer(config.secret.empty() ? load_or_create_secret(config.data_dir) : config.secret) {
    if (!config.summary) config.summary = std::make_shared<summarize::TemplateProvider>();
    routes();
  }

  std::shared_ptr<std::shared_mutex> lock_for(const std::string& id) {
    std::lock_guard g(locks_mu);
    auto& p = locks[id];
    if (!p) p = std::make_shared<std::shared_mutex>();
    return p;
  }

  std::string authenticate(const httplib::Request& req) {
    const auto header = req.get_header_value("Authorization");
    constexpr std::string_view kBearer = "Bearer ";
    if (header.rfind(kBearer, 0) != 0) fail(401, "unauthorized", "missing bearer token");
    auto email = signer.verify(std::string_view(header).substr(kBearer.size()));
    if (!email) fail(401, "unauthorized", "invalid token");
    return *email;
  }

  ProjectMeta project(const std::string& owner, const std::string& id) {
    auto m = store.load(id);
    // Someone else's project is reported exactly like a missing one.
    if (!m || m->owner != owner) fail(404, "not_found", fmt::format("no project '{}'", id));
    return *m;
  }

  Corpus corpus_of(const ProjectMeta& m) {
    if (m.corpus_version == 0) fail(409, "not_built", "project has no built corpus; POST /build first");
    {
      std::lock_guard g(cache_mu);
      auto it = corpora.find(m.id);
      if (it != corpora.end() && it->second.version == m.corpus_version) return it->second.corpus;
    }
    Corpus c = store.corpus(m.id, m.corpus_version);
    std::lock_guard g(cache_mu);
    corpora[m.id] = {m.corpus_version, c};
    return c;
  }

  std::optional<bibtrail::QuartileIndex> quartiles_of(const ProjectMeta& m) {
    if (m.scimago_digest.empty()) return std::nullopt;
    auto bytes = store.scimago(m.id);
    if (!bytes) return std::nullopt;
    return bibtrail::load_scimago(*bytes, m.scimago_year.value_or(0));
  }

  AnalysisResult stored_result(const ProjectMeta& m, const std::string& result_id) {
    auto text = store.result(m.id, result_id);
    if (!text) fail(404, "not_found", fmt::format("no result '{}'", result_id));
    return json::parse(*text).get<AnalysisResult>();
  }

  viz::ChartSpec stored_chart(const ProjectMeta& m, const std::string& spec_id) {
    auto text = store.chart(m.id, spec_id);
    if (!text) fail(404, "not_found", fmt::format("no chart '{}'", spec_id));
    return json::parse(*text).get<viz::ChartSpec>();
  }

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler h) {
    return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      try {
        h(req, res);
      } catch (const HttpError& e) {
        send_error(res, e.status, e.code, e.message);
      } catch (const Error& e) {
        send_error(res, 422, error_code_name(e.code()), e.what());
      } catch (const json::exception& e) {
        send_error(res, 422, "bad_json", e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  // Authenticated, project-scoped handler. `exclusive` serializes mutations
  // of one project; readers share the lock.
  using ProjectHandler = std::function<void(const httplib::Request&, httplib::Response&, ProjectMeta&)>;
  Handler scoped(bool exclusive, ProjectHandler h) {
    return guarded([this, exclusive, h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
      const auto owner = authenticate(req);
      const std::string id = req.matches[1];
      project(owner, id);
      auto mu = lock_for(id);
      if (exclusive) {
        std::unique_lock lock(*mu);
        auto m = project(owner, id);
        h(req, res, m);
      } else {
        std::shared_lock lock(*mu);
        auto m = project(owner, id);
        h(req, res, m);
      }
    });
  }

  void routes() {
    server.set_payload_max_length(256u << 20);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Expose-Headers", "X-Result-Id"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
      res.status = 204;
    });

    server.Post("/auth/login", guarded([this](const httplib::Request& req, httplib::Response& res) {
      auto email = field<std::string>(parse_body(req), "email");
      if (!plausible_email(email)) fail(422, "bad_email", "not an email address");
      send_json(res, {{"token", signer.issue(email)}, {"email", email}});
    }));

    server.Get("/operations", guarded([](const httplib::Request&, httplib::Response& res) {
      send_json(res, dispatch::describe_operations());
    }));

    server.Get("/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto owner = authenticate(req);
      json out = json::array();
      for (const auto& m : store.list(owner)) out.push_back(json(m));
      send_json(res, {{"projects", out}});
    }));

    server.Post("/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto owner = authenticate(req);
      auto m = store.create(owner);
      send_json(res, {{"project_id", m.id}}, 201);
    }));

    server.Get(R"(/projects/([^/]+))", scoped(false, [this](const httplib::Request&, httplib::Response& res,
                                                            ProjectMeta& m) {
      json out = m;
      out["stats"] = m.corpus_version ? json(summarize_corpus(corpus_of(m))) : json(nullptr);
      out["filtered_stats"] = m.corpus_version ? json(summarize_corpus(filter(corpus_of(m), m.filters))) : json(nullptr);
      send_json(res, out);
    }));

    server.Post(R"(/projects/([^/]+)/files)", scoped(true, [this](const httplib::Request& req,
                                                                  httplib::Response& res, ProjectMeta& m) {
      if (!req.is_multipart_form_data()) fail(422, "bad_upload", "expected multipart/form-data with 'file' parts");
      auto uploads = req.get_file_values("file");
      if (uploads.empty()) fail(422, "bad_upload", "no 'file' part");
      auto kind = ingest::SourceKind::kGenericCsv;
      if (req.has_file("kind")) {
        auto k = ingest::parse_source_kind(req.get_file_value("kind").content);
        if (!k) fail(422, "bad_kind", "kind must be scopus, wos or csv");
        kind = *k;
      }
      json summaries = json::array();
      std::vector<ProjectFile> added;
      for (const auto& up : uploads) {
        std::string label = up.filename.empty() ? fmt::format("file{}", m.files.size() + added.size() + 1) : up.filename;
        auto table = ingest::parse_delimited(up.content, kind, label);
        ProjectFile pf{label, kind, ingest::infer_field_mapping(table)};
        summaries.push_back({{"index", m.files.size() + added.size()},
                             {"source_label", label},
                             {"kind", ingest::to_string(kind)},
                             {"headers", table.headers},
                             {"row_count", table.rows.size()},
                             {"mapping", pf.mapping}});
        added.push_back(std::move(pf));
      }
      for (size_t i = 0; i < uploads.size(); ++i) {
        store.put_file(m.id, m.files.size(), uploads[i].content);
        m.files.push_back(added[i]);
      }
      store.save(m);
      send_json(res, {{"files", summaries}});
    }));

    server.Put(R"(/projects/([^/]+)/mapping)", scoped(true, [this](const httplib::Request& req,
                                                                   httplib::Response& res, ProjectMeta& m) {
      if (m.files.empty()) fail(409, "no_files", "upload files before setting a mapping");
      auto mapping = parse_body(req).get<ingest::FieldMapping>();
      std::vector<size_t> targets;
      if (req.has_param("file")) {
        size_t idx = 0;
        try {
          idx = std::stoul(req.get_param_value("file"));
        } catch (const std::exception&) {
          fail(422, "bad_param", "file must be a file index");
        }
        if (idx >= m.files.size()) fail(404, "not_found", fmt::format("no file {}", idx));
        targets.push_back(idx);
      } else {
        for (size_t i = 0; i < m.files.size(); ++i) targets.push_back(i);
      }
      for (auto i : targets) {
        auto table = ingest::parse_delimited(store.file(m.id, i), m.files[i].kind, m.files[i].label);
        ingest::validate_mapping(table, mapping);
      }
      for (auto i : targets) m.files[i].mapping = mapping;
      store.save(m);
      json out = json::array();
      for (auto i : targets) out.push_back({{"index", i}, {"mapping", m.files[i].mapping}});
      send_json(res, {{"files", out}});
    }));

    server.Post(R"(/projects/([^/]+)/build)", scoped(true, [this](const httplib::Request&, httplib::Response& res,
                                                                  ProjectMeta& m) {
      if (m.files.empty()) fail(409, "no_files", "no files uploaded");
      std::vector<std::vector<Record>> lists;
      for (size_t i = 0; i < m.files.size(); ++i) {
        auto table = ingest::parse_delimited(store.file(m.id, i), m.files[i].kind, m.files[i].label);
        ingest::validate_mapping(table, m.files[i].mapping);
        lists.push_back(ingest::apply_mapping(table, m.files[i].mapping));
      }
      auto merged = ingest::merge_and_dedup(lists);
      json report = merged.report;
      store.put_corpus(m.id, m.corpus_version + 1, merged.corpus, report);
      ++m.corpus_version;
      store.save(m);
      send_json(res, {{"corpus_version", m.corpus_version},
                      {"report", report},
                      {"stats", summarize_corpus(corpus_of(m))}});
    }));

    server.Get(R"(/projects/([^/]+)/preview)", scoped(false, [this](const httplib::Request& req,
                                                                    httplib::Response& res, ProjectMeta& m) {
      long n = 10;
      if (req.has_param("n")) {
        try {
          n = std::stol(req.get_param_value("n"));
        } catch (const std::exception&) {
          n = -1;
        }
        if (n < 0) fail(422, "bad_param", "n must be a non-negative integer");
      }
      auto c = corpus_of(m);
      json records = json::array();
      for (size_t i = 0; i < c.size() && i < static_cast<size_t>(n); ++i) records.push_back(c[i]);
      send_json(res, {{"total", c.size()}, {"records", records}});
    }));

    server.Put(R"(/projects/([^/]+)/filters)", scoped(true, [this](const httplib::Request& req,
                                                                   httplib::Response& res, ProjectMeta& m) {
      auto spec = parse_body(req).get<FilterSpec>();
      spec.validate();
      auto c = corpus_of(m);
      m.filters = spec;
      store.save(m);
      send_json(res, summarize_corpus(filter(c, spec)));
    }));

    server.Post(R"(/projects/([^/]+)/scimago)", scoped(true, [this](const httplib::Request& req,
                                                                    httplib::Response& res, ProjectMeta& m) {
      std::optional<int> year;
      if (req.has_param("year")) {
        try {
          year = std::stoi(req.get_param_value("year"));
        } catch (const std::exception&) {
          fail(422, "bad_param", "year must be an integer");
        }
      }
      auto index = bibtrail::load_scimago(req.body, year.value_or(0));
      store.put_scimago(m.id, req.body);
      m.scimago_year = year;
      m.scimago_digest = sha256_hex(req.body);
      store.save(m);
      send_json(res, {{"issns", index.entries.size()}, {"source_year", index.source_year}});
    }));

    server.Post(R"(/projects/([^/]+)/analyze)", scoped(false, [this](const httplib::Request& req,
                                                                     httplib::Response& res, ProjectMeta& m) {
      auto body = parse_body(req);
      auto module = field<std::string>(body, "module");
      auto operation = field<std::string>(body, "operation");
      json params = body.contains("params") ? body.at("params") : json::object();
      const json key = {{"project", m.id},       {"version", m.corpus_version}, {"filters", m.filters},
                        {"scimago", m.scimago_digest}, {"module", module},    {"operation", operation},
                        {"params", params}};
      const auto result_id = sha256_hex(key.dump());
      res.set_header("X-Result-Id", result_id);
      if (auto cached = store.result(m.id, result_id)) {
        res.set_content(*cached, "application/json");
        return;
      }
      auto view = filter(corpus_of(m), m.filters);
      auto quartiles = quartiles_of(m);
      dispatch::Context ctx{quartiles ? &*quartiles : nullptr, config.gender.get()};
      const std::string text = json(dispatch::run(view, module, operation, params, ctx)).dump();
      store.put_result(m.id, result_id, text);
      res.set_content(text, "application/json");
    }));

    server.Get(R"(/projects/([^/]+)/results/([0-9a-f]+))",
               scoped(false, [this](const httplib::Request& req, httplib::Response& res, ProjectMeta& m) {
                 auto text = store.result(m.id, req.matches[2]);
                 if (!text) fail(404, "not_found", "no such result");
                 res.set_content(*text, "application/json");
               }));

    server.Post(R"(/projects/([^/]+)/chart)", scoped(false, [this](const httplib::Request& req,
                                                                   httplib::Response& res, ProjectMeta& m) {
      auto body = parse_body(req);
      AnalysisResult result;
      if (body.contains("result_ref")) {
        result = stored_result(m, field<std::string>(body, "result_ref"));
      } else if (body.contains("result")) {
        result = body.at("result").get<AnalysisResult>();
        check_result(result);
      } else {
        fail(422, "missing_field", "'result_ref' or 'result' is required");
      }
      viz::ChartOptions options;
      if (body.contains("options")) options = body.at("options").get<viz::ChartOptions>();
      auto spec = viz::build_chart_spec(result, options);
      const std::string text = json(spec).dump();
      const auto spec_id = sha256_hex(text);
      store.put_chart(m.id, spec_id, text);
      send_json(res, {{"spec_id", spec_id}, {"spec", json(spec)}});
    }));

    server.Get(R"(/projects/([^/]+)/chart/([0-9a-f]+)\.svg)",
               scoped(false, [this](const httplib::Request& req, httplib::Response& res, ProjectMeta& m) {
                 auto bg = viz::Background::kWhite;
                 if (req.has_param("bg")) {
                   auto b = viz::parse_background(req.get_param_value("bg"));
                   if (!b) fail(422, "bad_param", "bg must be white or transparent");
                   bg = *b;
                 }
                 res.set_content(viz::render_svg(stored_chart(m, req.matches[2]), bg), "image/svg+xml");
               }));

    server.Get(R"(/projects/([^/]+)/export/([0-9a-f]+)\.csv)",
               scoped(false, [this](const httplib::Request& req, httplib::Response& res, ProjectMeta& m) {
                 res.set_content(viz::export_csv(stored_result(m, req.matches[2])), "text/csv");
               }));

    server.Post(R"(/projects/([^/]+)/summary)", scoped(false, [this](const httplib::Request& req,
                                                                     httplib::Response& res, ProjectMeta& m) {
      auto body = parse_body(req);
      auto result = stored_result(m, field<std::string>(body, "result_ref"));
      std::optional<viz::ChartSpec> spec;
      if (body.contains("spec_ref")) spec = stored_chart(m, field<std::string>(body, "spec_ref"));
      auto s = summarize::summarize_result(result, spec ? &*spec : nullptr, *config.summary);
      send_json(res, {{"text", s.text}, {"provider", s.provider}, {"fell_back", s.fell_back}});
    }));
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}
Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace scholarscope::service
