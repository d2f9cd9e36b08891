#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/ingest.hpp"
#include "scholarscope/scitrace.hpp"
#include "scholarscope/summarize.hpp"

namespace scholarscope::service {

std::string sha256_hex(std::string_view data);

// Token = base64url(email) "." hex(HMAC-SHA256(secret, email)).
class TokenSigner {
 public:
  explicit TokenSigner(std::string secret);
  std::string issue(std::string_view email) const;
  // Email the token was issued for, if the signature checks out.
  std::optional<std::string> verify(std::string_view token) const;

 private:
  std::string secret_;
};

bool plausible_email(std::string_view email);

struct ProjectFile {
  std::string label;
  ingest::SourceKind kind = ingest::SourceKind::kGenericCsv;
  ingest::FieldMapping mapping;
};

struct ProjectMeta {
  std::string id;
  std::string owner;
  std::string created_at;  // ISO 8601 UTC
  std::string updated_at;
  int corpus_version = 0;  // 0 = never built
  std::vector<ProjectFile> files;
  FilterSpec filters;
  std::optional<int> scimago_year;
  std::string scimago_digest;  // empty = no Scimago file

  bool operator==(const ProjectMeta&) const = default;
};
void to_json(nlohmann::json& j, const ProjectMeta& m);
void from_json(const nlohmann::json& j, ProjectMeta& m);

// One directory per project under <root>/projects/<id>:
//   project.json, files/<n>.raw, corpus/v<N>.csv, corpus/v<N>.report.json,
//   scimago.csv, results/<id>.json, charts/<id>.json
// Writes go through a temporary file and a rename.
class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path root);

  ProjectMeta create(const std::string& owner);
  std::optional<ProjectMeta> load(const std::string& id) const;
  std::vector<ProjectMeta> list(const std::string& owner) const;  // by created_at, id
  void save(ProjectMeta& meta);  // stamps updated_at

  void put_file(const std::string& id, size_t index, std::string_view bytes);
  std::string file(const std::string& id, size_t index) const;
  void put_corpus(const std::string& id, int version, const Corpus& corpus, const nlohmann::json& report);
  Corpus corpus(const std::string& id, int version) const;
  nlohmann::json report(const std::string& id, int version) const;
  void put_scimago(const std::string& id, std::string_view bytes);
  std::optional<std::string> scimago(const std::string& id) const;

  void put_result(const std::string& id, const std::string& result_id, std::string_view json);
  std::optional<std::string> result(const std::string& id, const std::string& result_id) const;
  void put_chart(const std::string& id, const std::string& spec_id, std::string_view json);
  std::optional<std::string> chart(const std::string& id, const std::string& spec_id) const;

  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path dir(const std::string& id) const;
  std::filesystem::path root_;
};

struct ServiceConfig {
  std::filesystem::path data_dir = "scholarscope-data";
  // Empty = read <data_dir>/secret.key, creating it on first start.
  std::string secret;
  std::shared_ptr<const summarize::SummaryProvider> summary;  // null = template
  std::shared_ptr<const scitrace::GenderProvider> gender;     // null = bundled table
};

// SCHOLARSCOPE_DATA_DIR, SCHOLARSCOPE_SECRET, SCHOLARSCOPE_SUMMARY_URL/_TOKEN,
// SCHOLARSCOPE_GENDER_URL.
ServiceConfig config_from_env();

// HTTP JSON API. Endpoints and schemas are listed in the README.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Port 0 picks a free port. Returns the bound port or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace scholarscope::service
