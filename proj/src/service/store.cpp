#include <algorithm>
#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "scholarscope/error.hpp"
#include "scholarscope/service.hpp"

namespace scholarscope::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string now_iso() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(t));
}

std::string random_id() {
  std::random_device rd;
  std::uniform_int_distribution<unsigned> byte(0, 255);
  std::string out;
  for (int i = 0; i < 12; ++i) out += fmt::format("{:02x}", byte(rd));
  return out;
}

bool safe_name(std::string_view s) {
  return !s.empty() && s.size() <= 128 && std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-' || c == '_';
  });
}

std::optional<std::string> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const fs::path& p, std::string_view data) {
  fs::create_directories(p.parent_path());
  auto tmp = p;
  tmp += fmt::format(".tmp{}", random_id());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
  }
  fs::rename(tmp, p);
}

}  // namespace

void to_json(json& j, const ProjectMeta& m) {
  json files = json::array();
  for (const auto& f : m.files)
    files.push_back({{"label", f.label}, {"kind", ingest::to_string(f.kind)}, {"mapping", f.mapping}});
  j = {{"project_id", m.id},
       {"owner", m.owner},
       {"created_at", m.created_at},
       {"updated_at", m.updated_at},
       {"corpus_version", m.corpus_version},
       {"files", files},
       {"filters", m.filters},
       {"scimago_year", m.scimago_year ? json(*m.scimago_year) : json(nullptr)},
       {"scimago_digest", m.scimago_digest}};
}

void from_json(const json& j, ProjectMeta& m) {
  m.id = j.at("project_id").get<std::string>();
  m.owner = j.at("owner").get<std::string>();
  m.created_at = j.at("created_at").get<std::string>();
  m.updated_at = j.at("updated_at").get<std::string>();
  m.corpus_version = j.at("corpus_version").get<int>();
  m.files.clear();
  for (const auto& f : j.at("files")) {
    ProjectFile pf;
    pf.label = f.at("label").get<std::string>();
    pf.kind = ingest::parse_source_kind(f.at("kind").get<std::string>()).value_or(ingest::SourceKind::kGenericCsv);
    pf.mapping = f.at("mapping").get<ingest::FieldMapping>();
    m.files.push_back(std::move(pf));
  }
  m.filters = j.at("filters").get<FilterSpec>();
  m.scimago_year = j.at("scimago_year").is_null() ? std::nullopt : std::optional<int>(j.at("scimago_year").get<int>());
  m.scimago_digest = j.at("scimago_digest").get<std::string>();
}

ProjectStore::ProjectStore(fs::path root) : root_(std::move(root)) { fs::create_directories(root_ / "projects"); }

fs::path ProjectStore::dir(const std::string& id) const {
  if (!safe_name(id)) throw Error(ErrorCode::kInvalidArgument, "malformed project id");
  return root_ / "projects" / id;
}

ProjectMeta ProjectStore::create(const std::string& owner) {
  ProjectMeta m;
  do {
    m.id = random_id();
  } while (fs::exists(dir(m.id)));
  m.owner = owner;
  m.created_at = now_iso();
  save(m);
  return m;
}

std::optional<ProjectMeta> ProjectStore::load(const std::string& id) const {
  if (!safe_name(id)) return std::nullopt;
  auto text = slurp(dir(id) / "project.json");
  if (!text) return std::nullopt;
  return json::parse(*text).get<ProjectMeta>();
}

std::vector<ProjectMeta> ProjectStore::list(const std::string& owner) const {
  std::vector<ProjectMeta> out;
  for (const auto& entry : fs::directory_iterator(root_ / "projects")) {
    if (!entry.is_directory()) continue;
    auto m = load(entry.path().filename().string());
    if (m && m->owner == owner) out.push_back(std::move(*m));
  }
  std::sort(out.begin(), out.end(), [](const ProjectMeta& a, const ProjectMeta& b) {
    return std::tie(a.created_at, a.id) < std::tie(b.created_at, b.id);
  });
  return out;
}

void ProjectStore::save(ProjectMeta& meta) {
  meta.updated_at = now_iso();
  write_atomic(dir(meta.id) / "project.json", json(meta).dump(2));
}

void ProjectStore::put_file(const std::string& id, size_t index, std::string_view bytes) {
  write_atomic(dir(id) / "files" / fmt::format("{}.raw", index), bytes);
}

std::string ProjectStore::file(const std::string& id, size_t index) const {
  auto data = slurp(dir(id) / "files" / fmt::format("{}.raw", index));
  if (!data) throw std::runtime_error(fmt::format("project {} is missing file {}", id, index));
  return *data;
}

void ProjectStore::put_corpus(const std::string& id, int version, const Corpus& corpus, const json& report) {
  write_atomic(dir(id) / "corpus" / fmt::format("v{}.csv", version), write_corpus_csv(corpus));
  write_atomic(dir(id) / "corpus" / fmt::format("v{}.report.json", version), report.dump(2));
}

Corpus ProjectStore::corpus(const std::string& id, int version) const {
  auto data = slurp(dir(id) / "corpus" / fmt::format("v{}.csv", version));
  if (!data) throw std::runtime_error(fmt::format("project {} is missing corpus v{}", id, version));
  return read_corpus_csv(*data);
}

json ProjectStore::report(const std::string& id, int version) const {
  auto data = slurp(dir(id) / "corpus" / fmt::format("v{}.report.json", version));
  return data ? json::parse(*data) : json(nullptr);
}

void ProjectStore::put_scimago(const std::string& id, std::string_view bytes) {
  write_atomic(dir(id) / "scimago.csv", bytes);
}

std::optional<std::string> ProjectStore::scimago(const std::string& id) const { return slurp(dir(id) / "scimago.csv"); }

void ProjectStore::put_result(const std::string& id, const std::string& result_id, std::string_view data) {
  write_atomic(dir(id) / "results" / (result_id + ".json"), data);
}

std::optional<std::string> ProjectStore::result(const std::string& id, const std::string& result_id) const {
  if (!safe_name(result_id)) return std::nullopt;
  return slurp(dir(id) / "results" / (result_id + ".json"));
}

void ProjectStore::put_chart(const std::string& id, const std::string& spec_id, std::string_view data) {
  write_atomic(dir(id) / "charts" / (spec_id + ".json"), data);
}

std::optional<std::string> ProjectStore::chart(const std::string& id, const std::string& spec_id) const {
  if (!safe_name(spec_id)) return std::nullopt;
  return slurp(dir(id) / "charts" / (spec_id + ".json"));
}

}  // namespace scholarscope::service
