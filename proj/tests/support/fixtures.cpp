#include "fixtures.hpp"

#include <fstream>
#include <set>
#include <random>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/ingest.hpp"

namespace fixtures {
namespace ss = scholarscope;

std::string path(const std::string& name) { return std::string(SCHOLARSCOPE_FIXTURE_DIR) + "/" + name; }

std::string read(const std::string& name) {
  std::ifstream in(path(name), std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + name);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string t5_bytes() { return read("t5_scopus.csv"); }

ss::Corpus t5() {
  auto table = ss::ingest::parse_delimited(t5_bytes(), ss::ingest::SourceKind::kScopus, "t5_scopus.csv");
  auto records = ss::ingest::apply_mapping(table, ss::ingest::infer_field_mapping(table));
  return ss::ingest::merge_and_dedup({records}).corpus;
}

ss::bibtrail::QuartileIndex sci3() { return ss::bibtrail::load_scimago(read("sci3_scimago.csv"), 2022); }

namespace {

template <typename T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<size_t>(0, v.size() - 1)(rng)];
}

const std::vector<std::string> kSurnames = {"Sharma", "Gupta", "Lee", "Muller", "Rossi", "Silva", "Kim",
                                            "Nguyen", "Smith", "Tanaka", "Okafor", "Novak"};
const std::vector<std::string> kGiven = {"Anita", "Rahul", "Kevin", "Thomas", "Maria", "John",
                                         "Priya", "Elena", "David", "Sara", "Akira", "Chen"};
const std::vector<std::string> kInstitutes = {
    "BML Munjal University, Gurugram, India",       "Stanford University, Stanford, United States",
    "Technical University of Munich, Munich, Germany", "University of Bologna, Bologna, Italy",
    "University of Tokyo, Tokyo, Japan",            "University of Lagos, Lagos, Nigeria",
    "Charles University, Prague, Czech Republic",   "Unnamed Lab, Atlantis"};
const std::vector<std::pair<std::string, std::string>> kJournals = {
    {"Journal of Informetrics", "17511577"}, {"Scientometrics", "01389130"}, {"PLOS ONE", "19326203"},
    {"IEEE Access", "21693536"},             {"Quantitative Science Studies", "26413337"}};
const std::vector<std::string> kPublishers = {"Elsevier", "Springer", "Public Library of Science", "IEEE", "MIT Press"};
const std::vector<std::string> kDocTypes = {"Article", "Article", "Article", "Review", "Conference Paper"};
const std::vector<std::string> kOpenAccess = {"Gold", "Green", "Hybrid", ""};
const std::vector<std::string> kLanguages = {"English", "English", "English", "German", "Spanish"};
const std::vector<std::string> kKeywords = {"bibliometrics", "graph mining",  "citation analysis", "topic modeling",
                                            "open access",   "social networks", "text mining",     "research evaluation",
                                            "altmetrics",    "peer review"};
const std::vector<std::string> kWords = {"network", "citation", "analysis", "journal", "scholarly", "impact",
                                         "collaboration", "topic", "model", "science", "metric", "author"};

}  // namespace

std::string syn_scopus(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::vector<ss::csv::Row> rows = {{"Authors", "Author(s) ID", "Title", "Year", "Source title", "Cited by", "DOI",
                                     "Affiliations", "Abstract", "Author Keywords", "Index Keywords", "Funding Details",
                                     "Publisher", "ISSN", "Language of Original Document", "Document Type",
                                     "Open Access"}};
  std::uniform_int_distribution<int> team(1, 5), year(1998, 2023), cites(0, 60), words(6, 14), kw(1, 3);
  for (int i = 0; i < n; ++i) {
    std::vector<std::string> authors, ids, affils;
    const int size = team(rng);
    for (int a = 0; a < size; ++a) {
      auto s = std::uniform_int_distribution<size_t>(0, kSurnames.size() - 1)(rng);
      auto name = fmt::format("{}, {}", kSurnames[s], kGiven[s]);
      if (std::find(authors.begin(), authors.end(), name) != authors.end()) continue;
      authors.push_back(name);
      ids.push_back(std::to_string(2000 + s));
      affils.push_back(pick(kInstitutes, rng));
    }
    std::string title, abstract;
    for (int w = 0; w < 5; ++w) title += (w ? " " : "") + pick(kWords, rng);
    for (int w = 0, m = words(rng); w < m; ++w) abstract += (w ? " " : "") + pick(kWords, rng);
    std::vector<std::string> akw, ikw;
    for (int k = 0, m = kw(rng); k < m; ++k) akw.push_back(pick(kKeywords, rng));
    for (int k = 0, m = kw(rng) - 1; k < m; ++k) ikw.push_back(pick(kKeywords, rng));
    const auto& journal = pick(kJournals, rng);
    const bool dated = i % 17 != 5;  // records 5, 22, 39 carry no year
    rows.push_back({fmt::format("{}", fmt::join(authors, "; ")),
                    fmt::format("{}", fmt::join(ids, ";")),
                    fmt::format("{} {}", title, i),
                    dated ? std::to_string(year(rng)) : "",
                    journal.first,
                    std::to_string(cites(rng)),
                    i % 7 == 3 ? "" : fmt::format("10.5555/syn.{}.{}", seed, i),
                    fmt::format("{}", fmt::join(affils, "; ")),
                    abstract,
                    fmt::format("{}", fmt::join(akw, "; ")),
                    fmt::format("{}", fmt::join(ikw, "; ")),
                    i % 3 == 0 ? "National Science Foundation" : "",
                    pick(kPublishers, rng),
                    journal.second,
                    pick(kLanguages, rng),
                    pick(kDocTypes, rng),
                    pick(kOpenAccess, rng)});
  }
  return ss::csv::write(rows);
}

ss::Corpus syn50(std::uint64_t seed) {
  auto table = ss::ingest::parse_delimited(syn_scopus(seed, 50), ss::ingest::SourceKind::kScopus, "syn50.csv");
  return ss::ingest::merge_and_dedup({ss::ingest::apply_mapping(table, ss::ingest::infer_field_mapping(table))}).corpus;
}

ss::colabrix::Graph gn6() {
  ss::colabrix::Graph::Builder b;
  for (auto [u, v] : {std::pair{"a", "b"}, {"a", "c"}, {"b", "c"}, {"d", "e"}, {"d", "f"}, {"e", "f"}, {"c", "d"}})
    b.add_edge(u, v);
  return b.build();
}

ss::Record record(std::string id, std::string title, std::vector<std::string> authors, std::optional<int> year) {
  ss::Record r;
  r.id = std::move(id);
  r.title = std::move(title);
  r.authors = std::move(authors);
  r.year = year;
  return r;
}

namespace {

const std::vector<std::vector<std::string>> kTopicVocab = {
    {"galaxy", "nebula", "quasar", "pulsar", "comet", "asteroid", "meteor", "orbit", "telescope", "cosmos",
     "photon", "spectrum", "redshift", "stellar", "lunar", "solar", "planet", "supernova", "gravity", "eclipse"},
    {"protein", "enzyme", "genome", "neuron", "peptide", "ribosome", "antibody", "cytokine", "plasma", "membrane",
     "mitosis", "insulin", "hormone", "kinase", "lipid", "vaccine", "tissue", "cortex", "synapse", "bacteria"}};

Planted make(int docs, int tokens, std::uint64_t seed, bool keywords) {
  std::mt19937_64 rng(seed);
  std::vector<ss::Record> records;
  Planted out;
  for (int d = 0; d < docs; ++d) {
    const int topic = static_cast<int>(rng() % 2);
    std::string body;
    for (int t = 0; t < tokens; ++t) body += (t ? " " : "") + pick(kTopicVocab[static_cast<size_t>(topic)], rng);
    auto r = record(fmt::format("doc{:03}", d), "", {}, 2000 + d % 10);
    r.abstract = body;
    if (keywords) r.author_keywords = {kTopicVocab[static_cast<size_t>(topic)][static_cast<size_t>(d % 5)]};
    records.push_back(std::move(r));
    out.planted.push_back(topic);
  }
  out.corpus = ss::Corpus(std::move(records));
  return out;
}

}  // namespace

Planted planted_topics(int docs, int tokens_per_doc, std::uint64_t seed) { return make(docs, tokens_per_doc, seed, false); }

Planted separable_groups(int per_group, std::uint64_t seed) { return make(2 * per_group, 12, seed, true); }

}  // namespace fixtures

#include "scholarscope/dispatch.hpp"
#include "scholarscope/error.hpp"

namespace fixtures {

std::vector<NamedResult> every_result(const ss::Corpus& corpus, const ss::bibtrail::QuartileIndex* quartiles) {
  std::vector<NamedResult> out;
  ss::dispatch::Context ctx{quartiles, nullptr};
  std::set<std::string> seen;
  for (const auto& op : ss::dispatch::operations()) {
    std::vector<nlohmann::json> variants = {nlohmann::json::object()};
    for (const auto& p : op.params)
      for (const auto& choice : p.choices) variants.push_back({{p.name, choice}});
    for (const auto& params : variants) {
      auto name = fmt::format("{}.{}{}", op.module, op.name, params.dump());
      if (!seen.insert(name).second) continue;
      try {
        out.push_back({name, ss::dispatch::run(corpus, op.module, op.name, params, ctx)});
      } catch (const ss::Error&) {
      }
    }
  }
  return out;
}

}  // namespace fixtures
