#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/dispatch.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/ingest.hpp"
#include "scholarscope/service.hpp"
#include "scholarscope/summarize.hpp"
#include "scholarscope/viz.hpp"

namespace {

using nlohmann::json;
namespace ss = scholarscope;

// I/O failure on a named file; reported like a data error.
struct FileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw FileError(fmt::format("cannot write {}", path));
}

json read_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ss::Error(ss::ErrorCode::kInvalidArgument, fmt::format("{}: {}", path, e.what()));
  }
}

std::string label_of(const std::string& path) { return std::filesystem::path(path).filename().string(); }

struct IngestArgs {
  std::vector<std::string> files;
  std::string kind = "scopus";
  std::string out;
  std::string report;
  std::string mapping;
};

int run_ingest(const IngestArgs& a) {
  auto kind = ss::ingest::parse_source_kind(a.kind);
  if (!kind) throw CLI::ValidationError("--kind", "must be scopus, wos or csv");
  std::optional<ss::ingest::FieldMapping> forced;
  if (!a.mapping.empty()) forced = read_json(a.mapping).get<ss::ingest::FieldMapping>();
  std::vector<std::vector<ss::Record>> lists;
  for (const auto& f : a.files) {
    auto table = ss::ingest::parse_delimited(read_file(f), *kind, label_of(f));
    auto mapping = forced ? *forced : ss::ingest::infer_field_mapping(table);
    ss::ingest::validate_mapping(table, mapping);
    lists.push_back(ss::ingest::apply_mapping(table, mapping));
  }
  auto merged = ss::ingest::merge_and_dedup(lists);
  write_file(a.out, ss::write_corpus_csv(merged.corpus));
  const std::string report = json(merged.report).dump(2) + "\n";
  if (a.report.empty())
    std::cout << report;
  else
    write_file(a.report, report);
  return 0;
}

struct AnalyzeArgs {
  std::string corpus;
  std::string module;
  std::string op;
  std::string mode;
  std::string params = "{}";
  std::string filter;
  std::string scimago;
  int scimago_year = 0;
  std::string json_out;
  std::string csv;
  std::string svg;
  std::string chart_options;
  std::string bg = "white";
};

int run_analyze(const AnalyzeArgs& a) {
  json params;
  try {
    params = json::parse(a.params);
  } catch (const json::parse_error&) {
    throw CLI::ValidationError("--params", "must be a JSON object");
  }
  if (!a.mode.empty()) params["mode"] = a.mode;
  auto background = ss::viz::parse_background(a.bg);
  if (!background) throw CLI::ValidationError("--bg", "must be white or transparent");

  auto corpus = ss::read_corpus_csv(read_file(a.corpus));
  if (!a.filter.empty()) {
    auto spec = read_json(a.filter).get<ss::FilterSpec>();
    spec.validate();
    corpus = ss::filter(corpus, spec);
  }
  std::optional<ss::bibtrail::QuartileIndex> quartiles;
  if (!a.scimago.empty()) quartiles = ss::bibtrail::load_scimago(read_file(a.scimago), a.scimago_year);
  ss::dispatch::Context ctx{quartiles ? &*quartiles : nullptr, nullptr};
  auto result = ss::dispatch::run(corpus, a.module, a.op, params, ctx);

  const std::string text = json(result).dump();
  if (a.json_out.empty())
    std::cout << text << "\n";
  else
    write_file(a.json_out, text);
  if (!a.csv.empty()) write_file(a.csv, ss::viz::export_csv(result));
  if (!a.svg.empty()) {
    ss::viz::ChartOptions options;
    if (!a.chart_options.empty()) options = read_json(a.chart_options).get<ss::viz::ChartOptions>();
    write_file(a.svg, ss::viz::render_svg(ss::viz::build_chart_spec(result, options), *background));
  }
  return 0;
}

struct SummarizeArgs {
  std::string input;
  std::string provider = "fallback";
  std::string token;
};

int run_summarize(const SummarizeArgs& a) {
  const auto data = read_file(a.input);
  ss::AnalysisResult result;
  if (a.input.size() >= 5 && a.input.substr(a.input.size() - 5) == ".json")
    result = json::parse(data).get<ss::AnalysisResult>();
  else
    result = ss::viz::parse_exported_csv(data);
  std::unique_ptr<ss::summarize::SummaryProvider> provider;
  if (a.provider == "fallback")
    provider = std::make_unique<ss::summarize::TemplateProvider>();
  else
    provider = std::make_unique<ss::summarize::HttpSummaryProvider>(a.provider, a.token);
  auto s = ss::summarize::summarize_result(result, nullptr, *provider);
  if (s.fell_back) std::cerr << fmt::format("provider {} failed; used fallback\n", a.provider);
  std::cout << s.text << "\n";
  return 0;
}

ss::service::Service* g_service = nullptr;

int run_serve(const std::string& host, int port, const std::string& data_dir) {
  auto config = ss::service::config_from_env();
  if (!data_dir.empty()) config.data_dir = data_dir;
  ss::service::Service service(config);
  int bound = service.bind(host, port);
  if (bound < 0) {
    std::cerr << fmt::format("cannot bind {}:{}\n", host, port);
    return 2;
  }
  g_service = &service;
  std::signal(SIGINT, [](int) { g_service->stop(); });
  std::signal(SIGTERM, [](int) { g_service->stop(); });
  std::cerr << fmt::format("listening on http://{}:{} (data: {})\n", host, bound, config.data_dir.string());
  service.listen();
  g_service = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scholarly-data analysis: ingest exports, run analyses, chart and summarize results."};
  app.require_subcommand(1);

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Merge and deduplicate export files into a corpus CSV");
  ingest_cmd->add_option("files", ingest.files, "Export files")->required()->check(CLI::ExistingFile);
  ingest_cmd->add_option("--kind", ingest.kind, "scopus, wos or csv")->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Corpus CSV to write")->required();
  ingest_cmd->add_option("--report", ingest.report, "Dedup report JSON (default: stdout)");
  ingest_cmd->add_option("--mapping", ingest.mapping, "FieldMapping JSON applied to every file");

  AnalyzeArgs analyze;
  auto* analyze_cmd = app.add_subcommand("analyze", "Run one analysis on a corpus CSV");
  analyze_cmd->add_option("corpus", analyze.corpus, "Corpus CSV")->required()->check(CLI::ExistingFile);
  analyze_cmd->add_option("--module", analyze.module, "bibtrail, scitrace, colabrix or themantix")->required();
  analyze_cmd->add_option("--op,--operation", analyze.op, "Operation name")->required();
  analyze_cmd->add_option("--mode", analyze.mode, "Shorthand for params.mode");
  analyze_cmd->add_option("--params", analyze.params, "Operation parameters as a JSON object");
  analyze_cmd->add_option("--filter", analyze.filter, "FilterSpec JSON file");
  analyze_cmd->add_option("--scimago", analyze.scimago, "Scimago journal rank file");
  analyze_cmd->add_option("--scimago-year", analyze.scimago_year, "Year of the Scimago file");
  analyze_cmd->add_option("--json", analyze.json_out, "Result JSON (default: stdout)");
  analyze_cmd->add_option("--csv", analyze.csv, "Export the result as CSV");
  analyze_cmd->add_option("--svg", analyze.svg, "Render a chart");
  analyze_cmd->add_option("--chart-options", analyze.chart_options, "ChartOptions JSON file");
  analyze_cmd->add_option("--bg", analyze.bg, "white or transparent")->capture_default_str();

  SummarizeArgs summarize;
  auto* summarize_cmd = app.add_subcommand("summarize", "Summarize an exported result (CSV or JSON)");
  summarize_cmd->add_option("result", summarize.input, "Result CSV or JSON")->required()->check(CLI::ExistingFile);
  summarize_cmd->add_option("--provider", summarize.provider, "Provider URL or 'fallback'")->capture_default_str();
  summarize_cmd->add_option("--token", summarize.token, "Bearer token for the provider");

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string data_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->capture_default_str()->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--data-dir", data_dir, "Project store (default: $SCHOLARSCOPE_DATA_DIR)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ingest_cmd) return run_ingest(ingest);
    if (*analyze_cmd) return run_analyze(analyze);
    if (*summarize_cmd) return run_summarize(summarize);
    if (*serve_cmd) return run_serve(host, port, data_dir);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ss::Error& e) {
    std::cerr << fmt::format("error [{}]: {}\n", ss::error_code_name(e.code()), e.what());
    return 2;
  } catch (const FileError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
