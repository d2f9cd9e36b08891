#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "scholarscope/analysis_result.hpp"
#include "scholarscope/bibtrail.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/scitrace.hpp"

// Name-based entry point to every analysis, shared by the HTTP service and
// the CLI so both produce the same bytes as a direct library call.
namespace scholarscope::dispatch {

struct Context {
  const bibtrail::QuartileIndex* quartiles = nullptr;
  const scitrace::GenderProvider* gender = nullptr;  // null = bundled table
};

struct ParamSpec {
  std::string name;
  nlohmann::json default_value;      // null = optional without default
  std::vector<std::string> choices;  // empty = free value
};

struct Operation {
  std::string module;
  std::string name;
  std::vector<ParamSpec> params;
  std::function<AnalysisResult(const Corpus&, const nlohmann::json&, const Context&)> run;
};

const std::vector<Operation>& operations();
// {"modules": {module: {operation: {param: {"default", "choices"}}}}}
nlohmann::json describe_operations();

// Throws Error(kInvalidArgument) for an unknown module/operation, an unknown
// parameter, a value outside its choices or of the wrong type; module errors
// propagate unchanged.
AnalysisResult run(const Corpus& corpus, const std::string& module, const std::string& operation,
                   const nlohmann::json& params, const Context& context = {});

}  // namespace scholarscope::dispatch
