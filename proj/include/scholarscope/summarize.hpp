#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "scholarscope/analysis_result.hpp"
#include "scholarscope/viz.hpp"

namespace scholarscope::summarize {

class SummaryProvider {
 public:
  virtual ~SummaryProvider() = default;
  // May throw; summarize_result falls back to the template on any failure.
  virtual std::string summarize(const std::string& prompt) const = 0;
  virtual std::chrono::seconds timeout() const { return std::chrono::seconds(30); }
  virtual std::string identifier() const = 0;
};

// Offline provider: turns the "Key: value" fact lines of a prompt built by
// build_prompt into fixed sentences. Deterministic.
class TemplateProvider final : public SummaryProvider {
 public:
  std::string summarize(const std::string& prompt) const override;
  std::string identifier() const override { return "fallback"; }
};

// POST {"prompt"} -> {"text"}, optional bearer token.
class HttpSummaryProvider final : public SummaryProvider {
 public:
  HttpSummaryProvider(std::string url, std::string token = {},
                      std::chrono::seconds timeout = std::chrono::seconds(30));
  std::string summarize(const std::string& prompt) const override;
  std::chrono::seconds timeout() const override { return timeout_; }
  std::string identifier() const override { return "http:" + url_; }

 private:
  std::string url_;
  std::string token_;
  std::chrono::seconds timeout_;
};

// HttpSummaryProvider when SCHOLARSCOPE_SUMMARY_URL is set (token from
// SCHOLARSCOPE_SUMMARY_TOKEN), otherwise TemplateProvider.
std::unique_ptr<SummaryProvider> provider_from_env();

inline constexpr std::string_view kNoData = "No data available for this analysis.";
inline constexpr size_t kMaxFallbackLength = 2000;

// Instruction line followed by "Key: value" fact lines read from the result.
std::string build_prompt(const AnalysisResult& result, const viz::ChartSpec* spec = nullptr);

struct Summary {
  std::string text;
  std::string provider;  // identifier of the provider that produced text
  bool fell_back = false;
};

// Summarizes `spec->data` when a spec is given (the rows actually plotted),
// else `result`.
Summary summarize_result(const AnalysisResult& result, const viz::ChartSpec* spec, const SummaryProvider& provider);

}  // namespace scholarscope::summarize
