#include "scholarscope/centrality.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"

namespace scholarscope::colabrix {

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::kDegree: return "degree";
    case Measure::kBetweenness: return "betweenness";
    case Measure::kCloseness: return "closeness";
    case Measure::kEigenvector: return "eigenvector";
  }
  return "degree";
}

std::optional<Measure> parse_measure(std::string_view s) {
  for (auto m : {Measure::kDegree, Measure::kBetweenness, Measure::kCloseness, Measure::kEigenvector})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

double CentralityScores::score_of(std::string_view node) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown node '{}'", node));
  return scores[static_cast<size_t>(it - nodes.begin())];
}

CentralityScores centrality(const Graph& graph, Measure measure, Backend backend) {
  if (graph.empty()) throw Error(ErrorCode::kEmptyGraph, "centrality of an empty graph");
  CentralityScores out;
  out.measure = measure;
  out.nodes = graph.labels();
  const bool par = backend == Backend::kParallel;
  switch (measure) {
    case Measure::kDegree:
      for (int v = 0; v < static_cast<int>(graph.node_count()); ++v) out.scores.push_back(graph.degree(v));
      break;
    case Measure::kBetweenness:
      out.scores = par ? kernels::betweenness_parallel(graph) : kernels::betweenness_serial(graph);
      break;
    case Measure::kCloseness:
      out.scores = par ? kernels::closeness_parallel(graph) : kernels::closeness_serial(graph);
      break;
    case Measure::kEigenvector: {
      if (!graph.is_connected())
        throw Error(ErrorCode::kDisconnectedGraph,
                    "eigenvector centrality needs a connected graph; use the giant component");
      if (graph.node_count() == 1) {
        out.scores = {1.0};
        out.lambda = 0.0;
        break;
      }
      auto [vec, lambda] = kernels::eigenvector(graph);
      out.scores = std::move(vec);
      out.lambda = lambda;
      break;
    }
  }
  return out;
}

AnalysisResult centrality_result(const CentralityScores& scores) {
  AnalysisResult r;
  r.kind = "centrality";
  r.label_column = "node";
  r.columns = {std::string(to_string(scores.measure))};
  for (size_t i = 0; i < scores.nodes.size(); ++i) r.rows.push_back({scores.nodes[i], {scores.scores[i]}});
  sort_by_count_desc(r.rows);
  r.meta["measure"] = std::string(to_string(scores.measure));
  r.meta["aggregation"] = "none";
  if (scores.measure == Measure::kBetweenness || scores.measure == Measure::kCloseness)
    r.meta["paths"] = "unweighted hop counts";
  if (scores.measure == Measure::kCloseness) r.meta["closeness_scope"] = "reachable nodes only";
  if (scores.lambda) r.meta["lambda"] = fmt::format("{}", *scores.lambda);
  return r;
}

AnalysisResult centrality_distribution(const CentralityScores& scores, int bins) {
  if (bins < 1) throw Error(ErrorCode::kInvalidArgument, "bins must be >= 1");
  if (scores.scores.empty()) throw Error(ErrorCode::kEmptyGraph, "no scores to bin");
  const auto [lo_it, hi_it] = std::minmax_element(scores.scores.begin(), scores.scores.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  AnalysisResult r;
  r.kind = "centrality_distribution";
  r.label_column = "bin";
  r.columns = {"bin_center", "probability"};
  r.meta["measure"] = std::string(to_string(scores.measure));
  r.meta["aggregation"] = "none";
  const double total = static_cast<double>(scores.scores.size());
  if (hi == lo) {
    r.rows.push_back({fmt::format("[{}, {}]", lo, hi), {lo, 1.0}});
    return r;
  }
  std::vector<double> counts(static_cast<size_t>(bins), 0.0);
  const double width = (hi - lo) / bins;
  for (double s : scores.scores) {
    auto b = static_cast<int>(std::floor((s - lo) / width));
    counts[static_cast<size_t>(std::clamp(b, 0, bins - 1))] += 1.0;
  }
  for (int b = 0; b < bins; ++b) {
    const double a = lo + width * b;
    const double z = b + 1 == bins ? hi : lo + width * (b + 1);
    r.rows.push_back({fmt::format("[{}, {}{}", a, z, b + 1 == bins ? "]" : ")"),
                      {(a + z) / 2.0, counts[static_cast<size_t>(b)] / total}});
  }
  return r;
}

std::string node_metrics_csv(const Graph& graph, Backend backend) {
  std::vector<csv::Row> rows;
  const bool with_eig = !graph.empty() && graph.is_connected();
  csv::Row header = {"node", "degree", "betweenness", "closeness"};
  if (with_eig) header.push_back("eigenvector");
  rows.push_back(header);
  if (graph.empty()) return csv::write(rows);
  auto deg = centrality(graph, Measure::kDegree, backend);
  auto btw = centrality(graph, Measure::kBetweenness, backend);
  auto clo = centrality(graph, Measure::kCloseness, backend);
  std::optional<CentralityScores> eig;
  if (with_eig) eig = centrality(graph, Measure::kEigenvector, backend);
  for (size_t i = 0; i < graph.node_count(); ++i) {
    csv::Row row = {graph.labels()[i], fmt::format("{}", deg.scores[i]), fmt::format("{}", btw.scores[i]),
                    fmt::format("{}", clo.scores[i])};
    if (eig) row.push_back(fmt::format("{}", eig->scores[i]));
    rows.push_back(std::move(row));
  }
  return csv::write(rows);
}

}  // namespace scholarscope::colabrix
