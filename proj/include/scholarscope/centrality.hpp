#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "scholarscope/analysis_result.hpp"
#include "scholarscope/graph.hpp"

namespace scholarscope::colabrix {

enum class Measure { kDegree, kBetweenness, kCloseness, kEigenvector };
std::string_view to_string(Measure m);
std::optional<Measure> parse_measure(std::string_view s);

enum class Backend { kSerial, kParallel };

struct CentralityScores {
  Measure measure = Measure::kDegree;
  std::vector<std::string> nodes;  // graph label order
  std::vector<double> scores;      // parallel to nodes
  std::optional<double> lambda;    // eigenvector only

  double score_of(std::string_view node) const;
};

// Shortest paths are hop counts; only eigenvector centrality reads weights.
// Throws kEmptyGraph, and kDisconnectedGraph for eigenvector on a
// disconnected graph.
CentralityScores centrality(const Graph& graph, Measure measure, Backend backend = Backend::kParallel);

// Node label, score; sorted by score desc then label.
AnalysisResult centrality_result(const CentralityScores& scores);

// Equal-width histogram over [min, max], probabilities sum to 1. Columns
// bin_center, probability.
AnalysisResult centrality_distribution(const CentralityScores& scores, int bins);

// node,degree,betweenness,closeness[,eigenvector] with a header row.
// Eigenvector is included only when the graph is connected.
std::string node_metrics_csv(const Graph& graph, Backend backend = Backend::kParallel);

namespace kernels {

// Reference implementations: plain loops, one accumulator.
std::vector<double> betweenness_serial(const Graph& g);
std::vector<double> closeness_serial(const Graph& g);
// Indexed like Graph::edges().
std::vector<double> edge_betweenness_serial(const Graph& g);

// OpenMP versions. Sources are split into fixed blocks whose partial sums are
// added in block order, so results do not depend on the thread count.
std::vector<double> betweenness_parallel(const Graph& g);
std::vector<double> closeness_parallel(const Graph& g);
std::vector<double> edge_betweenness_parallel(const Graph& g);

// Power iteration on A + I. Returns (vector, lambda).
std::pair<std::vector<double>, double> eigenvector(const Graph& g, double tol = 1e-10, int max_iter = 10000);

}  // namespace kernels

}  // namespace scholarscope::colabrix
