#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scholarscope/analysis_result.hpp"
#include "scholarscope/corpus.hpp"

namespace scholarscope::colabrix {

// Weighted undirected simple graph in compressed adjacency form. Node labels
// are unique and sorted ascending, so node indices are deterministic for a
// given label set. Weights are positive integers (joint-paper counts).
class Graph {
 public:
  struct Neighbor {
    int node;
    std::int64_t weight;
  };
  struct Edge {
    int u;  // u < v
    int v;
    std::int64_t weight;

    bool operator==(const Edge&) const = default;
  };

  // Accumulates node labels and edge increments in any order.
  class Builder {
   public:
    void add_node(std::string_view label);
    // Adds `weight` to edge {a, b}; self-loops are ignored (nodes still added).
    void add_edge(std::string_view a, std::string_view b, std::int64_t weight = 1);
    Graph build() const;

   private:
    std::map<std::string, std::map<std::string, std::int64_t>> adj_;
  };

  Graph() = default;

  size_t node_count() const { return labels_.size(); }
  size_t edge_count() const { return neighbors_.size() / 2; }
  bool empty() const { return labels_.empty(); }

  const std::string& label(int v) const { return labels_[static_cast<size_t>(v)]; }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<int> index_of(std::string_view label) const;

  std::span<const Neighbor> neighbors(int v) const {
    auto b = offsets_[static_cast<size_t>(v)];
    auto e = offsets_[static_cast<size_t>(v) + 1];
    return {neighbors_.data() + b, e - b};
  }
  int degree(int v) const { return static_cast<int>(neighbors(v).size()); }
  // Sum of incident edge weights.
  std::int64_t strength(int v) const;
  std::int64_t weight(int u, int v) const;  // 0 when not adjacent
  std::int64_t total_weight() const;        // m: sum of edge weights

  std::vector<Edge> edges() const;

  // Components as sorted node-index lists, ordered by their smallest node.
  std::vector<std::vector<int>> connected_components() const;
  bool is_connected() const;

  Graph induced_subgraph(std::span<const int> nodes) const;
  // Same nodes, edges with weight < min_weight removed.
  Graph filter_edges(std::int64_t min_weight) const;
  Graph without_edge(int u, int v) const;

  bool operator==(const Graph& o) const {
    return labels_ == o.labels_ && offsets_ == o.offsets_ && edges() == o.edges();
  }

 private:
  static Graph from_edges(std::vector<std::string> labels, const std::vector<Edge>& edges);

  std::vector<std::string> labels_;
  std::vector<size_t> offsets_{0};
  std::vector<Neighbor> neighbors_;
};

enum class NetworkLevel { kAuthor, kCountry };
std::optional<NetworkLevel> parse_network_level(std::string_view s);

// Node per distinct author (or country); edge weight = number of records in
// which both appear. Records with fewer than two entities add isolated nodes.
Graph build_graph(const Corpus& corpus, NetworkLevel level);

// rank 1 = largest component by node count, rank 2 = second largest. Size
// ties go to the component holding the smallest node label.
Graph giant_component(const Graph& graph, int rank);

// {"nodes":[{"id","degree"}], "links":[{"source","target","weight"}]}
nlohmann::json graph_to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::json& j);
// source,target,weight with a header row.
std::string edge_list_csv(const Graph& graph);

inline constexpr std::string_view kEdgeSeparator = " -- ";

// Edge-list AnalysisResult ("u -- v", weight) with the full graph JSON in
// meta["graph"] so isolated nodes survive.
AnalysisResult network_result(const Graph& graph, std::string kind = "network");
void attach_graph(AnalysisResult& result, const Graph& graph);

}  // namespace scholarscope::colabrix
