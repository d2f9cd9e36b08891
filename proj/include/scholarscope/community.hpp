#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scholarscope/analysis_result.hpp"
#include "scholarscope/centrality.hpp"
#include "scholarscope/graph.hpp"

namespace scholarscope::colabrix {

enum class CommunityMethod { kGirvanNewman, kGreedyModularity, kLeiden };
std::string_view to_string(CommunityMethod m);
std::optional<CommunityMethod> parse_community_method(std::string_view s);

// Community ids are canonical: numbered 0.. in order of each community's
// smallest node index.
struct Partition {
  std::vector<std::string> nodes;  // graph label order
  std::vector<int> assignment;     // parallel to nodes
  double modularity = 0.0;

  int community_of(std::string_view node) const;
  int community_count() const;
  bool operator==(const Partition&) const = default;
};

// Weighted Newman-Girvan modularity; 0 when the graph has no edges. Throws
// kPartitionMismatch unless assignment has one non-negative id per node.
double modularity(const Graph& graph, const std::vector<int>& assignment, double resolution = 1.0);

std::vector<int> canonical_assignment(const std::vector<int>& assignment);

struct CommunityOptions {
  std::uint64_t seed = 0;
  double resolution = 1.0;  // leiden only
  Backend backend = Backend::kParallel;
};

// Throws kEmptyGraph.
Partition detect_communities(const Graph& graph, CommunityMethod method, const CommunityOptions& options = {});

// Node label, community id; rows in graph label order. Graph JSON attached.
AnalysisResult partition_result(const Graph& graph, const Partition& partition);
// node,community with a header row.
std::string partition_csv(const Partition& partition);

}  // namespace scholarscope::colabrix
