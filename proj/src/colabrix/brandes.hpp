#pragma once

#include <vector>

#include "scholarscope/graph.hpp"

namespace scholarscope::colabrix::detail {

// Edge index (as in Graph::edges()) of every adjacency slot.
std::vector<int> slot_edges(const Graph& g);

// Scratch buffers for one single-source pass, reused across sources.
struct BrandesWorkspace {
  explicit BrandesWorkspace(size_t n) : dist(n), sigma(n), delta(n) { order.reserve(n); }
  std::vector<int> dist;
  std::vector<double> sigma;
  std::vector<double> delta;
  std::vector<int> order;
};

// Adds the dependencies of source s to node_acc (size n) and, when non-null,
// edge_acc (size edge_count). Each unordered pair is seen from both ends, so
// callers halve the totals.
void brandes_source(const Graph& g, int s, BrandesWorkspace& ws, double* node_acc, double* edge_acc,
                    const std::vector<int>* slot_edge);

// Sum of hop distances from s to every node it reaches.
long long distance_sum(const Graph& g, int s, std::vector<int>& dist, std::vector<int>& queue);

}  // namespace scholarscope::colabrix::detail
