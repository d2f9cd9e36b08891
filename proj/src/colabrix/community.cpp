#include "scholarscope/community.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"

namespace scholarscope::colabrix {

std::string_view to_string(CommunityMethod m) {
  switch (m) {
    case CommunityMethod::kGirvanNewman: return "girvan_newman";
    case CommunityMethod::kGreedyModularity: return "greedy_modularity";
    case CommunityMethod::kLeiden: return "leiden";
  }
  return "leiden";
}

std::optional<CommunityMethod> parse_community_method(std::string_view s) {
  for (auto m : {CommunityMethod::kGirvanNewman, CommunityMethod::kGreedyModularity, CommunityMethod::kLeiden})
    if (s == to_string(m)) return m;
  return std::nullopt;
}

int Partition::community_of(std::string_view node) const {
  auto it = std::lower_bound(nodes.begin(), nodes.end(), node);
  if (it == nodes.end() || *it != node) throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown node '{}'", node));
  return assignment[static_cast<size_t>(it - nodes.begin())];
}

int Partition::community_count() const {
  return assignment.empty() ? 0 : *std::max_element(assignment.begin(), assignment.end()) + 1;
}

std::vector<int> canonical_assignment(const std::vector<int>& assignment) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(assignment.size());
  for (int c : assignment) out.push_back(remap.try_emplace(c, static_cast<int>(remap.size())).first->second);
  return out;
}

double modularity(const Graph& graph, const std::vector<int>& assignment, double resolution) {
  const auto n = graph.node_count();
  if (assignment.size() != n)
    throw Error(ErrorCode::kPartitionMismatch,
                fmt::format("partition covers {} nodes, graph has {}", assignment.size(), n));
  if (std::any_of(assignment.begin(), assignment.end(), [](int c) { return c < 0; }))
    throw Error(ErrorCode::kPartitionMismatch, "negative community id");
  const double m = static_cast<double>(graph.total_weight());
  if (m == 0.0) return 0.0;
  std::map<int, double> in;
  std::map<int, double> tot;
  for (int v = 0; v < static_cast<int>(n); ++v) {
    const int c = assignment[static_cast<size_t>(v)];
    tot[c] += static_cast<double>(graph.strength(v));
    for (const auto& nb : graph.neighbors(v))
      if (assignment[static_cast<size_t>(nb.node)] == c) in[c] += static_cast<double>(nb.weight);
  }
  double q = 0.0;
  for (const auto& [c, t] : tot) {
    const double frac = t / (2.0 * m);
    q += in[c] / (2.0 * m) - resolution * frac * frac;
  }
  return q;
}

namespace {

std::vector<int> component_assignment(const Graph& g) {
  std::vector<int> out(g.node_count(), 0);
  int id = 0;
  for (const auto& comp : g.connected_components()) {
    for (int v : comp) out[static_cast<size_t>(v)] = id;
    ++id;
  }
  return out;
}

std::vector<int> girvan_newman(const Graph& graph, Backend backend) {
  Graph g = graph;
  auto best = component_assignment(g);
  double best_q = modularity(graph, best);
  size_t n_comp = g.connected_components().size();
  while (g.edge_count() > 0) {
    const auto eb = backend == Backend::kParallel ? kernels::edge_betweenness_parallel(g)
                                                   : kernels::edge_betweenness_serial(g);
    const auto edges = g.edges();
    // Edges are ordered by (u, v) and indices follow label order, so the first
    // maximum is the lexicographically smallest edge.
    size_t pick = 0;
    for (size_t i = 1; i < eb.size(); ++i)
      if (eb[i] > eb[pick] + 1e-9 * std::max(1.0, eb[pick])) pick = i;
    g = g.without_edge(edges[pick].u, edges[pick].v);
    const auto comps = g.connected_components().size();
    if (comps == n_comp) continue;
    n_comp = comps;
    auto assignment = component_assignment(g);
    const double q = modularity(graph, assignment);
    if (q > best_q + 1e-12) {
      best_q = q;
      best = std::move(assignment);
    }
  }
  return best;
}

std::vector<int> greedy_modularity(const Graph& graph) {
  const auto n = graph.node_count();
  const double m = static_cast<double>(graph.total_weight());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  if (m == 0.0) return parent;
  std::vector<std::map<int, double>> adj(n);
  std::vector<double> a(n, 0.0);
  for (int v = 0; v < static_cast<int>(n); ++v) {
    a[static_cast<size_t>(v)] = static_cast<double>(graph.strength(v));
    for (const auto& nb : graph.neighbors(v)) adj[static_cast<size_t>(v)][nb.node] = static_cast<double>(nb.weight);
  }
  while (true) {
    double best_gain = 0.0;
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < static_cast<int>(n); ++i) {
      for (const auto& [j, w] : adj[static_cast<size_t>(i)]) {
        if (j <= i) continue;
        const double gain = w / m - a[static_cast<size_t>(i)] * a[static_cast<size_t>(j)] / (2.0 * m * m);
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    auto& ai = adj[static_cast<size_t>(bi)];
    for (const auto& [k, w] : adj[static_cast<size_t>(bj)]) {
      if (k == bi) continue;
      ai[k] += w;
      adj[static_cast<size_t>(k)][bi] += w;
      adj[static_cast<size_t>(k)].erase(bj);
    }
    ai.erase(bj);
    adj[static_cast<size_t>(bj)].clear();
    a[static_cast<size_t>(bi)] += a[static_cast<size_t>(bj)];
    for (auto& p : parent)
      if (p == bj) p = bi;
  }
  return parent;
}

// Working graph for Leiden: aggregated nodes, no self-loops; k holds node
// strength including weight folded inside the node.
struct LevelGraph {
  std::vector<std::vector<std::pair<int, double>>> adj;
  std::vector<double> k;
  double m2 = 0.0;
  size_t size() const { return k.size(); }
};

int distinct_count(const std::vector<int>& p) {
  std::vector<int> s(p);
  std::sort(s.begin(), s.end());
  return static_cast<int>(std::unique(s.begin(), s.end()) - s.begin());
}

bool move_nodes_fast(const LevelGraph& g, std::vector<int>& p, std::mt19937_64& rng, double gamma) {
  const auto n = g.size();
  std::vector<double> tot(n, 0.0);
  for (size_t v = 0; v < n; ++v) tot[static_cast<size_t>(p[v])] += g.k[v];
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::deque<int> queue(order.begin(), order.end());
  std::vector<char> queued(n, 1);
  std::vector<double> w_to(n, 0.0);
  std::vector<int> touched;
  bool changed = false;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    const auto vi = static_cast<size_t>(v);
    queued[vi] = 0;
    const int old_c = p[vi];
    touched.clear();
    for (const auto& [u, w] : g.adj[vi]) {
      const int c = p[static_cast<size_t>(u)];
      if (w_to[static_cast<size_t>(c)] == 0.0) touched.push_back(c);
      w_to[static_cast<size_t>(c)] += w;
    }
    tot[static_cast<size_t>(old_c)] -= g.k[vi];
    int best = old_c;
    double best_gain = w_to[static_cast<size_t>(old_c)] - gamma * g.k[vi] * tot[static_cast<size_t>(old_c)] / g.m2;
    std::sort(touched.begin(), touched.end());
    for (int c : touched) {
      const double gain = w_to[static_cast<size_t>(c)] - gamma * g.k[vi] * tot[static_cast<size_t>(c)] / g.m2;
      if (gain > best_gain + 1e-12) {
        best_gain = gain;
        best = c;
      }
    }
    for (int c : touched) w_to[static_cast<size_t>(c)] = 0.0;
    tot[static_cast<size_t>(best)] += g.k[vi];
    p[vi] = best;
    if (best != old_c) {
      changed = true;
      for (const auto& [u, w] : g.adj[vi]) {
        const auto ui = static_cast<size_t>(u);
        if (p[ui] != best && !queued[ui]) {
          queued[ui] = 1;
          queue.push_back(u);
        }
      }
    }
  }
  return changed;
}

std::vector<int> refine(const LevelGraph& g, const std::vector<int>& p, std::mt19937_64& rng, double gamma) {
  const auto n = g.size();
  std::vector<int> r(n);
  std::iota(r.begin(), r.end(), 0);
  std::vector<int> size_r(n, 1);
  std::vector<double> tot_r(g.k);
  std::vector<double> ext(n, 0.0);
  for (size_t v = 0; v < n; ++v)
    for (const auto& [u, w] : g.adj[v])
      if (p[static_cast<size_t>(u)] == p[v]) ext[v] += w;
  std::vector<double> ext_r(ext);

  std::map<int, std::vector<int>> members;
  for (size_t v = 0; v < n; ++v) members[p[v]].push_back(static_cast<int>(v));
  std::vector<double> w_to(n, 0.0);
  std::vector<int> touched;
  for (auto& [c, nodes] : members) {
    double k_c = 0.0;
    for (int v : nodes) k_c += g.k[static_cast<size_t>(v)];
    std::shuffle(nodes.begin(), nodes.end(), rng);
    for (int v : nodes) {
      const auto vi = static_cast<size_t>(v);
      if (size_r[static_cast<size_t>(r[vi])] != 1) continue;
      if (ext[vi] < gamma * g.k[vi] * (k_c - g.k[vi]) / g.m2) continue;
      touched.clear();
      for (const auto& [u, w] : g.adj[vi]) {
        const auto ui = static_cast<size_t>(u);
        if (p[ui] != c) continue;
        const int t = r[ui];
        if (w_to[static_cast<size_t>(t)] == 0.0) touched.push_back(t);
        w_to[static_cast<size_t>(t)] += w;
      }
      std::sort(touched.begin(), touched.end());
      int best = -1;
      double best_gain = 0.0;
      for (int t : touched) {
        const auto ti = static_cast<size_t>(t);
        if (ext_r[ti] < gamma * tot_r[ti] * (k_c - tot_r[ti]) / g.m2) continue;
        const double gain = w_to[ti] - gamma * g.k[vi] * tot_r[ti] / g.m2;
        if (gain > best_gain + 1e-12) {
          best_gain = gain;
          best = t;
        }
      }
      if (best >= 0) {
        const auto bi = static_cast<size_t>(best);
        ext_r[bi] += ext[vi] - 2.0 * w_to[bi];
        tot_r[bi] += g.k[vi];
        ++size_r[bi];
        size_r[static_cast<size_t>(r[vi])] = 0;
        r[vi] = best;
      }
      for (int t : touched) w_to[static_cast<size_t>(t)] = 0.0;
    }
  }
  return r;
}

// Collapses g by refined communities r. Returns the aggregate node of every
// level node; `p` is rewritten as the partition of the aggregate nodes.
std::vector<int> aggregate(LevelGraph& g, const std::vector<int>& r, std::vector<int>& p) {
  const auto ids = canonical_assignment(r);
  const auto n_new = static_cast<size_t>(distinct_count(ids));
  LevelGraph out;
  out.k.assign(n_new, 0.0);
  out.adj.resize(n_new);
  out.m2 = g.m2;
  std::vector<int> p_new(n_new, 0);
  std::vector<std::map<int, double>> acc(n_new);
  for (size_t v = 0; v < g.size(); ++v) {
    const auto a = static_cast<size_t>(ids[v]);
    out.k[a] += g.k[v];
    p_new[a] = p[v];
    for (const auto& [u, w] : g.adj[v]) {
      const int b = ids[static_cast<size_t>(u)];
      if (b != static_cast<int>(a)) acc[a][b] += w;
    }
  }
  for (size_t a = 0; a < n_new; ++a) out.adj[a].assign(acc[a].begin(), acc[a].end());
  g = std::move(out);
  p = canonical_assignment(p_new);
  return ids;
}

std::vector<int> leiden_pass(const Graph& graph, std::vector<int> initial, std::mt19937_64& rng, double gamma) {
  LevelGraph g;
  const auto n = graph.node_count();
  g.adj.resize(n);
  g.k.resize(n);
  for (int v = 0; v < static_cast<int>(n); ++v) {
    g.k[static_cast<size_t>(v)] = static_cast<double>(graph.strength(v));
    for (const auto& nb : graph.neighbors(v)) g.adj[static_cast<size_t>(v)].push_back({nb.node, static_cast<double>(nb.weight)});
    g.m2 += g.k[static_cast<size_t>(v)];
  }
  std::vector<int> level_of(n);
  std::iota(level_of.begin(), level_of.end(), 0);
  std::vector<int> p = std::move(initial);
  while (true) {
    move_nodes_fast(g, p, rng, gamma);
    if (distinct_count(p) == static_cast<int>(g.size())) break;
    auto r = refine(g, p, rng, gamma);
    if (distinct_count(r) == static_cast<int>(g.size())) r = p;
    const auto ids = aggregate(g, r, p);
    for (auto& l : level_of) l = ids[static_cast<size_t>(l)];
  }
  std::vector<int> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = p[static_cast<size_t>(level_of[i])];
  return out;
}

std::vector<int> leiden(const Graph& graph, std::uint64_t seed, double gamma) {
  std::vector<int> current(graph.node_count());
  std::iota(current.begin(), current.end(), 0);
  if (graph.total_weight() == 0) return current;
  std::mt19937_64 rng(seed);
  double q = modularity(graph, current, gamma);
  for (int iter = 0; iter < 20; ++iter) {
    auto next = canonical_assignment(leiden_pass(graph, current, rng, gamma));
    const double nq = modularity(graph, next, gamma);
    if (next == current || nq < q + 1e-12) {
      if (nq > q) current = std::move(next);
      break;
    }
    current = std::move(next);
    q = nq;
  }
  return current;
}

}  // namespace

Partition detect_communities(const Graph& graph, CommunityMethod method, const CommunityOptions& options) {
  if (graph.empty()) throw Error(ErrorCode::kEmptyGraph, "community detection on an empty graph");
  if (!(options.resolution > 0.0)) throw Error(ErrorCode::kInvalidArgument, "resolution must be positive");
  std::vector<int> assignment;
  switch (method) {
    case CommunityMethod::kGirvanNewman: assignment = girvan_newman(graph, options.backend); break;
    case CommunityMethod::kGreedyModularity: assignment = greedy_modularity(graph); break;
    case CommunityMethod::kLeiden: assignment = leiden(graph, options.seed, options.resolution); break;
  }
  Partition p;
  p.nodes = graph.labels();
  p.assignment = canonical_assignment(assignment);
  p.modularity = modularity(graph, p.assignment);
  return p;
}

AnalysisResult partition_result(const Graph& graph, const Partition& partition) {
  AnalysisResult r;
  r.kind = "communities";
  r.label_column = "node";
  r.columns = {"community"};
  for (size_t i = 0; i < partition.nodes.size(); ++i)
    r.rows.push_back({partition.nodes[i], {static_cast<double>(partition.assignment[i])}});
  r.meta["modularity"] = fmt::format("{}", partition.modularity);
  r.meta["communities"] = std::to_string(partition.community_count());
  r.meta["aggregation"] = "none";
  attach_graph(r, graph);
  return r;
}

std::string partition_csv(const Partition& partition) {
  std::vector<csv::Row> rows = {{"node", "community"}};
  for (size_t i = 0; i < partition.nodes.size(); ++i)
    rows.push_back({partition.nodes[i], std::to_string(partition.assignment[i])});
  return csv::write(rows);
}

}  // namespace scholarscope::colabrix
