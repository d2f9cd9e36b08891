#include <algorithm>

#include "brandes.hpp"
#include "scholarscope/centrality.hpp"

namespace scholarscope::colabrix {
namespace detail {

std::vector<int> slot_edges(const Graph& g) {
  std::vector<int> out;
  const auto edges = g.edges();
  for (int u = 0; u < static_cast<int>(g.node_count()); ++u) {
    for (const auto& n : g.neighbors(u)) {
      Graph::Edge key{std::min(u, n.node), std::max(u, n.node), 0};
      auto it = std::lower_bound(edges.begin(), edges.end(), key, [](const Graph::Edge& a, const Graph::Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
      });
      out.push_back(static_cast<int>(it - edges.begin()));
    }
  }
  return out;
}

void brandes_source(const Graph& g, int s, BrandesWorkspace& ws, double* node_acc, double* edge_acc,
                    const std::vector<int>* slot_edge) {
  const auto n = g.node_count();
  std::fill(ws.dist.begin(), ws.dist.end(), -1);
  std::fill(ws.sigma.begin(), ws.sigma.end(), 0.0);
  std::fill(ws.delta.begin(), ws.delta.end(), 0.0);
  ws.order.clear();

  ws.dist[static_cast<size_t>(s)] = 0;
  ws.sigma[static_cast<size_t>(s)] = 1.0;
  ws.order.push_back(s);
  for (size_t head = 0; head < ws.order.size(); ++head) {
    int v = ws.order[head];
    for (const auto& nb : g.neighbors(v)) {
      auto w = static_cast<size_t>(nb.node);
      if (ws.dist[w] < 0) {
        ws.dist[w] = ws.dist[static_cast<size_t>(v)] + 1;
        ws.order.push_back(nb.node);
      }
      if (ws.dist[w] == ws.dist[static_cast<size_t>(v)] + 1) ws.sigma[w] += ws.sigma[static_cast<size_t>(v)];
    }
  }

  const Graph::Neighbor* base = n > 0 && g.edge_count() > 0 ? g.neighbors(0).data() : nullptr;
  for (auto it = ws.order.rbegin(); it != ws.order.rend(); ++it) {
    int w = *it;
    auto wi = static_cast<size_t>(w);
    for (const auto& nb : g.neighbors(w)) {
      auto v = static_cast<size_t>(nb.node);
      if (ws.dist[v] == ws.dist[wi] - 1) {
        double c = ws.sigma[v] / ws.sigma[wi] * (1.0 + ws.delta[wi]);
        ws.delta[v] += c;
        if (edge_acc != nullptr) edge_acc[(*slot_edge)[static_cast<size_t>(&nb - base)]] += c;
      }
    }
    if (w != s) node_acc[wi] += ws.delta[wi];
  }
}

long long distance_sum(const Graph& g, int s, std::vector<int>& dist, std::vector<int>& queue) {
  std::fill(dist.begin(), dist.end(), -1);
  queue.clear();
  dist[static_cast<size_t>(s)] = 0;
  queue.push_back(s);
  long long total = 0;
  for (size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    total += dist[static_cast<size_t>(v)];
    for (const auto& nb : g.neighbors(v)) {
      if (dist[static_cast<size_t>(nb.node)] < 0) {
        dist[static_cast<size_t>(nb.node)] = dist[static_cast<size_t>(v)] + 1;
        queue.push_back(nb.node);
      }
    }
  }
  return total;
}

}  // namespace detail

namespace kernels {

std::vector<double> betweenness_serial(const Graph& g) {
  const auto n = g.node_count();
  std::vector<double> acc(n, 0.0);
  detail::BrandesWorkspace ws(n);
  for (int s = 0; s < static_cast<int>(n); ++s) detail::brandes_source(g, s, ws, acc.data(), nullptr, nullptr);
  for (auto& x : acc) x /= 2.0;
  return acc;
}

std::vector<double> edge_betweenness_serial(const Graph& g) {
  const auto n = g.node_count();
  std::vector<double> node_acc(n, 0.0);
  std::vector<double> edge_acc(g.edge_count(), 0.0);
  const auto slots = detail::slot_edges(g);
  detail::BrandesWorkspace ws(n);
  for (int s = 0; s < static_cast<int>(n); ++s)
    detail::brandes_source(g, s, ws, node_acc.data(), edge_acc.data(), &slots);
  for (auto& x : edge_acc) x /= 2.0;
  return edge_acc;
}

std::vector<double> closeness_serial(const Graph& g) {
  const auto n = g.node_count();
  std::vector<double> out(n, 0.0);
  std::vector<int> dist(n);
  std::vector<int> queue;
  for (int v = 0; v < static_cast<int>(n); ++v) {
    auto total = detail::distance_sum(g, v, dist, queue);
    out[static_cast<size_t>(v)] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
  }
  return out;
}

}  // namespace kernels
}  // namespace scholarscope::colabrix
