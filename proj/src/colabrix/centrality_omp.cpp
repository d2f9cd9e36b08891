#include <omp.h>

#include <algorithm>
#include <cmath>

#include "brandes.hpp"
#include "scholarscope/centrality.hpp"

namespace scholarscope::colabrix::kernels {
namespace {

constexpr int kBlock = 32;

// Runs brandes_source over fixed source blocks; block partials are summed in
// block order after the parallel region.
void blocked_brandes(const Graph& g, std::vector<double>& node_out, std::vector<double>* edge_out) {
  const int n = static_cast<int>(g.node_count());
  const size_t m = g.edge_count();
  const int blocks = (n + kBlock - 1) / kBlock;
  std::vector<std::vector<double>> node_part(static_cast<size_t>(blocks));
  std::vector<std::vector<double>> edge_part(static_cast<size_t>(blocks));
  const auto slots = edge_out != nullptr ? detail::slot_edges(g) : std::vector<int>{};

#pragma omp parallel
  {
    detail::BrandesWorkspace ws(static_cast<size_t>(n));
#pragma omp for schedule(dynamic, 1)
    for (int b = 0; b < blocks; ++b) {
      auto& np = node_part[static_cast<size_t>(b)];
      auto& ep = edge_part[static_cast<size_t>(b)];
      np.assign(static_cast<size_t>(n), 0.0);
      if (edge_out != nullptr) ep.assign(m, 0.0);
      const int end = std::min(n, (b + 1) * kBlock);
      for (int s = b * kBlock; s < end; ++s)
        detail::brandes_source(g, s, ws, np.data(), edge_out != nullptr ? ep.data() : nullptr, &slots);
    }
  }

  node_out.assign(static_cast<size_t>(n), 0.0);
  for (const auto& np : node_part)
    for (size_t i = 0; i < np.size(); ++i) node_out[i] += np[i];
  for (auto& x : node_out) x /= 2.0;
  if (edge_out != nullptr) {
    edge_out->assign(m, 0.0);
    for (const auto& ep : edge_part)
      for (size_t i = 0; i < ep.size(); ++i) (*edge_out)[i] += ep[i];
    for (auto& x : *edge_out) x /= 2.0;
  }
}

}  // namespace

std::vector<double> betweenness_parallel(const Graph& g) {
  std::vector<double> out;
  blocked_brandes(g, out, nullptr);
  return out;
}

std::vector<double> edge_betweenness_parallel(const Graph& g) {
  std::vector<double> nodes;
  std::vector<double> edges;
  blocked_brandes(g, nodes, &edges);
  return edges;
}

std::vector<double> closeness_parallel(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  std::vector<double> out(static_cast<size_t>(n), 0.0);
#pragma omp parallel
  {
    std::vector<int> dist(static_cast<size_t>(n));
    std::vector<int> queue;
#pragma omp for schedule(dynamic, 16)
    for (int v = 0; v < n; ++v) {
      auto total = detail::distance_sum(g, v, dist, queue);
      out[static_cast<size_t>(v)] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
    }
  }
  return out;
}

std::pair<std::vector<double>, double> eigenvector(const Graph& g, double tol, int max_iter) {
  const int n = static_cast<int>(g.node_count());
  std::vector<double> x(static_cast<size_t>(n), 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> y(static_cast<size_t>(n));
  auto apply_a = [&](const std::vector<double>& in, std::vector<double>& out) {
#pragma omp parallel for schedule(static)
    for (int v = 0; v < n; ++v) {
      double s = 0.0;
      for (const auto& nb : g.neighbors(v)) s += static_cast<double>(nb.weight) * in[static_cast<size_t>(nb.node)];
      out[static_cast<size_t>(v)] = s;
    }
  };
  for (int it = 0; it < max_iter; ++it) {
    apply_a(x, y);
    double norm = 0.0;
    for (int v = 0; v < n; ++v) {
      y[static_cast<size_t>(v)] += x[static_cast<size_t>(v)];
      norm += y[static_cast<size_t>(v)] * y[static_cast<size_t>(v)];
    }
    norm = std::sqrt(norm);
    double diff = 0.0;
    for (int v = 0; v < n; ++v) {
      y[static_cast<size_t>(v)] /= norm;
      diff = std::max(diff, std::abs(y[static_cast<size_t>(v)] - x[static_cast<size_t>(v)]));
    }
    x.swap(y);
    if (diff < tol) break;
  }
  apply_a(x, y);
  double lambda = 0.0;
  for (int v = 0; v < n; ++v) lambda += x[static_cast<size_t>(v)] * y[static_cast<size_t>(v)];
  return {x, lambda};
}

}  // namespace scholarscope::colabrix::kernels
