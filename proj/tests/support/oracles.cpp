#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

namespace oracles {
using scholarscope::colabrix::Graph;

std::vector<double> betweenness(const Graph& g) {
  const int n = static_cast<int>(g.node_count());
  std::vector<double> out(static_cast<size_t>(n), 0.0);
  for (int s = 0; s < n; ++s) {
    for (int t = s + 1; t < n; ++t) {
      std::vector<std::vector<int>> paths;
      std::vector<int> path = {s};
      std::vector<bool> on(static_cast<size_t>(n), false);
      on[static_cast<size_t>(s)] = true;
      std::function<void(int)> dfs = [&](int v) {
        if (v == t) {
          paths.push_back(path);
          return;
        }
        for (const auto& nb : g.neighbors(v)) {
          if (on[static_cast<size_t>(nb.node)]) continue;
          on[static_cast<size_t>(nb.node)] = true;
          path.push_back(nb.node);
          dfs(nb.node);
          path.pop_back();
          on[static_cast<size_t>(nb.node)] = false;
        }
      };
      dfs(s);
      if (paths.empty()) continue;
      size_t shortest = std::numeric_limits<size_t>::max();
      for (const auto& p : paths) shortest = std::min(shortest, p.size());
      double total = 0;
      std::vector<double> through(static_cast<size_t>(n), 0.0);
      for (const auto& p : paths) {
        if (p.size() != shortest) continue;
        total += 1;
        for (size_t i = 1; i + 1 < p.size(); ++i) through[static_cast<size_t>(p[i])] += 1;
      }
      for (int v = 0; v < n; ++v) out[static_cast<size_t>(v)] += through[static_cast<size_t>(v)] / total;
    }
  }
  return out;
}

std::vector<double> closeness(const Graph& g) {
  const size_t n = g.node_count();
  const int inf = 1 << 20;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[static_cast<size_t>(e.u)][static_cast<size_t>(e.v)] = d[static_cast<size_t>(e.v)][static_cast<size_t>(e.u)] = 1;
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  std::vector<double> out(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    long total = 0;
    for (size_t j = 0; j < n; ++j)
      if (d[i][j] < inf) total += d[i][j];
    out[i] = total > 0 ? 1.0 / static_cast<double>(total) : 0.0;
  }
  return out;
}

std::vector<double> degree(const Graph& g) {
  std::vector<double> out(g.node_count(), 0.0);
  for (const auto& e : g.edges()) {
    out[static_cast<size_t>(e.u)] += 1;
    out[static_cast<size_t>(e.v)] += 1;
  }
  return out;
}

std::pair<std::vector<double>, double> eigenvector(const Graph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) a(e.u, e.v) = a(e.v, e.u) = static_cast<double>(e.weight);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  Eigen::VectorXd v = solver.eigenvectors().col(n - 1);
  if (v.sum() < 0) v = -v;
  v /= v.norm();
  return {std::vector<double>(v.data(), v.data() + n), solver.eigenvalues()(n - 1)};
}

double modularity(const Graph& g, const std::vector<int>& c) {
  const auto n = static_cast<int>(g.node_count());
  const double m = static_cast<double>(g.total_weight());
  if (m == 0) return 0.0;
  double q = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (c[static_cast<size_t>(i)] == c[static_cast<size_t>(j)])
        q += static_cast<double>(g.weight(i, j)) -
             static_cast<double>(g.strength(i)) * static_cast<double>(g.strength(j)) / (2 * m);
  return q / (2 * m);
}

std::pair<double, std::vector<int>> best_partition(const Graph& g) {
  const size_t n = g.node_count();
  std::vector<int> rgs(n, 0), best = rgs;
  double best_q = -std::numeric_limits<double>::infinity();
  std::function<void(size_t, int)> rec = [&](size_t i, int max_label) {
    if (i == n) {
      double q = modularity(g, rgs);
      if (q > best_q) {
        best_q = q;
        best = rgs;
      }
      return;
    }
    for (int c = 0; c <= max_label + 1; ++c) {
      rgs[i] = c;
      rec(i + 1, std::max(max_label, c));
    }
  };
  if (n > 0) {
    rgs[0] = 0;
    rec(1, 0);
  }
  return {best_q, best};
}

Graph graph_from_mask(int n, std::uint64_t mask, const std::vector<std::int64_t>& weights) {
  Graph::Builder b;
  for (int i = 0; i < n; ++i) b.add_node(fmt::format("n{}", i));
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1)
        b.add_edge(fmt::format("n{}", i), fmt::format("n{}", j),
                   weights.empty() ? 1 : weights[static_cast<size_t>(bit)]);
  return b.build();
}

Graph random_connected(int n, double p, std::mt19937_64& rng, int max_weight) {
  std::bernoulli_distribution edge(p);
  std::uniform_int_distribution<std::int64_t> w(1, max_weight);
  const int pairs = n * (n - 1) / 2;
  for (;;) {
    std::uint64_t mask = 0;
    std::vector<std::int64_t> weights;
    for (int b = 0; b < pairs; ++b) {
      if (edge(rng)) mask |= std::uint64_t{1} << b;
      weights.push_back(w(rng));
    }
    auto g = graph_from_mask(n, mask, weights);
    if (g.is_connected()) return g;
  }
}

}  // namespace oracles
