#include "scholarscope/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "scholarscope/csv.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/text.hpp"

namespace scholarscope::colabrix {

void Graph::Builder::add_node(std::string_view label) { adj_.try_emplace(std::string(label)); }

void Graph::Builder::add_edge(std::string_view a, std::string_view b, std::int64_t weight) {
  add_node(a);
  add_node(b);
  if (a == b || weight <= 0) return;
  adj_[std::string(a)][std::string(b)] += weight;
  adj_[std::string(b)][std::string(a)] += weight;
}

Graph Graph::Builder::build() const {
  Graph g;
  std::map<std::string_view, int> index;
  for (const auto& [label, _] : adj_) {
    index.emplace(label, static_cast<int>(g.labels_.size()));
    g.labels_.push_back(label);
  }
  g.offsets_.assign(1, 0);
  for (const auto& [label, nbrs] : adj_) {
    for (const auto& [other, w] : nbrs) g.neighbors_.push_back({index.at(other), w});
    g.offsets_.push_back(g.neighbors_.size());
  }
  return g;
}

Graph Graph::from_edges(std::vector<std::string> labels, const std::vector<Edge>& edges) {
  Graph g;
  g.labels_ = std::move(labels);
  std::vector<std::vector<Neighbor>> adj(g.labels_.size());
  for (const auto& e : edges) {
    adj[static_cast<size_t>(e.u)].push_back({e.v, e.weight});
    adj[static_cast<size_t>(e.v)].push_back({e.u, e.weight});
  }
  g.offsets_.assign(1, 0);
  for (auto& list : adj) {
    std::sort(list.begin(), list.end(), [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    g.neighbors_.insert(g.neighbors_.end(), list.begin(), list.end());
    g.offsets_.push_back(g.neighbors_.size());
  }
  return g;
}

std::optional<int> Graph::index_of(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

std::int64_t Graph::strength(int v) const {
  std::int64_t s = 0;
  for (const auto& n : neighbors(v)) s += n.weight;
  return s;
}

std::int64_t Graph::weight(int u, int v) const {
  auto nbrs = neighbors(u);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                             [](const Neighbor& n, int target) { return n.node < target; });
  return (it != nbrs.end() && it->node == v) ? it->weight : 0;
}

std::int64_t Graph::total_weight() const {
  std::int64_t s = 0;
  for (const auto& n : neighbors_) s += n.weight;
  return s / 2;
}

std::vector<Graph::Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (int u = 0; u < static_cast<int>(node_count()); ++u)
    for (const auto& n : neighbors(u))
      if (u < n.node) out.push_back({u, n.node, n.weight});
  return out;
}

std::vector<std::vector<int>> Graph::connected_components() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(node_count(), false);
  std::vector<int> stack;
  for (int s = 0; s < static_cast<int>(node_count()); ++s) {
    if (seen[static_cast<size_t>(s)]) continue;
    std::vector<int> comp;
    stack.push_back(s);
    seen[static_cast<size_t>(s)] = true;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      comp.push_back(v);
      for (const auto& n : neighbors(v)) {
        if (!seen[static_cast<size_t>(n.node)]) {
          seen[static_cast<size_t>(n.node)] = true;
          stack.push_back(n.node);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool Graph::is_connected() const { return node_count() <= 1 || connected_components().size() == 1; }

Graph Graph::induced_subgraph(std::span<const int> nodes) const {
  std::vector<int> sorted(nodes.begin(), nodes.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> remap(node_count(), -1);
  std::vector<std::string> labels;
  for (size_t i = 0; i < sorted.size(); ++i) {
    remap[static_cast<size_t>(sorted[i])] = static_cast<int>(i);
    labels.push_back(label(sorted[i]));
  }
  std::vector<Edge> kept;
  for (const auto& e : edges()) {
    int a = remap[static_cast<size_t>(e.u)];
    int b = remap[static_cast<size_t>(e.v)];
    if (a >= 0 && b >= 0) kept.push_back({a, b, e.weight});
  }
  // Labels stay sorted because node indices follow label order.
  return from_edges(std::move(labels), kept);
}

Graph Graph::filter_edges(std::int64_t min_weight) const {
  std::vector<Edge> kept;
  for (const auto& e : edges())
    if (e.weight >= min_weight) kept.push_back(e);
  return from_edges(labels_, kept);
}

Graph Graph::without_edge(int u, int v) const {
  std::vector<Edge> kept;
  if (u > v) std::swap(u, v);
  for (const auto& e : edges())
    if (!(e.u == u && e.v == v)) kept.push_back(e);
  return from_edges(labels_, kept);
}

std::optional<NetworkLevel> parse_network_level(std::string_view s) {
  if (s == "author" || s == "authors") return NetworkLevel::kAuthor;
  if (s == "country" || s == "countries") return NetworkLevel::kCountry;
  return std::nullopt;
}

Graph build_graph(const Corpus& corpus, NetworkLevel level) {
  Graph::Builder builder;
  // Authors are keyed by id when ids are parallel to names; the node label is
  // the first name seen for the key, disambiguated if two keys share a name.
  std::map<std::string, std::string> label_of_key;
  std::set<std::string> used_labels;
  auto author_label = [&](const Record& r, size_t i) -> std::string {
    const bool ids = r.author_ids.size() == r.authors.size() && !r.author_ids[i].empty();
    std::string key = ids ? "id:" + r.author_ids[i] : "name:" + text::to_lower(text::normalize_whitespace(r.authors[i]));
    auto it = label_of_key.find(key);
    if (it != label_of_key.end()) return it->second;
    std::string label = text::normalize_whitespace(r.authors[i]);
    if (used_labels.contains(label)) label = fmt::format("{} [{}]", label, key);
    used_labels.insert(label);
    label_of_key.emplace(key, label);
    return label;
  };

  for (const auto& r : corpus.records()) {
    std::vector<std::string> entities;
    if (level == NetworkLevel::kAuthor) {
      for (size_t i = 0; i < r.authors.size(); ++i) {
        auto l = author_label(r, i);
        if (std::find(entities.begin(), entities.end(), l) == entities.end()) entities.push_back(std::move(l));
      }
    } else {
      entities = distinct_countries(r);
    }
    for (const auto& e : entities) builder.add_node(e);
    for (size_t i = 0; i < entities.size(); ++i)
      for (size_t j = i + 1; j < entities.size(); ++j) builder.add_edge(entities[i], entities[j]);
  }
  return builder.build();
}

Graph giant_component(const Graph& graph, int rank) {
  if (rank != 1 && rank != 2) throw Error(ErrorCode::kInvalidArgument, "component rank must be 1 or 2");
  auto comps = graph.connected_components();
  if (comps.size() < static_cast<size_t>(rank))
    throw Error(ErrorCode::kNoSuchComponent,
                fmt::format("graph has {} component(s); rank {} requested", comps.size(), rank));
  // Components are ordered by smallest node index == smallest label.
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  return graph.induced_subgraph(comps[static_cast<size_t>(rank - 1)]);
}

nlohmann::json graph_to_json(const Graph& graph) {
  nlohmann::json nodes = nlohmann::json::array();
  for (int v = 0; v < static_cast<int>(graph.node_count()); ++v)
    nodes.push_back({{"id", graph.label(v)}, {"degree", graph.degree(v)}});
  nlohmann::json links = nlohmann::json::array();
  for (const auto& e : graph.edges())
    links.push_back({{"source", graph.label(e.u)}, {"target", graph.label(e.v)}, {"weight", e.weight}});
  return {{"nodes", nodes}, {"links", links}};
}

Graph graph_from_json(const nlohmann::json& j) {
  Graph::Builder b;
  try {
    for (const auto& n : j.at("nodes")) b.add_node(n.at("id").get<std::string>());
    for (const auto& l : j.at("links"))
      b.add_edge(l.at("source").get<std::string>(), l.at("target").get<std::string>(),
                 l.at("weight").get<std::int64_t>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("malformed graph JSON: {}", e.what()));
  }
  return b.build();
}

std::string edge_list_csv(const Graph& graph) {
  std::vector<csv::Row> rows = {{"source", "target", "weight"}};
  for (const auto& e : graph.edges()) rows.push_back({graph.label(e.u), graph.label(e.v), std::to_string(e.weight)});
  return csv::write(rows);
}

void attach_graph(AnalysisResult& result, const Graph& graph) {
  result.meta["graph"] = graph_to_json(graph).dump();
  result.meta["node_count"] = std::to_string(graph.node_count());
  result.meta["edge_count"] = std::to_string(graph.edge_count());
}

AnalysisResult network_result(const Graph& graph, std::string kind) {
  AnalysisResult r;
  r.kind = std::move(kind);
  r.label_column = "edge";
  r.columns = {"weight"};
  for (const auto& e : graph.edges())
    r.rows.push_back({fmt::format("{}{}{}", graph.label(e.u), kEdgeSeparator, graph.label(e.v)),
                      {static_cast<double>(e.weight)}});
  r.meta["aggregation"] = "none";
  attach_graph(r, graph);
  return r;
}

}  // namespace scholarscope::colabrix
