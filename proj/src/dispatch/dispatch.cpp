#include "scholarscope/dispatch.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "scholarscope/centrality.hpp"
#include "scholarscope/community.hpp"
#include "scholarscope/error.hpp"
#include "scholarscope/graph.hpp"
#include "scholarscope/themantix.hpp"

namespace scholarscope::dispatch {
namespace {

using nlohmann::json;

// Parameter access with defaults filled from the operation's ParamSpec list.
class Args {
 public:
  Args(const Operation& op, const json& given) : op_(op), given_(given.is_null() ? json::object() : given) {
    if (!given_.is_object()) throw Error(ErrorCode::kInvalidArgument, "params must be a JSON object");
    for (const auto& [key, value] : given_.items()) {
      auto spec = find(key);
      if (spec == nullptr)
        throw Error(ErrorCode::kInvalidArgument,
                    fmt::format("{}.{} has no parameter '{}'", op_.module, op_.name, key));
      if (!spec->choices.empty()) {
        if (!value.is_string() ||
            std::find(spec->choices.begin(), spec->choices.end(), value.get<std::string>()) == spec->choices.end())
          throw Error(ErrorCode::kInvalidArgument,
                      fmt::format("{}: expected one of {}", key, fmt::join(spec->choices, ", ")));
      }
    }
  }

  template <typename T>
  T get(const std::string& name) const {
    const json& v = given_.contains(name) ? given_.at(name) : find(name)->default_value;
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw Error(ErrorCode::kInvalidArgument, fmt::format("{}: wrong type", name));
    }
  }
  template <typename T>
  std::optional<T> optional(const std::string& name) const {
    const json& v = given_.contains(name) ? given_.at(name) : find(name)->default_value;
    if (v.is_null()) return std::nullopt;
    return get<T>(name);
  }
  std::string str(const std::string& name) const { return get<std::string>(name); }
  size_t positive(const std::string& name) const {
    auto v = get<long long>(name);
    if (v < 1) throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be >= 1", name));
    return static_cast<size_t>(v);
  }

 private:
  const ParamSpec* find(const std::string& name) const {
    for (const auto& p : op_.params)
      if (p.name == name) return &p;
    return nullptr;
  }
  const Operation& op_;
  json given_;
};

template <typename T>
T must(std::optional<T> v) {
  return *v;  // choices were validated in Args
}

ParamSpec choice(std::string name, std::vector<std::string> choices) {
  std::string def = choices.front();
  return {std::move(name), def, std::move(choices)};
}

const std::vector<std::string> kLevels = {"author", "country", "keyword"};
const std::vector<std::string> kMeasures = {"degree", "betweenness", "closeness", "eigenvector"};

colabrix::Graph graph_of(const Corpus& c, const Args& a) {
  const auto level = a.str("level");
  colabrix::Graph g;
  if (level == "keyword") {
    g = themantix::cooccurrence_graph(c, a.get<std::int64_t>("min_edge_weight"));
  } else {
    g = colabrix::build_graph(c, must(colabrix::parse_network_level(level)));
  }
  if (a.get<int>("component") == 0) return g;
  return colabrix::giant_component(g, a.get<int>("component"));
}

std::vector<ParamSpec> graph_params(int default_component) {
  return {choice("level", kLevels), {"min_edge_weight", 1, {}}, {"component", default_component, {}}};
}

std::vector<ParamSpec> with(std::vector<ParamSpec> base, std::vector<ParamSpec> more) {
  base.insert(base.end(), more.begin(), more.end());
  return base;
}

std::vector<Operation> build_table() {
  std::vector<Operation> ops;
  auto add = [&](std::string module, std::string name, std::vector<ParamSpec> params,
                 std::function<AnalysisResult(const Corpus&, const Args&, const Context&)> fn) {
    ops.push_back({std::move(module), std::move(name), std::move(params),
                   [](const Corpus&, const json&, const Context&) -> AnalysisResult { return {}; }});
    auto& op = ops.back();
    op.run = [fn, module = op.module, name = op.name](const Corpus& c, const json& p, const Context& ctx) {
      const auto& table = operations();
      auto it = std::find_if(table.begin(), table.end(),
                             [&](const Operation& o) { return o.module == module && o.name == name; });
      return fn(c, Args(*it, p), ctx);
    };
  };

  // bibtrail
  add("bibtrail", "publications_series",
      {choice("mode", {"total", "cumulative", "proportion"}), {"year_gap", 1, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return bibtrail::publications_series(c, must(bibtrail::parse_publication_mode(a.str("mode"))),
                                             a.get<int>("year_gap"));
      });
  add("bibtrail", "citations_series",
      {choice("mode", {"total", "average", "median", "cumulative", "proportion", "yearwise_distribution"})},
      [](const Corpus& c, const Args& a, const Context&) {
        return bibtrail::citations_series(c, must(bibtrail::parse_citation_mode(a.str("mode"))));
      });
  add("bibtrail", "doc_type_analysis", {choice("mode", {"total", "yearwise", "decadewise", "vs_citations"})},
      [](const Corpus& c, const Args& a, const Context&) {
        return bibtrail::doc_type_analysis(c, must(bibtrail::parse_doc_type_mode(a.str("mode"))));
      });
  add("bibtrail", "journal_analysis",
      {choice("mode", {"top_journals", "quartile_counts", "quartile_yearly", "top_in_quartile",
                       "journals_per_publisher"}),
       choice("quartile", {"Q1", "Q2", "Q3", "Q4"}),
       {"top_n", 0, {}}},
      [](const Corpus& c, const Args& a, const Context& ctx) {
        const auto top = a.get<long long>("top_n");
        if (top < 0) throw Error(ErrorCode::kInvalidArgument, "top_n must be >= 0");
        return bibtrail::journal_analysis(c, ctx.quartiles, must(bibtrail::parse_journal_mode(a.str("mode"))),
                                          must(bibtrail::parse_quartile(a.str("quartile"))), static_cast<size_t>(top));
      });
  add("bibtrail", "categorical_counts",
      {choice("field", {"publisher", "open_access", "language"}), {"vs_citations", false, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return bibtrail::categorical_counts(c, must(bibtrail::parse_categorical_field(a.str("field"))),
                                            a.get<bool>("vs_citations"));
      });

  // scitrace
  add("scitrace", "author_analysis",
      {choice("mode", {"top_authors", "papers_per_author_count", "team_size", "pair_collaboration"}), {"n", 10, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return scitrace::author_analysis(c, must(scitrace::parse_author_mode(a.str("mode"))), a.positive("n"));
      });
  add("scitrace", "country_analysis",
      {choice("mode", {"counts", "lead_counts", "team_size", "pair_collaboration", "papers_vs_citations"})},
      [](const Corpus& c, const Args& a, const Context&) {
        return scitrace::country_analysis(c, must(scitrace::parse_country_mode(a.str("mode"))));
      });
  add("scitrace", "gender_analysis", {choice("mode", {"totals", "by_position", "by_country"}), {"top_k", 10, {}}},
      [](const Corpus& c, const Args& a, const Context& ctx) {
        const scitrace::GenderProvider& provider =
            ctx.gender ? *ctx.gender : static_cast<const scitrace::GenderProvider&>(scitrace::TableGenderProvider::bundled());
        return scitrace::gender_analysis(c, provider, must(scitrace::parse_gender_mode(a.str("mode"))),
                                         a.positive("top_k"));
      });
  add("scitrace", "top_entities", {choice("field", {"institutes", "funding"}), {"n", 10, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return scitrace::top_entities(c, must(scitrace::parse_entity_field(a.str("field"))), a.positive("n"));
      });

  // colabrix
  add("colabrix", "build_graph", graph_params(0), [](const Corpus& c, const Args& a, const Context&) {
    return colabrix::network_result(graph_of(c, a));
  });
  add("colabrix", "giant_component", graph_params(1), [](const Corpus& c, const Args& a, const Context&) {
    if (a.get<int>("component") == 0) throw Error(ErrorCode::kInvalidArgument, "component must be 1 or 2");
    return colabrix::network_result(graph_of(c, a));
  });
  add("colabrix", "centrality", with(graph_params(1), {choice("measure", kMeasures)}),
      [](const Corpus& c, const Args& a, const Context&) {
        const auto g = graph_of(c, a);
        auto r = colabrix::centrality_result(colabrix::centrality(g, must(colabrix::parse_measure(a.str("measure")))));
        colabrix::attach_graph(r, g);
        return r;
      });
  add("colabrix", "centrality_distribution", with(graph_params(1), {choice("measure", kMeasures), {"bins", 10, {}}}),
      [](const Corpus& c, const Args& a, const Context&) {
        const auto g = graph_of(c, a);
        return colabrix::centrality_distribution(
            colabrix::centrality(g, must(colabrix::parse_measure(a.str("measure")))), a.get<int>("bins"));
      });
  add("colabrix", "detect_communities",
      with(graph_params(0),
           {choice("method", {"leiden", "greedy_modularity", "girvan_newman"}), {"seed", 0, {}}, {"resolution", 1.0, {}}}),
      [](const Corpus& c, const Args& a, const Context&) {
        const auto g = graph_of(c, a);
        colabrix::CommunityOptions opts;
        opts.seed = a.get<std::uint64_t>("seed");
        opts.resolution = a.get<double>("resolution");
        auto p = colabrix::detect_communities(g, must(colabrix::parse_community_method(a.str("method"))), opts);
        return colabrix::partition_result(g, p);
      });
  add("colabrix", "modularity", with(graph_params(0), {{"partition", nullptr, {}}}),
      [](const Corpus& c, const Args& a, const Context&) {
        const auto g = graph_of(c, a);
        auto given = a.optional<std::map<std::string, int>>("partition");
        if (!given) throw Error(ErrorCode::kPartitionMismatch, "partition is required: {node: community}");
        std::vector<int> assignment;
        for (const auto& label : g.labels()) {
          auto it = given->find(label);
          if (it == given->end())
            throw Error(ErrorCode::kPartitionMismatch, fmt::format("node '{}' has no community", label));
          assignment.push_back(it->second);
        }
        if (given->size() != g.node_count())
          throw Error(ErrorCode::kPartitionMismatch, "partition names nodes outside the graph");
        AnalysisResult r;
        r.kind = "modularity";
        r.label_column = "measure";
        r.columns = {"value"};
        r.rows.push_back({"modularity", {colabrix::modularity(g, assignment)}});
        r.meta["aggregation"] = "none";
        return r;
      });

  // themantix
  add("themantix", "keyword_frequencies",
      {choice("source", {"both", "author_keywords", "index_keywords"}), {"n", 20, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return themantix::keyword_frequencies(c, must(themantix::parse_keyword_source(a.str("source"))),
                                              a.positive("n"));
      });
  add("themantix", "keyword_mapping",
      {choice("axis", {"country", "doc_type"}), {"top_keywords", 10, {}}, {"top_axis", 5, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return themantix::keyword_mapping(c, must(themantix::parse_mapping_axis(a.str("axis"))),
                                          a.positive("top_keywords"), a.positive("top_axis"));
      });
  add("themantix", "cooccurrence_graph", {{"min_edge_weight", 1, {}}}, [](const Corpus& c, const Args& a, const Context&) {
    return colabrix::network_result(themantix::cooccurrence_graph(c, a.get<std::int64_t>("min_edge_weight")),
                                    "cooccurrence");
  });
  add("themantix", "thematic_evolution", {{"slice_width", 5, {}}, {"top_terms", 10, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        return themantix::evolution_result(
            themantix::thematic_evolution(c, a.get<int>("slice_width"), a.positive("top_terms")));
      });
  add("themantix", "lda_topics",
      {{"k", 5, {}}, {"iterations", 1000, {}}, {"seed", 0, {}}, {"alpha", nullptr, {}}, {"beta", 0.01, {}}, {"top_terms", 20, {}}},
      [](const Corpus& c, const Args& a, const Context&) {
        themantix::LdaOptions o;
        o.k = a.get<int>("k");
        o.iterations = a.get<int>("iterations");
        o.seed = a.get<std::uint64_t>("seed");
        o.alpha = a.optional<double>("alpha");
        o.beta = a.get<double>("beta");
        return themantix::topic_model_result(themantix::lda_topics(c, o), a.positive("top_terms"));
      });
  add("themantix", "cluster_documents", {{"k", 3, {}}, {"seed", 0, {}}}, [](const Corpus& c, const Args& a, const Context&) {
    return themantix::cluster_documents(c, a.get<int>("k"), a.get<std::uint64_t>("seed"));
  });
  return ops;
}

}  // namespace

const std::vector<Operation>& operations() {
  static const std::vector<Operation> table = build_table();
  return table;
}

json describe_operations() {
  json modules = json::object();
  for (const auto& op : operations()) {
    json params = json::object();
    for (const auto& p : op.params) {
      json d = {{"default", p.default_value}};
      if (!p.choices.empty()) d["choices"] = p.choices;
      params[p.name] = d;
    }
    modules[op.module][op.name] = params;
  }
  return {{"modules", modules}};
}

AnalysisResult run(const Corpus& corpus, const std::string& module, const std::string& operation, const json& params,
                   const Context& context) {
  for (const auto& op : operations())
    if (op.module == module && op.name == operation) return op.run(corpus, params, context);
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown analysis {}.{}", module, operation));
}

}  // namespace scholarscope::dispatch
