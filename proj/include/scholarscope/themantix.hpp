#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "scholarscope/analysis_result.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/graph.hpp"

// Thematic analyses: keyword counts and maps, co-word graphs, term evolution,
// topic models and document clusters.
namespace scholarscope::themantix {

class StopWords {
 public:
  // One word per line; blank lines and '#' comments ignored.
  static StopWords from_text(std::string_view text);
  static const StopWords& bundled();
  bool contains(std::string_view word) const { return words_.contains(std::string(word)); }
  size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

inline constexpr size_t kMinTokenLength = 3;

// Lowercase alphanumeric tokens of title + abstract, stop words, purely
// numeric tokens and tokens shorter than kMinTokenLength removed.
std::vector<std::string> document_tokens(const Record& r, const StopWords& stop = StopWords::bundled());
std::vector<std::string> filter_tokens(std::vector<std::string> tokens, const StopWords& stop);

enum class KeywordSource { kAuthor, kIndex, kBoth };
enum class MappingAxis { kCountry, kDocType };
std::optional<KeywordSource> parse_keyword_source(std::string_view s);
std::optional<MappingAxis> parse_mapping_axis(std::string_view s);

// Occurrence counts after trim + lowercase; top n with the standard
// tie-break. Kind "keywords".
AnalysisResult keyword_frequencies(const Corpus& corpus, KeywordSource source, size_t n);

// Keyword x axis-value count matrix over the top n keywords (by number of
// records) and the top m axis values. Kind "keyword_mapping".
AnalysisResult keyword_mapping(const Corpus& corpus, MappingAxis axis, size_t top_keywords, size_t top_axis);

// Nodes = distinct keywords of both fields; edge weight = number of records
// holding both. Edges lighter than min_edge_weight are dropped.
colabrix::Graph cooccurrence_graph(const Corpus& corpus, std::int64_t min_edge_weight = 1);

struct EvolutionMap {
  struct Slice {
    int start;
    int end;
    bool operator==(const Slice&) const = default;
  };
  struct Theme {
    std::string term;
    long long frequency;
    bool operator==(const Theme&) const = default;
  };
  struct Flow {
    size_t from_slice;  // flow runs from_slice -> from_slice + 1
    std::string from_term;
    std::string to_term;
    long long weight;
    bool operator==(const Flow&) const = default;
  };
  std::vector<Slice> slices;
  std::vector<std::vector<Theme>> themes_per_slice;
  std::vector<Flow> flows;

  bool operator==(const EvolutionMap&) const = default;
};

// Terms are document_tokens plus whole keywords. A term's frequency in a
// slice is the number of records in the slice containing it. Throws
// kNoDatedRecords.
EvolutionMap thematic_evolution(const Corpus& corpus, int slice_width, size_t top_terms);
// Term x slice frequency matrix (0 where the term is not a slice theme), flows
// as JSON in meta["flows"]. Kind "thematic_evolution".
AnalysisResult evolution_result(const EvolutionMap& map);
void to_json(nlohmann::json& j, const EvolutionMap& map);

struct LdaOptions {
  int k = 5;
  int iterations = 1000;
  std::uint64_t seed = 0;
  std::optional<double> alpha;  // default 50 / k
  double beta = 0.01;
};

struct TopicModel {
  int k = 0;
  std::vector<std::string> vocabulary;               // sorted
  std::vector<std::vector<double>> topic_word;       // k x V
  std::vector<std::vector<double>> doc_topic;        // D x k, one row per record
  std::vector<std::string> doc_ids;
  std::uint64_t seed = 0;
  int iterations = 0;
  double alpha = 0.0;
  double beta = 0.0;

  bool operator==(const TopicModel&) const = default;
};

// Collapsed Gibbs sampling. Records without tokens get uniform rows. Throws
// kEmptyVocabulary, kTooFewDocuments (fewer than k non-empty documents).
TopicModel lda_topics(const Corpus& corpus, const LdaOptions& options);
// topic,rank,term,weight for the top `top` terms of every topic.
std::string topic_terms_csv(const TopicModel& model, size_t top = 20);
// record,topic_0..topic_{k-1}.
std::string doc_topic_csv(const TopicModel& model);
// Rows = records, columns = topics; top terms per topic in meta["topics"].
// Kind "topic_model".
AnalysisResult topic_model_result(const TopicModel& model, size_t top = 20);

// TF-IDF (smoothed idf, L2-normalized) over title + abstract + keywords;
// spherical k-means with farthest-point seeding; two leading principal
// components for plotting. Rows (record id; cluster, x, y). Kind "clusters".
// Throws kKExceedsDocuments.
AnalysisResult cluster_documents(const Corpus& corpus, int k, std::uint64_t seed);

// [{"term","weight"}] from a single-column count result.
nlohmann::json word_cloud_json(const AnalysisResult& result);

}  // namespace scholarscope::themantix
