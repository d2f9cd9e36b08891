#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scholarscope/bibtrail.hpp"
#include "scholarscope/corpus.hpp"
#include "scholarscope/graph.hpp"

namespace fixtures {

std::string path(const std::string& name);
std::string read(const std::string& name);

// T5 built the way a user would: Scopus parse, inferred mapping, merge.
std::string t5_bytes();
scholarscope::Corpus t5();
scholarscope::bibtrail::QuartileIndex sci3();

// Scopus-format export of n records drawn from a seeded generator. A few
// records have no year; authors, countries and keywords come from small pools
// so that graphs and counts are non-trivial.
std::string syn_scopus(std::uint64_t seed = 50, int n = 50);
scholarscope::Corpus syn50(std::uint64_t seed = 50);

// Two triangles {a,b,c} and {d,e,f} joined by the bridge c-d.
scholarscope::colabrix::Graph gn6();

// Documents whose text is drawn from one of two disjoint vocabularies. The
// planted topic of record i is planted[i].
struct Planted {
  scholarscope::Corpus corpus;
  std::vector<int> planted;
};
Planted planted_topics(int docs = 100, int tokens_per_doc = 150, std::uint64_t seed = 7);
Planted separable_groups(int per_group = 10, std::uint64_t seed = 11);

// Record with only the given fields set; helper for small hand-made corpora.
scholarscope::Record record(std::string id, std::string title, std::vector<std::string> authors = {},
                            std::optional<int> year = std::nullopt);

}  // namespace fixtures

namespace fixtures {

struct NamedResult {
  std::string name;  // module.operation{params}
  scholarscope::AnalysisResult result;
};
// Every dispatch operation run with default parameters and then once per
// value of each choice-valued parameter. Combinations the data cannot support
// (for example a missing second component) are skipped.
std::vector<NamedResult> every_result(const scholarscope::Corpus& corpus,
                                      const scholarscope::bibtrail::QuartileIndex* quartiles);

}  // namespace fixtures
