#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "scholarscope/analysis_result.hpp"
#include "scholarscope/corpus.hpp"

// Bibliometric analyses: publication and citation series, document types,
// journals and Scimago quartiles, publishers, open access, language.
namespace scholarscope::bibtrail {

enum class PublicationMode { kTotal, kCumulative, kProportion };
enum class CitationMode { kTotal, kAverage, kMedian, kCumulative, kProportion, kYearwiseDistribution };
enum class DocTypeMode { kTotal, kYearwise, kDecadewise, kVsCitations };
enum class JournalMode { kTopJournals, kQuartileCounts, kQuartileYearly, kTopInQuartile, kJournalsPerPublisher };
enum class CategoricalField { kPublisher, kOpenAccess, kLanguage };
enum class Quartile { kQ1 = 1, kQ2, kQ3, kQ4 };

std::optional<PublicationMode> parse_publication_mode(std::string_view s);
std::optional<CitationMode> parse_citation_mode(std::string_view s);
std::optional<DocTypeMode> parse_doc_type_mode(std::string_view s);
std::optional<JournalMode> parse_journal_mode(std::string_view s);
std::optional<CategoricalField> parse_categorical_field(std::string_view s);
std::optional<Quartile> parse_quartile(std::string_view s);
std::string_view to_string(Quartile q);

struct QuartileIndex {
  std::map<std::string, Quartile> entries;  // normalized ISSN -> best quartile
  int source_year = 0;

  std::optional<Quartile> lookup(const Record& r) const;
  bool operator==(const QuartileIndex&) const = default;
};

// Bins are [y, y + year_gap - 1] from the earliest year, empty bins included.
AnalysisResult publications_series(const Corpus& corpus, PublicationMode mode, int year_gap = 1);

// One row per publication year that has records. Proportion uses the share of
// all citations in the corpus.
AnalysisResult citations_series(const Corpus& corpus, CitationMode mode);

AnalysisResult doc_type_analysis(const Corpus& corpus, DocTypeMode mode);

// Semicolon-delimited Scimago journal rank export. Requires "Issn" and
// "SJR Best Quartile" columns.
QuartileIndex load_scimago(std::string_view bytes, int source_year = 0);

// `quartile` is only read by kTopInQuartile; `top_n` (0 = all) truncates
// ranked lists.
AnalysisResult journal_analysis(const Corpus& corpus, const QuartileIndex* index, JournalMode mode,
                                Quartile quartile = Quartile::kQ1, size_t top_n = 0);

AnalysisResult categorical_counts(const Corpus& corpus, CategoricalField field, bool vs_citations);

}  // namespace scholarscope::bibtrail
