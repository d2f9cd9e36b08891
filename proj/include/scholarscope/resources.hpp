#pragma once

#include <string_view>

// Bundled data tables, compiled in from data/ at build time.
namespace scholarscope::resources {

std::string_view header_synonyms();      // canonical_field,synonym
std::string_view countries();            // canonical_name,alias|alias|...
std::string_view stopwords();            // one word per line
std::string_view gender_names();         // name,country,label,confidence
std::string_view chart_compatibility();  // result_kind,chart_type

}  // namespace scholarscope::resources
