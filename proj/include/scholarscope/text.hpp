#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scholarscope::text {

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
// Trim and collapse internal whitespace runs to a single space.
std::string normalize_whitespace(std::string_view s);

// Split on an exact separator; pieces are trimmed and empty pieces dropped.
std::vector<std::string> split_trimmed(std::string_view s, std::string_view sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool iequals(std::string_view a, std::string_view b);

// Strict base-10 integer parse of the trimmed input (optional leading sign).
std::optional<long long> parse_int(std::string_view s);

bool is_valid_utf8(std::string_view bytes);
std::string_view strip_bom(std::string_view bytes);

// Lowercased alphanumeric tokens. Bytes >= 0x80 are treated as letters so
// non-ASCII words survive intact.
std::vector<std::string> tokenize(std::string_view s);

// Lowercase, alphanumerics only; used for title matching.
std::string alnum_key(std::string_view s);

}  // namespace scholarscope::text
