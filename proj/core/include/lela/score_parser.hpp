#pragma once

#include <optional>
#include <string_view>

namespace lela {

/// First admissible score literal in `reply`, scanning left to right.
/// Decimal and integer literals in [0,1] are admissible as-is; a literal
/// directly followed by '%' is divided by 100 first. Literals glued to
/// letters ("4o", "1st") and negative literals are skipped.
std::optional<double> try_parse_score(std::string_view reply);

/// As try_parse_score, throwing ScoreParseError when nothing is admissible.
double parse_score(std::string_view reply);

}  // namespace lela
