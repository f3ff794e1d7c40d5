#include "lela/score_parser.hpp"

#include <cctype>
#include <charconv>
#include <string>

#include "lela/error.hpp"

namespace lela {

namespace {

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_word(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_'; }

}  // namespace

std::optional<double> try_parse_score(std::string_view s) {
  const std::size_t n = s.size();
  std::size_t i = 0;
  while (i < n) {
    const bool starts = is_digit(s[i]) || (s[i] == '.' && i + 1 < n && is_digit(s[i + 1]));
    if (!starts) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_digit(s[j])) ++j;
    if (j + 1 < n && s[j] == '.' && is_digit(s[j + 1])) {
      ++j;
      while (j < n && is_digit(s[j])) ++j;
    }
    const std::size_t end = j;

    bool skip = (i > 0 && is_word(s[i - 1])) || (end < n && is_word(s[end]));
    // Version strings (1.2.3) and thousands separators (1,000) are not scores.
    if (end + 1 < n && (s[end] == '.' || s[end] == ',') && is_digit(s[end + 1])) {
      skip = true;
      j = end + 1;
      while (j < n && (is_digit(s[j]) || s[j] == '.' || s[j] == ',')) ++j;
    }
    // A '-' right before the literal is a sign unless it joins two numbers ("0-1").
    if (i > 0 && s[i - 1] == '-' && !(i > 1 && is_digit(s[i - 2]))) skip = true;

    if (!skip) {
      double value = 0.0;
      auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + end, value);
      // from_chars rejects a leading '.', so ".5" is parsed as "0.5".
      if (ec != std::errc() && s[i] == '.') {
        const std::string padded = "0" + std::string(s.substr(i, end - i));
        auto r = std::from_chars(padded.data(), padded.data() + padded.size(), value);
        ec = r.ec;
      }
      if (ec == std::errc()) {
        std::size_t k = end;
        while (k < n && s[k] == ' ') ++k;
        if (k < n && s[k] == '%') value /= 100.0;
        if (value >= 0.0 && value <= 1.0) return value;
      }
    }
    i = j;
  }
  return std::nullopt;
}

double parse_score(std::string_view reply) {
  if (auto v = try_parse_score(reply)) return *v;
  std::string excerpt(reply.substr(0, 120));
  throw ScoreParseError("no score literal in [0,1] in reply: \"" + excerpt + "\"");
}

}  // namespace lela
