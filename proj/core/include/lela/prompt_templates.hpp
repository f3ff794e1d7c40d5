#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace lela {

inline constexpr std::string_view kDefaultTemplateVersion = "v1";

/// Template asset `name` (context, rationale, score, summary, score_reask) of
/// the given version. Throws ConfigError for unknown versions or names.
std::string_view prompt_template(std::string_view version, std::string_view name);

std::vector<std::string> template_versions();

/// Single-pass substitution of {key} placeholders. Substituted values are
/// never rescanned, and braces that name no known key are kept verbatim.
std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string_view, std::string_view>>& values);

}  // namespace lela
