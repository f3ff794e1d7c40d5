#pragma once

#include <string_view>
#include <vector>

namespace lela::detail {

struct PromptAsset {
  std::string_view version;
  std::string_view name;
  std::string_view text;
};

const std::vector<PromptAsset>& prompt_assets();

}  // namespace lela::detail
