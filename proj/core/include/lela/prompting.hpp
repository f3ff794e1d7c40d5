#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "lela/composition.hpp"
#include "lela/llm_gateway.hpp"
#include "lela/prompt_config.hpp"
#include "lela/prompt_templates.hpp"

namespace lela {

inline constexpr int kMaxScoreReasks = 3;

/// Per-(frame, modality) record of the prompting stages.
struct StageTrace {
  int frame_index = 0;
  Modality modality = Modality::kVideo;
  std::optional<std::string> rationale;
  std::string raw_score_reply;
  double score = 0.0;
  bool speech_fallback = false;

  friend bool operator==(const StageTrace&, const StageTrace&) = default;
};

/// Role definition sent as the system message when contextualization is on.
std::string render_context_prompt(std::string_view version = kDefaultTemplateVersion);

std::string render_rationale_prompt(Modality modality, const SummaryCaption& summary,
                                    std::string_view version = kDefaultTemplateVersion);

std::string render_score_prompt(std::string_view rationale_or_summary,
                                std::string_view version = kDefaultTemplateVersion);

std::string render_summary_prompt(std::string_view composed_text,
                                  std::string_view version = kDefaultTemplateVersion);

/// Contextualization (system message) -> rationale completion -> scoring
/// completion, each stage gated by `config`. Unparseable score replies are
/// re-asked up to kMaxScoreReasks times before ScoreParseError.
StageTrace run_multistage(LlmGateway& gateway, const SummaryCaption& summary, const PromptConfig& config,
                          ExchangeLog* log = nullptr);

}  // namespace lela
