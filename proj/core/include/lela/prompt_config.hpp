#pragma once

#include <string>
#include <vector>

#include "lela/modality.hpp"

namespace lela {

/// Prompting switches and decoding parameters. The two toggles give the four
/// ablation rows: (off, off) is single-shot scoring, (on, on) the full protocol.
struct PromptConfig {
  bool enable_contextualization = true;
  bool enable_rationale = true;
  std::string model_id = "mock";
  std::string summary_model_id;  // empty: same model as the scorer
  double temperature = 0.0;
  int max_rationale_tokens = 512;
  int max_score_tokens = 16;
  int max_summary_tokens = 512;
  std::string template_version = "v1";

  const std::string& summarizer_model() const { return summary_model_id.empty() ? model_id : summary_model_id; }
};

/// Throws DomainError for temperature outside [0,2] or non-positive budgets.
void validate_prompt_config(const PromptConfig& config);

/// One gateway exchange, as written to the transcript log.
struct ExchangeRecord {
  int frame_index = 0;
  Modality modality = Modality::kVideo;
  std::string stage;  // summary | rationale | score | score-reask-N
  std::string prompt_sha256;
  std::string reply;
  bool speech_fallback = false;

  friend bool operator==(const ExchangeRecord&, const ExchangeRecord&) = default;
};

using ExchangeLog = std::vector<ExchangeRecord>;

}  // namespace lela
