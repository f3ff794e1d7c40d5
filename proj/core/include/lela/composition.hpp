#pragma once

#include <optional>
#include <string>

#include "lela/caption_model.hpp"
#include "lela/llm_gateway.hpp"
#include "lela/prompt_config.hpp"

namespace lela {

/// Speech caption joined with one composable modality's caption.
struct ComposedCaption {
  int frame_index = 0;
  Modality modality = Modality::kVideo;
  std::string text;
  bool speech_fallback = false;

  friend bool operator==(const ComposedCaption&, const ComposedCaption&) = default;
};

struct SummaryCaption {
  int frame_index = 0;
  Modality modality = Modality::kVideo;
  std::string text;
  std::string source_hash;  // sha256 of the composed text
  bool speech_fallback = false;

  friend bool operator==(const SummaryCaption&, const SummaryCaption&) = default;
};

/// "[SPEECH] <speech or (none)>\n[<TAG>] <modality caption>", or nullopt when
/// the modality has no caption at this frame. Throws DomainError for speech.
std::optional<ComposedCaption> compose(const FrameCaptions& frame, Modality modality);

/// Speech-only route: the speech text stands in for the video caption.
/// Throws DomainError when the frame has no speech caption.
ComposedCaption compose_speech_fallback(const FrameCaptions& frame);

/// One summarization completion (re-issued up to 3 attempts on a blank
/// reply). Appends the exchange to `log` when given.
SummaryCaption summarize(const ComposedCaption& composed, LlmGateway& gateway, const PromptConfig& config,
                         ExchangeLog* log = nullptr);

}  // namespace lela
