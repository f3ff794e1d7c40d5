#include "lela/composition.hpp"

#include <algorithm>
#include <cctype>

#include "lela/digest.hpp"
#include "lela/error.hpp"
#include "lela/prompting.hpp"

namespace lela {

namespace {

constexpr int kSummaryAttempts = 3;

std::string render_composed(const std::string* speech, Modality modality, const std::string& modality_text) {
  std::string text = "[SPEECH] ";
  text += speech ? *speech : std::string("(none)");
  text += "\n[";
  text += modality_tag(modality);
  text += "] ";
  text += modality_text;
  return text;
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

std::optional<ComposedCaption> compose(const FrameCaptions& frame, Modality modality) {
  if (!is_composable(modality)) throw DomainError("compose: speech is the anchor, not a composable modality");
  const std::string* text = frame.caption(modality);
  if (!text) return std::nullopt;
  return ComposedCaption{frame.frame_index, modality,
                         render_composed(frame.caption(Modality::kSpeech), modality, *text), false};
}

ComposedCaption compose_speech_fallback(const FrameCaptions& frame) {
  const std::string* speech = frame.caption(Modality::kSpeech);
  if (!speech) throw DomainError("speech fallback needs a speech caption at frame " + std::to_string(frame.frame_index));
  return ComposedCaption{frame.frame_index, Modality::kVideo, render_composed(speech, Modality::kVideo, *speech), true};
}

SummaryCaption summarize(const ComposedCaption& composed, LlmGateway& gateway, const PromptConfig& config,
                         ExchangeLog* log) {
  if (composed.text.empty()) throw DomainError("summarize: composed caption text is empty");
  validate_prompt_config(config);

  LlmRequest request;
  request.model_id = config.summarizer_model();
  request.temperature = config.temperature;
  request.max_reply_tokens = config.max_summary_tokens;
  request.template_version = config.template_version;
  request.input = composed.text;
  request.messages.push_back({Role::kUser, render_summary_prompt(composed.text, config.template_version)});

  for (int attempt = 0; attempt < kSummaryAttempts; ++attempt) {
    request.attempt = attempt;
    LlmReply reply = gateway.complete(request);
    if (log) {
      log->push_back({composed.frame_index, composed.modality, "summary", messages_digest(request), reply.text,
                      composed.speech_fallback});
    }
    if (!is_blank(reply.text)) {
      return SummaryCaption{composed.frame_index, composed.modality, std::move(reply.text),
                            sha256_hex(composed.text), composed.speech_fallback};
    }
  }
  throw EmptyReplyError("summarizer returned a blank reply " + std::to_string(kSummaryAttempts) +
                        " times for frame " + std::to_string(composed.frame_index) + " (" +
                        std::string(to_string(composed.modality)) + ")");
}

}  // namespace lela
