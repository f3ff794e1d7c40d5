#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "lela/localization.hpp"
#include "lela/prompting.hpp"

namespace lela {

/// One JSON object per frame {video_id, frame_index, timestamp_s, scores, final,
/// flag}, then a trailer {segments, tau, video_verdict, policy}.
std::string write_profile_jsonl(const HateProfile& profile);
HateProfile parse_profile_jsonl(std::string_view text);

/// One object per exchange {frame_index, modality, stage, prompt_sha256, reply}
/// (plus speech_fallback: true on fallback-routed exchanges).
std::string write_transcript_jsonl(const ExchangeLog& exchanges);
ExchangeLog parse_transcript_jsonl(std::string_view text);

std::string write_traces_jsonl(const std::vector<StageTrace>& traces);
std::vector<StageTrace> parse_traces_jsonl(std::string_view text);

/// JSON object of the profile (frames, segments, tau, verdict, policy), used by the HTTP API.
std::string profile_to_json(const HateProfile& profile);

}  // namespace lela
