#include "lela/profile_io.hpp"

#include <sstream>

#include "lela/error.hpp"
#include "profile_io_json.hpp"

namespace lela {

using detail::Json;
using detail::OrderedJson;

namespace detail {

OrderedJson frame_json(const std::string& video_id, const FrameScore& frame) {
  OrderedJson f;
  f["video_id"] = video_id;
  f["frame_index"] = frame.frame_index;
  f["timestamp_s"] = frame.timestamp_s;
  OrderedJson scores = OrderedJson::object();
  for (Modality m : kComposableModalities) {
    if (auto it = frame.per_modality.find(m); it != frame.per_modality.end()) {
      scores[std::string(to_string(m))] = it->second;
    }
  }
  f["scores"] = std::move(scores);
  f["final"] = frame.final_score;
  f["flag"] = frame.flag;
  return f;
}

OrderedJson segments_json(const std::vector<Segment>& segments) {
  OrderedJson out = OrderedJson::array();
  for (const Segment& s : segments) out.push_back({{"start_frame", s.start_frame}, {"end_frame", s.end_frame}});
  return out;
}

OrderedJson policy_json(const AggregationPolicy& policy) {
  return {{"kind", std::string(to_string(policy.kind))}, {"fraction_threshold", policy.fraction_threshold}};
}

OrderedJson profile_json(const HateProfile& profile) {
  OrderedJson out;
  out["video_id"] = profile.video_id;
  out["tau"] = profile.tau;
  OrderedJson frames = OrderedJson::array();
  for (const FrameScore& f : profile.frames) {
    OrderedJson fj = frame_json(profile.video_id, f);
    fj.erase("video_id");
    frames.push_back(std::move(fj));
  }
  out["frames"] = std::move(frames);
  out["segments"] = segments_json(profile.segments);
  out["video_verdict"] = profile.video_verdict;
  out["policy"] = policy_json(profile.policy);
  return out;
}

namespace {

FrameScore parse_frame(const Json& f, const std::string& path) {
  FrameScore frame;
  frame.frame_index = static_cast<int>(require_integer(f, "frame_index", path));
  frame.timestamp_s = require_number(f, "timestamp_s", path);
  const Json& scores = require(f, "scores", path);
  if (!scores.is_object()) throw SchemaError(path + ".scores", "expected an object");
  for (const auto& [key, value] : scores.items()) {
    auto m = modality_from_string(key);
    if (!m || !is_composable(*m)) throw SchemaError(path + ".scores." + key, "not a composable modality");
    if (!value.is_number()) throw SchemaError(path + ".scores." + key, "expected a number");
    frame.per_modality[*m] = value.get<double>();
  }
  frame.final_score = require_number(f, "final", path);
  frame.flag = static_cast<int>(require_integer(f, "flag", path));
  return frame;
}

std::vector<Segment> parse_segments(const Json& segments, const std::string& path) {
  if (!segments.is_array()) throw SchemaError(path, "expected an array");
  std::vector<Segment> out;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const std::string p = index_path(path, i);
    out.push_back({static_cast<int>(require_integer(segments[i], "start_frame", p)),
                   static_cast<int>(require_integer(segments[i], "end_frame", p))});
  }
  return out;
}

AggregationPolicy parse_policy(const Json& policy, const std::string& path) {
  AggregationPolicy out;
  out.kind = aggregation_kind_from_string(require_string(policy, "kind", path));
  out.fraction_threshold = require_number(policy, "fraction_threshold", path);
  return out;
}

}  // namespace

HateProfile profile_from_json(const Json& j) {
  HateProfile profile;
  profile.video_id = require_string(j, "video_id", "");
  profile.tau = require_number(j, "tau", "");
  const Json& frames = require_array(j, "frames", "");
  for (std::size_t i = 0; i < frames.size(); ++i) profile.frames.push_back(parse_frame(frames[i], index_path(".frames", i)));
  profile.segments = parse_segments(require(j, "segments", ""), ".segments");
  profile.video_verdict = static_cast<int>(require_integer(j, "video_verdict", ""));
  profile.policy = parse_policy(require(j, "policy", ""), ".policy");
  validate_profile(profile);
  return profile;
}

}  // namespace detail

namespace {

std::vector<Json> parse_lines(std::string_view text) {
  std::vector<Json> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) out.push_back(detail::parse_json(line));
    start = end + 1;
  }
  return out;
}

}  // namespace

std::string write_profile_jsonl(const HateProfile& profile) {
  std::ostringstream out;
  for (const FrameScore& f : profile.frames) out << detail::frame_json(profile.video_id, f).dump() << "\n";
  OrderedJson trailer;
  trailer["segments"] = detail::segments_json(profile.segments);
  trailer["tau"] = profile.tau;
  trailer["video_verdict"] = profile.video_verdict;
  trailer["policy"] = detail::policy_json(profile.policy);
  out << trailer.dump() << "\n";
  return out.str();
}

HateProfile parse_profile_jsonl(std::string_view text) {
  const std::vector<Json> lines = parse_lines(text);
  if (lines.empty() || lines.back().contains("frame_index")) {
    throw SchemaError("", "profile JSONL must end with a trailer object");
  }
  HateProfile profile;
  for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
    const std::string path = "line " + std::to_string(i + 1);
    if (i == 0) profile.video_id = detail::require_string(lines[i], "video_id", path);
    profile.frames.push_back(detail::parse_frame(lines[i], path));
  }
  const Json& trailer = lines.back();
  profile.segments = detail::parse_segments(detail::require(trailer, "segments", "trailer"), "trailer.segments");
  profile.tau = detail::require_number(trailer, "tau", "trailer");
  profile.video_verdict = static_cast<int>(detail::require_integer(trailer, "video_verdict", "trailer"));
  profile.policy = detail::parse_policy(detail::require(trailer, "policy", "trailer"), "trailer.policy");
  validate_profile(profile);
  return profile;
}

std::string write_transcript_jsonl(const ExchangeLog& exchanges) {
  std::ostringstream out;
  for (const ExchangeRecord& e : exchanges) {
    OrderedJson j;
    j["frame_index"] = e.frame_index;
    j["modality"] = std::string(to_string(e.modality));
    j["stage"] = e.stage;
    j["prompt_sha256"] = e.prompt_sha256;
    j["reply"] = e.reply;
    if (e.speech_fallback) j["speech_fallback"] = true;
    out << j.dump() << "\n";
  }
  return out.str();
}

ExchangeLog parse_transcript_jsonl(std::string_view text) {
  ExchangeLog out;
  std::size_t i = 0;
  for (const Json& j : parse_lines(text)) {
    const std::string path = "line " + std::to_string(++i);
    ExchangeRecord e;
    e.frame_index = static_cast<int>(detail::require_integer(j, "frame_index", path));
    auto m = modality_from_string(detail::require_string(j, "modality", path));
    if (!m) throw SchemaError(path + ".modality", "unknown modality");
    e.modality = *m;
    e.stage = detail::require_string(j, "stage", path);
    e.prompt_sha256 = detail::require_string(j, "prompt_sha256", path);
    e.reply = detail::require_string(j, "reply", path);
    e.speech_fallback = j.value("speech_fallback", false);
    out.push_back(std::move(e));
  }
  return out;
}

std::string write_traces_jsonl(const std::vector<StageTrace>& traces) {
  std::ostringstream out;
  for (const StageTrace& t : traces) {
    OrderedJson j;
    j["frame_index"] = t.frame_index;
    j["modality"] = std::string(to_string(t.modality));
    j["rationale"] = t.rationale ? OrderedJson(*t.rationale) : OrderedJson(nullptr);
    j["raw_score_reply"] = t.raw_score_reply;
    j["score"] = t.score;
    j["speech_fallback"] = t.speech_fallback;
    out << j.dump() << "\n";
  }
  return out.str();
}

std::vector<StageTrace> parse_traces_jsonl(std::string_view text) {
  std::vector<StageTrace> out;
  std::size_t i = 0;
  for (const Json& j : parse_lines(text)) {
    const std::string path = "line " + std::to_string(++i);
    StageTrace t;
    t.frame_index = static_cast<int>(detail::require_integer(j, "frame_index", path));
    auto m = modality_from_string(detail::require_string(j, "modality", path));
    if (!m) throw SchemaError(path + ".modality", "unknown modality");
    t.modality = *m;
    const Json& rationale = detail::require(j, "rationale", path);
    if (rationale.is_string()) t.rationale = rationale.get<std::string>();
    t.raw_score_reply = detail::require_string(j, "raw_score_reply", path);
    t.score = detail::require_number(j, "score", path);
    t.speech_fallback = j.value("speech_fallback", false);
    out.push_back(std::move(t));
  }
  return out;
}

std::string profile_to_json(const HateProfile& profile) { return detail::profile_json(profile).dump(); }

}  // namespace lela
