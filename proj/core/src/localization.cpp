#include "lela/localization.hpp"

#include <algorithm>
#include <cmath>

#include "lela/error.hpp"

namespace lela {

std::string_view to_string(AggregationKind kind) {
  return kind == AggregationKind::kMaxFrame ? "max_frame" : "flagged_fraction";
}

AggregationKind aggregation_kind_from_string(std::string_view name) {
  if (name == "max_frame") return AggregationKind::kMaxFrame;
  if (name == "flagged_fraction") return AggregationKind::kFlaggedFraction;
  throw DomainError("unknown aggregation policy '" + std::string(name) + "'");
}

void validate_policy(const AggregationPolicy& policy) {
  if (!(policy.fraction_threshold > 0.0 && policy.fraction_threshold <= 1.0)) {
    throw DomainError("fraction_threshold must lie in (0, 1]");
  }
}

std::vector<double> HateProfile::finals() const {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const FrameScore& f : frames) out.push_back(f.final_score);
  return out;
}

std::vector<int> HateProfile::flags() const {
  std::vector<int> out;
  out.reserve(frames.size());
  for (const FrameScore& f : frames) out.push_back(f.flag);
  return out;
}

double fuse(std::span<const ModalityScore> scores) {
  if (scores.empty()) throw DomainError("fuse: no modality scores");
  double best = scores.front().score;
  for (const ModalityScore& s : scores) {
    if (s.frame_index != scores.front().frame_index) throw DomainError("fuse: scores from different frames");
    best = std::max(best, s.score);
  }
  return best;
}

std::vector<int> binarize(std::span<const double> scores, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  std::vector<int> flags;
  flags.reserve(scores.size());
  for (double s : scores) flags.push_back(s > tau ? 1 : 0);
  return flags;
}

std::vector<Segment> extract_segments(std::span<const int> flags) {
  std::vector<Segment> segments;
  const int n = static_cast<int>(flags.size());
  for (int j = 0; j < n;) {
    if (flags[j] != 1) {
      ++j;
      continue;
    }
    int end = j;
    while (end + 1 < n && flags[end + 1] == 1) ++end;
    segments.push_back({j, end});
    j = end + 1;
  }
  return segments;
}

std::vector<int> segments_to_flags(std::span<const Segment> segments, int frame_count) {
  std::vector<int> flags(static_cast<std::size_t>(frame_count), 0);
  for (const Segment& s : segments) {
    for (int j = std::max(0, s.start_frame); j <= s.end_frame && j < frame_count; ++j) flags[j] = 1;
  }
  return flags;
}

int aggregate_video(const HateProfile& profile, const AggregationPolicy& policy) {
  if (profile.frames.empty()) throw DomainError("aggregate_video: empty profile");
  const auto flagged = std::count_if(profile.frames.begin(), profile.frames.end(),
                                     [](const FrameScore& f) { return f.flag == 1; });
  if (policy.kind == AggregationKind::kMaxFrame) return flagged > 0 ? 1 : 0;
  validate_policy(policy);
  const double fraction = static_cast<double>(flagged) / static_cast<double>(profile.frames.size());
  return fraction >= policy.fraction_threshold ? 1 : 0;
}

HateProfile build_profile(std::string video_id, std::vector<FrameScore> frames, double tau,
                          const AggregationPolicy& policy) {
  validate_policy(policy);
  HateProfile profile;
  profile.video_id = std::move(video_id);
  profile.tau = tau;
  profile.policy = policy;
  profile.frames = std::move(frames);
  const std::vector<int> flags = binarize(profile.finals(), tau);
  for (std::size_t j = 0; j < flags.size(); ++j) profile.frames[j].flag = flags[j];
  profile.segments = extract_segments(flags);
  profile.video_verdict = profile.frames.empty() ? 0 : aggregate_video(profile, policy);
  return profile;
}

HateProfile rebinarize(const HateProfile& profile, double tau) {
  return build_profile(profile.video_id, profile.frames, tau, profile.policy);
}

void validate_profile(const HateProfile& profile) {
  for (std::size_t j = 0; j < profile.frames.size(); ++j) {
    const FrameScore& f = profile.frames[j];
    const std::string where = "frame " + std::to_string(j);
    if (f.frame_index != static_cast<int>(j)) throw InvariantError(where + ": frame_index out of sequence");
    if (f.per_modality.empty()) throw InvariantError(where + ": no modality scores");
    double best = 0.0;
    bool first = true;
    for (const auto& [m, s] : f.per_modality) {
      if (!is_composable(m)) throw InvariantError(where + ": speech has no score channel");
      if (!(s >= 0.0 && s <= 1.0)) throw InvariantError(where + ": score outside [0,1]");
      best = first ? s : std::max(best, s);
      first = false;
    }
    if (f.final_score != best) throw InvariantError(where + ": final is not the max of the modality scores");
    if (f.flag != (f.final_score > profile.tau ? 1 : 0)) throw InvariantError(where + ": flag disagrees with tau");
  }
  if (profile.segments != extract_segments(profile.flags())) {
    throw InvariantError("segments are not the maximal runs of flagged frames");
  }
  if (!profile.frames.empty() && profile.video_verdict != aggregate_video(profile, profile.policy)) {
    throw InvariantError("video_verdict disagrees with the aggregation policy");
  }
}

FrameAnalysis analyze_frame(const FrameCaptions& frame, LlmGateway& gateway, const ScoringOptions& options,
                            double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("tau must lie in [0, 1]");
  std::vector<ComposedCaption> channels;
  for (Modality m : kComposableModalities) {
    if (std::find(options.composable.begin(), options.composable.end(), m) == options.composable.end()) continue;
    if (auto composed = compose(frame, m)) channels.push_back(std::move(*composed));
  }
  if (channels.empty()) {
    if (!frame.has(Modality::kSpeech)) {
      throw NoEvidenceError(frame.frame_index,
                            "frame " + std::to_string(frame.frame_index) + " carries no usable caption");
    }
    channels.push_back(compose_speech_fallback(frame));
  }

  FrameAnalysis analysis;
  analysis.score.frame_index = frame.frame_index;
  analysis.score.timestamp_s = frame.timestamp_s;
  std::vector<ModalityScore> scores;
  for (const ComposedCaption& composed : channels) {
    const SummaryCaption summary = summarize(composed, gateway, options.prompt, &analysis.exchanges);
    StageTrace trace = run_multistage(gateway, summary, options.prompt, &analysis.exchanges);
    scores.push_back({frame.frame_index, composed.modality, trace.score});
    analysis.score.per_modality[composed.modality] = trace.score;
    analysis.traces.push_back(std::move(trace));
  }
  analysis.score.final_score = fuse(scores);
  analysis.score.flag = analysis.score.final_score > tau ? 1 : 0;
  return analysis;
}

FrameScore score_frame(const FrameCaptions& frame, LlmGateway& gateway, const ScoringOptions& options, double tau) {
  return analyze_frame(frame, gateway, options, tau).score;
}

}  // namespace lela
