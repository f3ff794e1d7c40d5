#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "lela/caption_model.hpp"
#include "lela/llm_gateway.hpp"
#include "lela/prompting.hpp"

namespace lela {

inline constexpr double kDefaultTau = 0.5;

struct ModalityScore {
  int frame_index = 0;
  Modality modality = Modality::kVideo;
  double score = 0.0;
};

struct FrameScore {
  int frame_index = 0;
  double timestamp_s = 0.0;
  std::map<Modality, double> per_modality;  // present channels only
  double final_score = 0.0;
  int flag = 0;

  friend bool operator==(const FrameScore&, const FrameScore&) = default;
};

/// Inclusive frame run.
struct Segment {
  int start_frame = 0;
  int end_frame = 0;

  friend bool operator==(const Segment&, const Segment&) = default;
};

enum class AggregationKind { kMaxFrame, kFlaggedFraction };

struct AggregationPolicy {
  AggregationKind kind = AggregationKind::kMaxFrame;
  double fraction_threshold = 0.1;

  friend bool operator==(const AggregationPolicy&, const AggregationPolicy&) = default;
};

std::string_view to_string(AggregationKind kind);
AggregationKind aggregation_kind_from_string(std::string_view name);
void validate_policy(const AggregationPolicy& policy);

/// Temporal profile of one video.
struct HateProfile {
  std::string video_id;
  double tau = kDefaultTau;
  std::vector<FrameScore> frames;
  std::vector<Segment> segments;
  int video_verdict = 0;
  AggregationPolicy policy;

  std::vector<double> finals() const;
  std::vector<int> flags() const;

  friend bool operator==(const HateProfile&, const HateProfile&) = default;
};

/// Max over the scores. Throws DomainError on empty input or mixed frames.
double fuse(std::span<const ModalityScore> scores);

/// flag_j = 1 iff score_j > tau. Throws DomainError for tau outside [0,1].
std::vector<int> binarize(std::span<const double> scores, double tau);

/// Maximal runs of 1s, ascending.
std::vector<Segment> extract_segments(std::span<const int> flags);

/// Inverse of extract_segments for a flag vector of length `frame_count`.
std::vector<int> segments_to_flags(std::span<const Segment> segments, int frame_count);

int aggregate_video(const HateProfile& profile, const AggregationPolicy& policy);

/// Fills flags, segments and the verdict from the frames' final scores.
HateProfile build_profile(std::string video_id, std::vector<FrameScore> frames, double tau,
                          const AggregationPolicy& policy);

/// Same scores, re-thresholded at `tau`.
HateProfile rebinarize(const HateProfile& profile, double tau);

/// Throws InvariantError when flags, segments or the verdict disagree with the scores.
void validate_profile(const HateProfile& profile);

struct ScoringOptions {
  PromptConfig prompt;
  std::vector<Modality> composable{kComposableModalities.begin(), kComposableModalities.end()};
};

struct FrameAnalysis {
  FrameScore score;
  std::vector<StageTrace> traces;
  ExchangeLog exchanges;
};

/// compose -> summarize -> run_multistage for every composable modality
/// present at the frame (restricted to options.composable). A frame with
/// only speech goes through the video channel as a speech fallback. Throws
/// NoEvidenceError when nothing is scoreable.
FrameAnalysis analyze_frame(const FrameCaptions& frame, LlmGateway& gateway, const ScoringOptions& options,
                            double tau = kDefaultTau);

FrameScore score_frame(const FrameCaptions& frame, LlmGateway& gateway, const ScoringOptions& options,
                       double tau = kDefaultTau);

}  // namespace lela
