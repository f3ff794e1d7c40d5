#pragma once

#include <vector>

#include "lela/caption_model.hpp"
#include "lela/localization.hpp"

namespace lela {

struct AnalysisOptions {
  ScoringOptions scoring;
  double tau = kDefaultTau;
  AggregationPolicy policy;
  int workers = 1;
};

struct VideoAnalysis {
  HateProfile profile;
  std::vector<StageTrace> traces;  // frame order, then fusion order within a frame
  ExchangeLog exchanges;           // same ordering, independent of worker scheduling
};

/// Scores every frame (up to `workers` frames in flight; the gateway's
/// limiter bounds concurrent completions) and assembles the profile. When
/// several frames fail, the error of the lowest frame index is rethrown.
VideoAnalysis analyze_video(const CaptionManifest& manifest, LlmGateway& gateway, const AnalysisOptions& options);

}  // namespace lela
