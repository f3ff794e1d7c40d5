#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "lela/caption_model.hpp"
#include "lela/mock_backend.hpp"

namespace lela {

inline constexpr std::string_view kHateMarker = "HATE_MARK";

struct CorpusSpec {
  std::uint64_t seed = 7;
  int n_videos = 1;
  int frames_per_video = 10;
  double hateful_span_fraction = 0.3;
  Modality marker_modality = Modality::kOcr;
  double noise_rate = 0.0;
  // Mock scores for marker-bearing and all other scoring prompts.
  double hate_score = 0.9;
  double benign_score = 0.1;
};

/// Throws DomainError for out-of-range counts, fractions or scores.
void validate_corpus_spec(const CorpusSpec& spec);

struct CorruptedFrame {
  int video = 0;
  int frame_index = 0;
  double score = 0.0;

  friend bool operator==(const CorruptedFrame&, const CorruptedFrame&) = default;
};

struct SyntheticCorpus {
  std::vector<CaptionManifest> manifests;
  MockRuleSet mock_rules;
  std::vector<std::vector<int>> expected;  // per video, per frame
  std::vector<CorruptedFrame> corrupted;   // frames whose mock score is a uniform draw
};

/// Deterministic in `spec`: every video carries one contiguous planted span
/// whose frames hold kHateMarker in the marker modality's caption. Each
/// frame's speech caption carries a unique "<vNNN:fNNN>" token so noise rules
/// can target single frames.
SyntheticCorpus generate(const CorpusSpec& spec);

/// Frame token embedded in the speech caption of frame `frame` of video `video`.
std::string frame_token(int video, int frame);

/// Writes manifests/<video_id>.json, mock_rules.json and expected_labels.json.
void write_fixtures(const SyntheticCorpus& corpus, const std::filesystem::path& dir);

/// Reads every manifests/*.json below `dir` in file-name order.
std::vector<CaptionManifest> load_fixture_manifests(const std::filesystem::path& dir);

}  // namespace lela
