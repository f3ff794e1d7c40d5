#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lela/modality.hpp"

namespace lela {

inline constexpr double kDefaultGridFps = 1.0;
inline constexpr std::size_t kMaxCaptionBytes = 8192;

/// Raw captioner output before alignment: `text` covers [start_s, end_s).
struct CaptionEvent {
  Modality modality = Modality::kSpeech;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;

  friend bool operator==(const CaptionEvent&, const CaptionEvent&) = default;
};

/// Captions at one grid frame. A modality missing from `captions` means no
/// captioner output covers the frame; an empty string means the captioner ran
/// and found nothing.
struct FrameCaptions {
  int frame_index = 0;
  double timestamp_s = 0.0;
  std::map<Modality, std::string> captions;

  const std::string* caption(Modality m) const {
    auto it = captions.find(m);
    return it == captions.end() ? nullptr : &it->second;
  }
  bool has(Modality m) const { return captions.contains(m); }

  friend bool operator==(const FrameCaptions&, const FrameCaptions&) = default;
};

struct GroundTruthLabel {
  int frame_index = 0;
  int label = 0;

  friend bool operator==(const GroundTruthLabel&, const GroundTruthLabel&) = default;
};

struct CaptionManifest {
  std::string video_id;
  double duration_s = 0.0;
  double grid_fps = kDefaultGridFps;
  std::vector<FrameCaptions> frames;
  std::optional<std::vector<GroundTruthLabel>> ground_truth;

  int frame_count() const { return static_cast<int>(frames.size()); }

  friend bool operator==(const CaptionManifest&, const CaptionManifest&) = default;
};

/// Raw-event file contents.
struct EventDocument {
  std::string video_id;
  double duration_s = 0.0;
  std::vector<CaptionEvent> events;
};

/// M = ceil(duration_s * grid_fps).
int frame_count_for(double duration_s, double grid_fps);
inline double frame_timestamp(int frame_index, double grid_fps) { return frame_index / grid_fps; }

/// Throws InvariantError naming the first violated manifest invariant.
void validate_manifest(const CaptionManifest& manifest);

/// Parses the JSON manifest format. Throws SyntaxError, SchemaError (with a
/// field path) or InvariantError.
CaptionManifest parse_manifest(std::string_view document);
std::string serialize_manifest(const CaptionManifest& manifest);

EventDocument parse_event_document(std::string_view document);
std::string serialize_event_document(const EventDocument& document);

/// Resamples caption events onto the uniform grid. Per frame and modality the
/// texts of all events whose [start_s, end_s) contains j/grid_fps are joined
/// with single spaces, ordered by (start_s, end_s, text).
CaptionManifest align_events(std::string video_id, double duration_s, double grid_fps,
                             std::span<const CaptionEvent> events);

/// Accepts either a manifest or a raw-event document (detected by an "events"
/// member); raw events are aligned at `grid_fps`.
CaptionManifest load_caption_document(std::string_view document, double grid_fps = kDefaultGridFps);

/// Per-frame labels when ground truth covers every frame exactly once.
std::optional<std::vector<int>> dense_labels(const CaptionManifest& manifest);

}  // namespace lela
