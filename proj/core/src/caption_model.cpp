#include "lela/caption_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "json_util.hpp"

namespace lela {

using detail::Json;
using detail::OrderedJson;

namespace {

// Guards ceil() against products like 0.1 * 30 = 3.0000000000000004.
constexpr double kGridEpsilon = 1e-9;

bool timestamp_matches(double actual, double expected) {
  return std::abs(actual - expected) <= kGridEpsilon * std::max(1.0, std::abs(expected));
}

void validate_event(const CaptionEvent& e, std::size_t i) {
  const std::string where = "event " + std::to_string(i);
  if (!std::isfinite(e.start_s) || !std::isfinite(e.end_s) || e.start_s < 0.0) {
    throw InvariantError(where + ": start_s must be a finite number >= 0");
  }
  if (!(e.end_s > e.start_s)) throw InvariantError(where + ": end_s must exceed start_s");
  if (e.text.size() > kMaxCaptionBytes) {
    throw InvariantError(where + ": text exceeds " + std::to_string(kMaxCaptionBytes) + " bytes");
  }
}

Modality parse_modality(const Json& value, const std::string& path) {
  if (!value.is_string()) throw SchemaError(path, "expected a modality name");
  auto m = modality_from_string(value.get<std::string>());
  if (!m) throw SchemaError(path, "unknown modality '" + value.get<std::string>() + "'");
  return *m;
}

}  // namespace

int frame_count_for(double duration_s, double grid_fps) {
  return static_cast<int>(std::ceil(duration_s * grid_fps - kGridEpsilon));
}

void validate_manifest(const CaptionManifest& manifest) {
  if (manifest.video_id.empty()) throw InvariantError("video_id must be non-empty");
  if (!std::isfinite(manifest.duration_s) || manifest.duration_s <= 0.0) {
    throw InvariantError("duration_s must be > 0");
  }
  if (!std::isfinite(manifest.grid_fps) || manifest.grid_fps <= 0.0) {
    throw InvariantError("grid_fps must be > 0");
  }
  for (std::size_t i = 0; i < manifest.frames.size(); ++i) {
    const FrameCaptions& frame = manifest.frames[i];
    if (frame.frame_index != static_cast<int>(i)) {
      throw InvariantError("frames must be contiguous from 0: expected frame_index " +
                           std::to_string(i) + ", found " + std::to_string(frame.frame_index));
    }
    if (!timestamp_matches(frame.timestamp_s, frame_timestamp(frame.frame_index, manifest.grid_fps))) {
      throw InvariantError("frame_index " + std::to_string(i) + ": timestamp_s must equal frame_index / grid_fps");
    }
  }
  const int expected = frame_count_for(manifest.duration_s, manifest.grid_fps);
  if (manifest.frame_count() != expected) {
    throw InvariantError("duration mismatch: ceil(duration_s * grid_fps) = " + std::to_string(expected) +
                         " frames, manifest has " + std::to_string(manifest.frame_count()));
  }
  if (manifest.ground_truth) {
    std::set<int> seen;
    for (const GroundTruthLabel& gt : *manifest.ground_truth) {
      if (gt.frame_index < 0 || gt.frame_index >= manifest.frame_count()) {
        throw InvariantError("ground_truth frame_index " + std::to_string(gt.frame_index) + " has no frame");
      }
      if (gt.label != 0 && gt.label != 1) {
        throw InvariantError("ground_truth label for frame " + std::to_string(gt.frame_index) + " must be 0 or 1");
      }
      if (!seen.insert(gt.frame_index).second) {
        throw InvariantError("ground_truth frame_index " + std::to_string(gt.frame_index) + " repeated");
      }
    }
  }
}

CaptionManifest parse_manifest(std::string_view document) {
  const Json root = detail::parse_json(document);
  if (!root.is_object()) throw SchemaError("", "expected a top-level object");

  CaptionManifest m;
  m.video_id = detail::require_string(root, "video_id", "");
  m.duration_s = detail::require_number(root, "duration_s", "");
  m.grid_fps = detail::require_number(root, "grid_fps", "");

  const Json& frames = detail::require_array(root, "frames", "");
  m.frames.reserve(frames.size());
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const std::string path = detail::index_path(".frames", i);
    const Json& f = frames[i];
    if (!f.is_object()) throw SchemaError(path, "expected an object");
    FrameCaptions frame;
    const long long index = detail::require_integer(f, "frame_index", path);
    if (index < 0) throw SchemaError(path + ".frame_index", "must be >= 0");
    frame.frame_index = static_cast<int>(index);
    frame.timestamp_s = detail::require_number(f, "timestamp_s", path);
    const Json& captions = detail::require(f, "captions", path);
    if (!captions.is_object()) throw SchemaError(path + ".captions", "expected an object");
    for (const auto& [key, value] : captions.items()) {
      const std::string cpath = path + ".captions." + key;
      auto modality = modality_from_string(key);
      if (!modality) throw SchemaError(cpath, "unknown modality");
      if (!value.is_string()) throw SchemaError(cpath, "expected a string");
      frame.captions.emplace(*modality, value.get<std::string>());
    }
    m.frames.push_back(std::move(frame));
  }

  if (auto it = root.find("ground_truth"); it != root.end()) {
    if (!it->is_array()) throw SchemaError(".ground_truth", "expected an array");
    std::vector<GroundTruthLabel> labels;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string path = detail::index_path(".ground_truth", i);
      const Json& g = (*it)[i];
      GroundTruthLabel label;
      label.frame_index = static_cast<int>(detail::require_integer(g, "frame_index", path));
      label.label = static_cast<int>(detail::require_integer(g, "label", path));
      labels.push_back(label);
    }
    m.ground_truth = std::move(labels);
  }

  validate_manifest(m);
  for (FrameCaptions& frame : m.frames) frame.timestamp_s = frame_timestamp(frame.frame_index, m.grid_fps);
  return m;
}

std::string serialize_manifest(const CaptionManifest& manifest) {
  OrderedJson root;
  root["video_id"] = manifest.video_id;
  root["duration_s"] = manifest.duration_s;
  root["grid_fps"] = manifest.grid_fps;
  OrderedJson frames = OrderedJson::array();
  for (const FrameCaptions& frame : manifest.frames) {
    OrderedJson f;
    f["frame_index"] = frame.frame_index;
    f["timestamp_s"] = frame.timestamp_s;
    OrderedJson captions = OrderedJson::object();
    for (Modality m : kAllModalities) {
      if (const std::string* text = frame.caption(m)) captions[std::string(to_string(m))] = *text;
    }
    f["captions"] = std::move(captions);
    frames.push_back(std::move(f));
  }
  root["frames"] = std::move(frames);
  if (manifest.ground_truth) {
    OrderedJson gt = OrderedJson::array();
    for (const GroundTruthLabel& label : *manifest.ground_truth) {
      gt.push_back({{"frame_index", label.frame_index}, {"label", label.label}});
    }
    root["ground_truth"] = std::move(gt);
  }
  return root.dump(2) + "\n";
}

EventDocument parse_event_document(std::string_view document) {
  const Json root = detail::parse_json(document);
  if (!root.is_object()) throw SchemaError("", "expected a top-level object");
  EventDocument doc;
  doc.video_id = detail::require_string(root, "video_id", "");
  doc.duration_s = detail::require_number(root, "duration_s", "");
  const Json& events = detail::require_array(root, "events", "");
  for (std::size_t i = 0; i < events.size(); ++i) {
    const std::string path = detail::index_path(".events", i);
    const Json& e = events[i];
    CaptionEvent event;
    event.modality = parse_modality(detail::require(e, "modality", path), path + ".modality");
    event.start_s = detail::require_number(e, "start_s", path);
    event.end_s = detail::require_number(e, "end_s", path);
    event.text = detail::require_string(e, "text", path);
    doc.events.push_back(std::move(event));
  }
  return doc;
}

std::string serialize_event_document(const EventDocument& document) {
  OrderedJson root;
  root["video_id"] = document.video_id;
  root["duration_s"] = document.duration_s;
  OrderedJson events = OrderedJson::array();
  for (const CaptionEvent& e : document.events) {
    events.push_back({{"modality", std::string(to_string(e.modality))},
                      {"start_s", e.start_s},
                      {"end_s", e.end_s},
                      {"text", e.text}});
  }
  root["events"] = std::move(events);
  return root.dump(2) + "\n";
}

CaptionManifest align_events(std::string video_id, double duration_s, double grid_fps,
                             std::span<const CaptionEvent> events) {
  if (!std::isfinite(duration_s) || duration_s <= 0.0) throw InvariantError("duration_s must be > 0");
  if (!std::isfinite(grid_fps) || grid_fps <= 0.0) throw InvariantError("grid_fps must be > 0");
  const double step = 1.0 / grid_fps;
  for (std::size_t i = 0; i < events.size(); ++i) {
    validate_event(events[i], i);
    if (events[i].end_s > duration_s + step + kGridEpsilon) {
      throw InvariantError("event " + std::to_string(i) + " ends at " + std::to_string(events[i].end_s) +
                           " s, more than one grid step past duration " + std::to_string(duration_s));
    }
  }

  std::vector<const CaptionEvent*> ordered;
  ordered.reserve(events.size());
  for (const CaptionEvent& e : events) ordered.push_back(&e);
  std::sort(ordered.begin(), ordered.end(), [](const CaptionEvent* a, const CaptionEvent* b) {
    return std::tie(a->start_s, a->end_s, a->modality, a->text) <
           std::tie(b->start_s, b->end_s, b->modality, b->text);
  });

  CaptionManifest m;
  m.video_id = std::move(video_id);
  m.duration_s = duration_s;
  m.grid_fps = grid_fps;
  const int count = frame_count_for(duration_s, grid_fps);
  m.frames.resize(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    m.frames[j].frame_index = j;
    m.frames[j].timestamp_s = frame_timestamp(j, grid_fps);
  }
  for (const CaptionEvent* e : ordered) {
    // Frames whose timestamp j / fps lies in [start, end).
    int first = static_cast<int>(std::ceil(e->start_s * grid_fps - kGridEpsilon));
    first = std::max(first, 0);
    for (int j = first; j < count; ++j) {
      const double t = m.frames[j].timestamp_s;
      if (t < e->start_s) continue;
      if (t >= e->end_s) break;
      auto [it, inserted] = m.frames[j].captions.try_emplace(e->modality, e->text);
      if (!inserted) {
        it->second.push_back(' ');
        it->second += e->text;
      }
    }
  }
  return m;
}

CaptionManifest load_caption_document(std::string_view document, double grid_fps) {
  const Json root = detail::parse_json(document);
  if (root.is_object() && root.contains("events") && !root.contains("frames")) {
    EventDocument doc = parse_event_document(document);
    return align_events(std::move(doc.video_id), doc.duration_s, grid_fps, doc.events);
  }
  return parse_manifest(document);
}

std::optional<std::vector<int>> dense_labels(const CaptionManifest& manifest) {
  if (!manifest.ground_truth) return std::nullopt;
  if (static_cast<int>(manifest.ground_truth->size()) != manifest.frame_count()) return std::nullopt;
  std::vector<int> labels(manifest.frames.size(), -1);
  for (const GroundTruthLabel& gt : *manifest.ground_truth) labels[gt.frame_index] = gt.label;
  if (std::find(labels.begin(), labels.end(), -1) != labels.end()) return std::nullopt;
  return labels;
}

}  // namespace lela
