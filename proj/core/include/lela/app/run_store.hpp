#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "lela/caption_model.hpp"
#include "lela/localization.hpp"
#include "lela/pipeline.hpp"

namespace lela::app {

inline constexpr std::string_view kSchemaVersion = "1";

struct RunRecord {
  std::string run_id;
  std::string video_id;
  std::string config_json;  // snapshot of the analysis configuration
  HateProfile profile;
  std::filesystem::path transcripts_path;
  std::string created_at;  // ISO-8601 UTC
};

struct RunSummary {
  std::string run_id;
  std::string video_id;
  std::string created_at;
  int n_frames = 0;
  double tau = 0.0;
  int video_verdict = 0;
};

enum class Decision { kConfirmHateful, kOverturn, kUnsure };
std::string_view to_string(Decision decision);
std::optional<Decision> decision_from_string(std::string_view name);

struct FrameRange {
  int start = 0;
  int end = 0;
};

struct VerdictRecord {
  std::string verdict_id;  // assigned by the store, sequential per run
  std::string run_id;
  FrameRange frame_range;
  std::string reviewer_id;
  Decision decision = Decision::kUnsure;
  std::string note;
  std::string decided_at;
  std::optional<std::string> supersedes;
};

/// Re-thresholded view of a run; the stored profile keeps its original tau.
struct DerivedView {
  std::string run_id;
  double tau = 0.0;
  double original_tau = 0.0;
  HateProfile profile;
  std::string created_at;
};

/// Directory-per-run store:
///   <root>/index.jsonl                  one line per created run
///   <root>/runs/<id>/run.json           record + configuration snapshot
///   <root>/runs/<id>/profile.jsonl      per-frame scores and trailer
///   <root>/runs/<id>/transcript.jsonl   gateway exchanges
///   <root>/runs/<id>/traces.jsonl       stage traces (rationales, raw replies)
///   <root>/runs/<id>/manifest.json      captions and ground truth
///   <root>/runs/<id>/verdicts.jsonl     append-only reviewer verdicts
///   <root>/runs/<id>/views.jsonl        derived threshold views
/// Appends are single write(2) calls on O_APPEND descriptors, serialized per run.
class RunStore {
 public:
  explicit RunStore(std::filesystem::path root);

  RunRecord create_run(const CaptionManifest& manifest, const VideoAnalysis& analysis,
                       const std::string& config_json);

  bool has_run(const std::string& run_id) const;
  /// Throws Error("not-found") for unknown ids.
  RunRecord load_run(const std::string& run_id) const;
  std::vector<RunSummary> list_runs() const;

  CaptionManifest load_manifest(const std::string& run_id) const;
  std::vector<StageTrace> load_traces(const std::string& run_id) const;
  ExchangeLog load_transcript(const std::string& run_id) const;

  /// Validates and appends. Assigns verdict_id and decided_at. Throws
  /// Error("validation") for out-of-range frames or an unknown `supersedes`
  /// id, Error("conflict") when `supersedes` names an already superseded verdict.
  VerdictRecord append_verdict(const std::string& run_id, VerdictRecord draft);
  std::vector<VerdictRecord> verdicts(const std::string& run_id) const;

  /// Re-binarizes the stored scores at `tau` and appends the view to views.jsonl.
  DerivedView derive_view(const std::string& run_id, double tau);

  std::filesystem::path run_dir(const std::string& run_id) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::mutex& run_mutex(const std::string& run_id);
  void require_run(const std::string& run_id) const;

  std::filesystem::path root_;
  std::mutex locks_mutex_;
  std::map<std::string, std::unique_ptr<std::mutex>> run_locks_;
};

/// Atomic line append (creates the file). Throws IoError.
void append_line(const std::filesystem::path& path, const std::string& line);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Current UTC time as 2026-01-02T03:04:05.678Z.
std::string utc_timestamp();

}  // namespace lela::app
