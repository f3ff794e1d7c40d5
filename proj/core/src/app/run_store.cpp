#include "lela/app/run_store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

#include "json_util.hpp"
#include "lela/error.hpp"
#include "lela/profile_io.hpp"

namespace lela::app {

namespace fs = std::filesystem;
using detail::Json;
using detail::OrderedJson;

std::string_view to_string(Decision decision) {
  switch (decision) {
    case Decision::kConfirmHateful: return "confirm_hateful";
    case Decision::kOverturn: return "overturn";
    case Decision::kUnsure: return "unsure";
  }
  return "unsure";
}

std::optional<Decision> decision_from_string(std::string_view name) {
  if (name == "confirm_hateful") return Decision::kConfirmHateful;
  if (name == "overturn") return Decision::kOverturn;
  if (name == "unsure") return Decision::kUnsure;
  return std::nullopt;
}

void append_line(const fs::path& path, const std::string& line) {
  std::string data = line;
  if (data.empty() || data.back() != '\n') data.push_back('\n');
  const int fd = ::open(path.c_str(), O_WRONLY | O_APPEND | O_CREAT | O_CLOEXEC, 0644);
  if (fd < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
  const ssize_t written = ::write(fd, data.data(), data.size());
  const int saved = errno;
  ::close(fd);
  if (written != static_cast<ssize_t>(data.size())) {
    throw IoError("short append to " + path.string() + ": " + std::strerror(saved));
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& text) {
  const fs::path temp = path.string() + ".tmp";
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw IoError("cannot write " + temp.string());
  }
  std::error_code ec;
  fs::rename(temp, path, ec);
  if (ec) throw IoError("cannot rename " + temp.string() + ": " + ec.message());
}

namespace {

std::string format_utc(std::chrono::system_clock::time_point t, bool compact) {
  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(t.time_since_epoch()).count();
  const std::time_t seconds = static_cast<std::time_t>(ms / 1000);
  std::tm tm{};
  gmtime_r(&seconds, &tm);
  char buffer[64];
  if (compact) {
    std::snprintf(buffer, sizeof(buffer), "%04d%02d%02dT%02d%02d%02d%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  } else {
    std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms % 1000));
  }
  return buffer;
}

// Strictly increasing per process, so ids sort in creation order.
std::chrono::system_clock::time_point next_id_time() {
  static std::mutex mutex;
  static std::chrono::system_clock::time_point last{};
  std::lock_guard lock(mutex);
  std::chrono::system_clock::time_point now = std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now());
  if (now <= last) now = last + std::chrono::milliseconds(1);
  last = now;
  return now;
}

bool valid_run_id(const std::string& id) {
  return !id.empty() && id.size() <= 64 && std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '-';
  });
}

std::vector<Json> read_jsonl(const fs::path& path) {
  std::vector<Json> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(detail::parse_json(line));
  }
  return out;
}

OrderedJson verdict_json(const VerdictRecord& v) {
  OrderedJson j;
  j["verdict_id"] = v.verdict_id;
  j["run_id"] = v.run_id;
  j["frame_range"] = {{"start", v.frame_range.start}, {"end", v.frame_range.end}};
  j["reviewer_id"] = v.reviewer_id;
  j["decision"] = std::string(to_string(v.decision));
  j["note"] = v.note;
  j["decided_at"] = v.decided_at;
  j["supersedes"] = v.supersedes ? OrderedJson(*v.supersedes) : OrderedJson(nullptr);
  return j;
}

VerdictRecord verdict_from_json(const Json& j) {
  VerdictRecord v;
  v.verdict_id = j.at("verdict_id").get<std::string>();
  v.run_id = j.at("run_id").get<std::string>();
  v.frame_range = {j.at("frame_range").at("start").get<int>(), j.at("frame_range").at("end").get<int>()};
  v.reviewer_id = j.at("reviewer_id").get<std::string>();
  v.decision = decision_from_string(j.at("decision").get<std::string>()).value_or(Decision::kUnsure);
  v.note = j.at("note").get<std::string>();
  v.decided_at = j.at("decided_at").get<std::string>();
  if (j.contains("supersedes") && j["supersedes"].is_string()) v.supersedes = j["supersedes"].get<std::string>();
  return v;
}

}  // namespace

std::string utc_timestamp() { return format_utc(std::chrono::system_clock::now(), false); }

RunStore::RunStore(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "runs", ec);
  if (ec) throw IoError("cannot create run store at " + root_.string() + ": " + ec.message());
}

fs::path RunStore::run_dir(const std::string& run_id) const { return root_ / "runs" / run_id; }

bool RunStore::has_run(const std::string& run_id) const {
  return valid_run_id(run_id) && fs::exists(run_dir(run_id) / "run.json");
}

void RunStore::require_run(const std::string& run_id) const {
  if (!has_run(run_id)) throw Error("not-found", "no run '" + run_id + "' in " + root_.string());
}

std::mutex& RunStore::run_mutex(const std::string& run_id) {
  std::lock_guard lock(locks_mutex_);
  auto& slot = run_locks_[run_id];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

RunRecord RunStore::create_run(const CaptionManifest& manifest, const VideoAnalysis& analysis,
                               const std::string& config_json) {
  validate_profile(analysis.profile);
  std::random_device device;
  std::string run_id;
  fs::path dir;
  const auto created = next_id_time();
  for (int attempt = 0;; ++attempt) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "%06x", static_cast<unsigned>(device() & 0xffffff));
    run_id = format_utc(created, true) + "-" + suffix;
    dir = run_dir(run_id);
    std::error_code ec;
    if (fs::create_directory(dir, ec)) break;
    if (ec || attempt > 16) throw IoError("cannot create run directory " + dir.string());
  }

  RunRecord record;
  record.run_id = run_id;
  record.video_id = manifest.video_id;
  record.config_json = config_json;
  record.profile = analysis.profile;
  record.transcripts_path = dir / "transcript.jsonl";
  record.created_at = format_utc(created, false);

  write_text_file(dir / "profile.jsonl", write_profile_jsonl(analysis.profile));
  write_text_file(dir / "transcript.jsonl", write_transcript_jsonl(analysis.exchanges));
  write_text_file(dir / "traces.jsonl", write_traces_jsonl(analysis.traces));
  write_text_file(dir / "manifest.json", serialize_manifest(manifest));

  OrderedJson run;
  run["schema_version"] = std::string(kSchemaVersion);
  run["run_id"] = record.run_id;
  run["video_id"] = record.video_id;
  run["created_at"] = record.created_at;
  run["n_frames"] = analysis.profile.frames.size();
  run["tau"] = analysis.profile.tau;
  run["video_verdict"] = analysis.profile.video_verdict;
  run["config"] = config_json.empty() ? OrderedJson::object() : OrderedJson::parse(config_json);
  run["files"] = {{"profile", "profile.jsonl"},
                  {"transcript", "transcript.jsonl"},
                  {"traces", "traces.jsonl"},
                  {"manifest", "manifest.json"}};
  write_text_file(dir / "run.json", run.dump(2) + "\n");

  append_line(root_ / "index.jsonl",
              OrderedJson{{"run_id", run_id}, {"video_id", record.video_id}, {"created_at", record.created_at}}.dump());
  return record;
}

RunRecord RunStore::load_run(const std::string& run_id) const {
  require_run(run_id);
  const fs::path dir = run_dir(run_id);
  const Json run = detail::parse_json(read_text_file(dir / "run.json"));
  RunRecord record;
  record.run_id = run.at("run_id").get<std::string>();
  record.video_id = run.at("video_id").get<std::string>();
  record.created_at = run.at("created_at").get<std::string>();
  record.config_json = run.at("config").dump();
  record.profile = parse_profile_jsonl(read_text_file(dir / "profile.jsonl"));
  record.transcripts_path = dir / "transcript.jsonl";
  return record;
}

std::vector<RunSummary> RunStore::list_runs() const {
  std::vector<RunSummary> out;
  for (const Json& entry : read_jsonl(root_ / "index.jsonl")) {
    const std::string id = entry.value("run_id", "");
    if (!has_run(id)) continue;
    const Json run = detail::parse_json(read_text_file(run_dir(id) / "run.json"));
    out.push_back({id, run.value("video_id", ""), run.value("created_at", ""), run.value("n_frames", 0),
                   run.value("tau", 0.0), run.value("video_verdict", 0)});
  }
  return out;
}

CaptionManifest RunStore::load_manifest(const std::string& run_id) const {
  require_run(run_id);
  return parse_manifest(read_text_file(run_dir(run_id) / "manifest.json"));
}

std::vector<StageTrace> RunStore::load_traces(const std::string& run_id) const {
  require_run(run_id);
  return parse_traces_jsonl(read_text_file(run_dir(run_id) / "traces.jsonl"));
}

ExchangeLog RunStore::load_transcript(const std::string& run_id) const {
  require_run(run_id);
  return parse_transcript_jsonl(read_text_file(run_dir(run_id) / "transcript.jsonl"));
}

VerdictRecord RunStore::append_verdict(const std::string& run_id, VerdictRecord draft) {
  require_run(run_id);
  const HateProfile profile = parse_profile_jsonl(read_text_file(run_dir(run_id) / "profile.jsonl"));
  const int n = static_cast<int>(profile.frames.size());
  if (draft.frame_range.start < 0 || draft.frame_range.end < draft.frame_range.start || draft.frame_range.end >= n) {
    throw Error("validation", "frame_range [" + std::to_string(draft.frame_range.start) + ", " +
                                  std::to_string(draft.frame_range.end) + "] outside profile bounds [0, " +
                                  std::to_string(n - 1) + "]");
  }

  std::lock_guard lock(run_mutex(run_id));
  const std::vector<VerdictRecord> existing = verdicts(run_id);
  if (draft.supersedes) {
    auto target = std::find_if(existing.begin(), existing.end(),
                               [&](const VerdictRecord& v) { return v.verdict_id == *draft.supersedes; });
    if (target == existing.end()) throw Error("validation", "supersedes unknown verdict '" + *draft.supersedes + "'");
    const bool already = std::any_of(existing.begin(), existing.end(), [&](const VerdictRecord& v) {
      return v.supersedes && *v.supersedes == *draft.supersedes;
    });
    if (already) throw Error("conflict", "verdict '" + *draft.supersedes + "' is already superseded");
  }
  draft.run_id = run_id;
  draft.verdict_id = std::to_string(existing.size() + 1);
  draft.decided_at = utc_timestamp();
  append_line(run_dir(run_id) / "verdicts.jsonl", verdict_json(draft).dump());
  return draft;
}

std::vector<VerdictRecord> RunStore::verdicts(const std::string& run_id) const {
  require_run(run_id);
  std::vector<VerdictRecord> out;
  for (const Json& j : read_jsonl(run_dir(run_id) / "verdicts.jsonl")) out.push_back(verdict_from_json(j));
  return out;
}

DerivedView RunStore::derive_view(const std::string& run_id, double tau) {
  require_run(run_id);
  const HateProfile original = parse_profile_jsonl(read_text_file(run_dir(run_id) / "profile.jsonl"));
  DerivedView view{run_id, tau, original.tau, rebinarize(original, tau), utc_timestamp()};

  OrderedJson j;
  j["run_id"] = run_id;
  j["tau"] = tau;
  j["original_tau"] = original.tau;
  j["flags"] = view.profile.flags();
  OrderedJson segments = OrderedJson::array();
  for (const Segment& s : view.profile.segments) segments.push_back({{"start_frame", s.start_frame}, {"end_frame", s.end_frame}});
  j["segments"] = std::move(segments);
  j["video_verdict"] = view.profile.video_verdict;
  j["created_at"] = view.created_at;
  std::lock_guard lock(run_mutex(run_id));
  append_line(run_dir(run_id) / "views.jsonl", j.dump());
  return view;
}

}  // namespace lela::app
