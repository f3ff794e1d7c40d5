#include "lela/synth_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "json_util.hpp"
#include "lela/error.hpp"
#include "lela/report_io.hpp"

namespace lela {

namespace fs = std::filesystem;
using detail::OrderedJson;

namespace {

// Phrase pools carry no digits, so the only numbers in any prompt come from
// frame tokens and the fixed template text.
constexpr std::string_view kSpeech[] = {
    "the host talks about the weekend market", "a voice describes the recipe steps",
    "someone laughs and greets the audience", "the narrator explains the travel route",
    "two friends discuss the football match", "a teacher reviews the homework"};
constexpr std::string_view kImage[] = {
    "a kitchen with wooden shelves", "a crowded street at dusk", "a person holding a microphone",
    "a park with green trees", "a classroom with a whiteboard", "a living room with a sofa"};
constexpr std::string_view kOcr[] = {"SUBSCRIBE", "DAY ONE", "LIVE NOW", "WELCOME BACK", "PART TWO", "THANKS"};
constexpr std::string_view kMusic[] = {
    "soft acoustic guitar", "upbeat pop melody", "calm piano background", "light electronic beat",
    "cheerful ukulele tune", "ambient synth pad"};
constexpr std::string_view kVideo[] = {
    "the camera pans across the room", "a person walks toward the camera", "the scene cuts to a close-up",
    "people gather around a table", "the view zooms out slowly", "a hand points at the screen"};

// std::uniform_*_distribution differs across standard libraries; these
// mappings keep the corpus identical everywhere.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

template <std::size_t N>
std::string pick(std::mt19937_64& rng, const std::string_view (&pool)[N]) {
  return std::string(pool[uniform_index(rng, N)]);
}

std::string score_literal(double score) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.4f", score);
  return buffer;
}

std::string video_id_for(int video) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "synth-%03d", video);
  return buffer;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw IoError("cannot write " + path.string());
}

constexpr std::string_view kScoreStage = "rate the scene on a scale from 0 to 1";

}  // namespace

std::string frame_token(int video, int frame) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "<v%03d:f%03d>", video, frame);
  return buffer;
}

void validate_corpus_spec(const CorpusSpec& spec) {
  if (spec.n_videos < 1) throw DomainError("n_videos must be >= 1");
  if (spec.frames_per_video < 4) throw DomainError("frames_per_video must be >= 4");
  if (!(spec.hateful_span_fraction > 0.0 && spec.hateful_span_fraction < 1.0)) {
    throw DomainError("hateful_span_fraction must lie in (0, 1)");
  }
  if (!is_composable(spec.marker_modality)) throw DomainError("marker_modality must be a composable modality");
  if (!(spec.noise_rate >= 0.0 && spec.noise_rate < 1.0)) throw DomainError("noise_rate must lie in [0, 1)");
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(spec.hate_score) || !in_unit(spec.benign_score)) throw DomainError("mock scores must lie in [0, 1]");
}

SyntheticCorpus generate(const CorpusSpec& spec) {
  validate_corpus_spec(spec);
  std::mt19937_64 rng(spec.seed);

  const int frames = spec.frames_per_video;
  const int span = std::clamp(static_cast<int>(std::lround(spec.hateful_span_fraction * frames)), 1, frames - 1);

  std::vector<CaptionManifest> manifests;
  std::vector<std::vector<int>> expected;
  std::vector<CorruptedFrame> corrupted;
  std::vector<MockRule> rules = {
      {"summary:echo", {"Summarize the following multimodal scene description"}, "{input}", 100},
      {"rationale:echo", {"Please combine the"}, "{input}", 100},
      {"score:marker", {std::string(kScoreStage), std::string(kHateMarker)}, score_literal(spec.hate_score), 10},
      {"default", {}, score_literal(spec.benign_score), 0},
  };

  for (int v = 0; v < spec.n_videos; ++v) {
    const int span_start = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(frames - span + 1)));

    CaptionManifest m;
    m.video_id = video_id_for(v);
    m.grid_fps = kDefaultGridFps;
    m.duration_s = static_cast<double>(frames) / m.grid_fps;
    std::vector<int> labels(static_cast<std::size_t>(frames), 0);
    std::vector<GroundTruthLabel> ground_truth;

    for (int j = 0; j < frames; ++j) {
      const bool planted = j >= span_start && j < span_start + span;
      labels[j] = planted ? 1 : 0;
      ground_truth.push_back({j, labels[j]});

      FrameCaptions frame;
      frame.frame_index = j;
      frame.timestamp_s = frame_timestamp(j, m.grid_fps);
      frame.captions[Modality::kSpeech] = "narration " + frame_token(v, j) + " " + pick(rng, kSpeech);
      frame.captions[Modality::kImage] = pick(rng, kImage);
      frame.captions[Modality::kOcr] = pick(rng, kOcr);
      frame.captions[Modality::kMusic] = pick(rng, kMusic);
      frame.captions[Modality::kVideo] = pick(rng, kVideo);
      if (planted) {
        std::string& marked = frame.captions[spec.marker_modality];
        marked = std::string(kHateMarker) + " " + marked;
      }
      m.frames.push_back(std::move(frame));

      // Always consume both draws so the noise positions do not depend on the rate.
      const double coin = uniform01(rng);
      const double value = uniform01(rng);
      if (coin < spec.noise_rate) {
        corrupted.push_back({v, j, std::stod(score_literal(value))});
        rules.push_back({"noise:" + frame_token(v, j), {std::string(kScoreStage), frame_token(v, j)},
                         score_literal(value), 50});
      }
    }
    m.ground_truth = std::move(ground_truth);
    manifests.push_back(std::move(m));
    expected.push_back(std::move(labels));
  }

  return SyntheticCorpus{std::move(manifests), MockRuleSet(std::move(rules)), std::move(expected),
                         std::move(corrupted)};
}

void write_fixtures(const SyntheticCorpus& corpus, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir / "manifests", ec);
  if (ec) throw IoError("cannot create " + (dir / "manifests").string() + ": " + ec.message());
  for (const CaptionManifest& m : corpus.manifests) {
    write_file(dir / "manifests" / (m.video_id + ".json"), serialize_manifest(m));
  }
  write_file(dir / "mock_rules.json", serialize_mock_rules(corpus.mock_rules));

  OrderedJson videos = OrderedJson::object();
  for (std::size_t i = 0; i < corpus.manifests.size(); ++i) videos[corpus.manifests[i].video_id] = corpus.expected[i];
  OrderedJson corrupted = OrderedJson::array();
  for (const CorruptedFrame& c : corpus.corrupted) {
    corrupted.push_back({{"video_id", corpus.manifests[c.video].video_id}, {"frame_index", c.frame_index},
                         {"score", c.score}});
  }
  OrderedJson labels;
  labels["videos"] = std::move(videos);
  labels["corrupted"] = std::move(corrupted);
  write_file(dir / "expected_labels.json", labels.dump(2) + "\n");
}

std::vector<CaptionManifest> load_fixture_manifests(const fs::path& dir) {
  const fs::path root = fs::exists(dir / "manifests") ? dir / "manifests" : dir;
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root, ec)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw IoError("cannot read corpus directory " + root.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());
  std::vector<CaptionManifest> manifests;
  for (const fs::path& p : files) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in) throw IoError("cannot read " + p.string());
    manifests.push_back(parse_manifest(buffer.str()));
  }
  return manifests;
}

}  // namespace lela
