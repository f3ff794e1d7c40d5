#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "lela/caption_model.hpp"
#include "lela/error.hpp"
#include "test_support.hpp"

namespace lela {
namespace {

using testing::frame;

constexpr const char* kTwoFrames = R"({
  "video_id": "v1", "duration_s": 2.0, "grid_fps": 1.0,
  "frames": [
    {"frame_index": 0, "timestamp_s": 0.0, "captions": {"speech": "hello", "ocr": "STOP"}},
    {"frame_index": 1, "timestamp_s": 1.0, "captions": {"image": ""}}
  ]
})";

TEST(Modality, NamesRoundTrip) {
  ASSERT_EQ(kAllModalities.size(), 5u);
  for (Modality m : kAllModalities) EXPECT_EQ(modality_from_string(to_string(m)), m);
  EXPECT_EQ(modality_from_string("subtitle"), std::nullopt);
  EXPECT_FALSE(is_composable(Modality::kSpeech));
  EXPECT_EQ(kComposableModalities.size(), 4u);
  for (Modality m : kComposableModalities) EXPECT_TRUE(is_composable(m));
}

TEST(CaptionManifest, ParsesMinimalDocument) {
  const CaptionManifest m = parse_manifest(kTwoFrames);
  EXPECT_EQ(m.video_id, "v1");
  EXPECT_EQ(m.frame_count(), 2);
  EXPECT_EQ(*m.frames[0].caption(Modality::kSpeech), "hello");
  // Absent and empty captions stay distinct.
  EXPECT_TRUE(m.frames[1].has(Modality::kImage));
  EXPECT_EQ(*m.frames[1].caption(Modality::kImage), "");
  EXPECT_FALSE(m.frames[1].has(Modality::kSpeech));
  EXPECT_FALSE(m.ground_truth.has_value());
}

TEST(CaptionManifest, GapNamesMissingFrame) {
  const std::string doc = R"({"video_id": "v1", "duration_s": 2.0, "grid_fps": 1.0, "frames": [
    {"frame_index": 0, "timestamp_s": 0.0, "captions": {}},
    {"frame_index": 2, "timestamp_s": 2.0, "captions": {}}]})";
  try {
    parse_manifest(doc);
    FAIL() << "expected InvariantError";
  } catch (const InvariantError& e) {
    EXPECT_NE(std::string(e.what()).find("frame_index 1"), std::string::npos) << e.what();
  }
}

TEST(CaptionManifest, MissingVideoIdReportsPath) {
  const std::string doc = R"({"duration_s": 2.0, "grid_fps": 1.0, "frames": []})";
  try {
    parse_manifest(doc);
    FAIL() << "expected SchemaError";
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), ".video_id");
  }
}

TEST(CaptionManifest, RejectsMalformedDocuments) {
  EXPECT_THROW(parse_manifest("{not json"), SyntaxError);
  EXPECT_THROW(parse_manifest("[]"), SchemaError);
  // Wrong frame count for the duration.
  EXPECT_THROW(parse_manifest(R"({"video_id": "v", "duration_s": 3.0, "grid_fps": 1.0, "frames": [
    {"frame_index": 0, "timestamp_s": 0.0, "captions": {}}]})"),
               InvariantError);
  // Timestamp off the grid.
  EXPECT_THROW(parse_manifest(R"({"video_id": "v", "duration_s": 1.0, "grid_fps": 1.0, "frames": [
    {"frame_index": 0, "timestamp_s": 0.5, "captions": {}}]})"),
               InvariantError);
  // Unknown modality key.
  try {
    parse_manifest(R"({"video_id": "v", "duration_s": 1.0, "grid_fps": 1.0, "frames": [
      {"frame_index": 0, "timestamp_s": 0.0, "captions": {"smell": "x"}}]})");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.path(), ".frames[0].captions.smell");
  }
  // Ground truth naming a frame that does not exist.
  EXPECT_THROW(parse_manifest(R"({"video_id": "v", "duration_s": 1.0, "grid_fps": 1.0, "frames": [
    {"frame_index": 0, "timestamp_s": 0.0, "captions": {}}], "ground_truth": [{"frame_index": 3, "label": 1}]})"),
               InvariantError);
}

TEST(CaptionManifest, FrameCountIsCeiling) {
  EXPECT_EQ(frame_count_for(2.0, 1.0), 2);
  EXPECT_EQ(frame_count_for(2.5, 1.0), 3);
  EXPECT_EQ(frame_count_for(10.0, 2.0), 20);
  EXPECT_EQ(frame_count_for(0.1, 1.0), 1);
  EXPECT_EQ(frame_count_for(0.3, 10.0), 3);  // 0.3 * 10 is 3.0000000000000004 in binary
}

TEST(CaptionManifest, DenseLabelsNeedsFullCoverage) {
  CaptionManifest m = testing::manifest_of("v", {{}, {}, {}}, std::vector<int>{0, 1, 0});
  EXPECT_EQ(dense_labels(m), (std::vector<int>{0, 1, 0}));
  m.ground_truth->pop_back();
  EXPECT_EQ(dense_labels(m), std::nullopt);
  m.ground_truth.reset();
  EXPECT_EQ(dense_labels(m), std::nullopt);
}

TEST(AlignEvents, FullCoverInterval) {
  const std::vector<CaptionEvent> events{{Modality::kSpeech, 0.0, 2.0, "hello"}};
  const CaptionManifest m = align_events("v", 2.0, 1.0, events);
  ASSERT_EQ(m.frame_count(), 2);
  EXPECT_EQ(*m.frames[0].caption(Modality::kSpeech), "hello");
  EXPECT_EQ(*m.frames[1].caption(Modality::kSpeech), "hello");
}

TEST(AlignEvents, HalfOpenMembership) {
  const std::vector<CaptionEvent> events{{Modality::kMusic, 0.5, 1.5, "riff"}};
  const CaptionManifest m = align_events("v", 2.0, 1.0, events);
  EXPECT_FALSE(m.frames[0].has(Modality::kMusic));
  EXPECT_EQ(*m.frames[1].caption(Modality::kMusic), "riff");
}

TEST(AlignEvents, EndIsExclusive) {
  const std::vector<CaptionEvent> events{{Modality::kOcr, 0.0, 1.0, "A"}};
  const CaptionManifest m = align_events("v", 2.0, 1.0, events);
  EXPECT_TRUE(m.frames[0].has(Modality::kOcr));
  EXPECT_FALSE(m.frames[1].has(Modality::kOcr));
}

TEST(AlignEvents, OverlapsJoinInStartOrder) {
  const std::vector<CaptionEvent> events{{Modality::kOcr, 1.0, 2.0, "HATE"}, {Modality::kOcr, 0.0, 2.0, "STOP"}};
  const CaptionManifest m = align_events("v", 2.0, 1.0, events);
  EXPECT_EQ(*m.frames[0].caption(Modality::kOcr), "STOP");
  EXPECT_EQ(*m.frames[1].caption(Modality::kOcr), "STOP HATE");
}

TEST(AlignEvents, RejectsBadEvents) {
  const std::vector<CaptionEvent> inverted{{Modality::kOcr, 1.0, 0.5, "x"}};
  EXPECT_THROW(align_events("v", 2.0, 1.0, inverted), InvariantError);
  const std::vector<CaptionEvent> past_end{{Modality::kOcr, 0.0, 9.0, "x"}};
  EXPECT_THROW(align_events("v", 2.0, 1.0, past_end), InvariantError);
  const std::vector<CaptionEvent> huge{{Modality::kOcr, 0.0, 1.0, std::string(kMaxCaptionBytes + 1, 'a')}};
  EXPECT_THROW(align_events("v", 2.0, 1.0, huge), InvariantError);
  EXPECT_THROW(align_events("v", 0.0, 1.0, {}), InvariantError);
}

TEST(AlignEvents, LoadsEventDocuments) {
  const std::string doc = R"({"video_id": "ev", "duration_s": 3.0, "events": [
    {"modality": "speech", "start_s": 0.0, "end_s": 3.0, "text": "hi"},
    {"modality": "ocr", "start_s": 1.0, "end_s": 2.0, "text": "SIGN"}]})";
  const CaptionManifest m = load_caption_document(doc, 2.0);
  EXPECT_EQ(m.frame_count(), 6);
  EXPECT_DOUBLE_EQ(m.frames[3].timestamp_s, 1.5);
  EXPECT_EQ(*m.frames[3].caption(Modality::kOcr), "SIGN");
  EXPECT_FALSE(m.frames[4].has(Modality::kOcr));
  EXPECT_EQ(parse_event_document(serialize_event_document(parse_event_document(doc))).events.size(), 2u);
}

// Property: serialize -> parse is the identity on valid manifests.
TEST(CaptionManifestProperty, RoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> frames(1, 12);
  std::uniform_int_distribution<int> fps_pick(0, 2);
  std::bernoulli_distribution coin(0.5);
  const double fps_choices[] = {1.0, 2.0, 0.5};
  for (int trial = 0; trial < 100; ++trial) {
    CaptionManifest m;
    m.video_id = "rt-" + std::to_string(trial);
    m.grid_fps = fps_choices[fps_pick(rng)];
    const int n = frames(rng);
    m.duration_s = n / m.grid_fps;
    std::vector<GroundTruthLabel> gt;
    for (int j = 0; j < n; ++j) {
      FrameCaptions f{j, frame_timestamp(j, m.grid_fps), {}};
      for (Modality mod : kAllModalities) {
        if (coin(rng)) f.captions[mod] = coin(rng) ? "" : "caption \"" + std::to_string(j) + "\"\n\tünïcode";
      }
      m.frames.push_back(f);
      gt.push_back({j, coin(rng) ? 1 : 0});
    }
    if (coin(rng)) m.ground_truth = gt;
    const CaptionManifest back = parse_manifest(serialize_manifest(m));
    EXPECT_EQ(back, m);
  }
}

// Property: the aligned manifest does not depend on event order.
TEST(AlignEventsProperty, PermutationInvariant) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> half_steps(0, 16);
  std::uniform_int_distribution<int> mod(0, 4);
  std::uniform_int_distribution<int> word(0, 3);
  const char* words[] = {"alpha", "beta", "gamma", "delta"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<CaptionEvent> events;
    for (int k = 0; k < 10; ++k) {
      int a = half_steps(rng), b = half_steps(rng);
      if (a == b) ++b;
      if (a > b) std::swap(a, b);
      events.push_back({kAllModalities[static_cast<std::size_t>(mod(rng))], a / 2.0, b / 2.0, words[word(rng)]});
    }
    const CaptionManifest reference = align_events("p", 8.5, 1.0, events);
    for (int shuffle = 0; shuffle < 5; ++shuffle) {
      std::shuffle(events.begin(), events.end(), rng);
      EXPECT_EQ(align_events("p", 8.5, 1.0, events), reference);
    }
  }
}

}  // namespace
}  // namespace lela
