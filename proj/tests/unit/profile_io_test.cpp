#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "lela/error.hpp"
#include "lela/profile_io.hpp"

namespace lela {
namespace {

HateProfile random_profile(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<FrameScore> frames;
  for (int j = 0; j < n; ++j) {
    FrameScore f;
    f.frame_index = j;
    f.timestamp_s = j * 0.5;
    for (Modality m : kComposableModalities) {
      if (coin(rng)) f.per_modality[m] = u(rng);
    }
    if (f.per_modality.empty()) f.per_modality[Modality::kVideo] = u(rng);
    for (const auto& [m, s] : f.per_modality) f.final_score = std::max(f.final_score, s);
    frames.push_back(f);
  }
  return build_profile("vid", frames, 0.5, {coin(rng) ? AggregationKind::kMaxFrame : AggregationKind::kFlaggedFraction, 0.25});
}

TEST(ProfileIo, LayoutAndTrailer) {
  std::mt19937_64 rng(1);
  const HateProfile p = random_profile(rng, 3);
  const std::string text = write_profile_jsonl(p);
  std::vector<nlohmann::json> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    lines.push_back(nlohmann::json::parse(text.substr(start, end - start)));
    start = end + 1;
  }
  ASSERT_EQ(lines.size(), 4u);
  for (int j = 0; j < 3; ++j) {
    EXPECT_EQ(lines[static_cast<std::size_t>(j)]["frame_index"], j);
    EXPECT_EQ(lines[static_cast<std::size_t>(j)]["video_id"], "vid");
    for (const char* key : {"timestamp_s", "scores", "final", "flag"}) {
      EXPECT_TRUE(lines[static_cast<std::size_t>(j)].contains(key)) << key;
    }
  }
  for (const char* key : {"segments", "tau", "video_verdict", "policy"}) EXPECT_TRUE(lines[3].contains(key)) << key;
}

// Property: write -> parse reproduces the profile exactly, including doubles.
TEST(ProfileIoProperty, RoundTrip) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const HateProfile p = random_profile(rng, 1 + trial % 17);
    EXPECT_EQ(parse_profile_jsonl(write_profile_jsonl(p)), p);
  }
}

TEST(ProfileIo, RejectsTamperedProfiles) {
  std::mt19937_64 rng(3);
  HateProfile p = random_profile(rng, 4);
  p.frames[0].flag = 1 - p.frames[0].flag;
  EXPECT_THROW(parse_profile_jsonl(write_profile_jsonl(p)), InvariantError);
  EXPECT_THROW(parse_profile_jsonl("{"), SyntaxError);
  EXPECT_THROW(parse_profile_jsonl(""), Error);
}

TEST(TranscriptIo, RoundTrip) {
  const ExchangeLog log{{0, Modality::kOcr, "summary", std::string(64, 'a'), "text\nwith newline", false},
                        {0, Modality::kVideo, "score-reask-1", std::string(64, 'b'), "0.4", true}};
  const std::string text = write_transcript_jsonl(log);
  EXPECT_EQ(parse_transcript_jsonl(text), log);
  EXPECT_EQ(text.find("speech_fallback\":false"), std::string::npos);
  EXPECT_NE(text.find("\"speech_fallback\":true"), std::string::npos);
}

TEST(TracesIo, RoundTrip) {
  const std::vector<StageTrace> traces{{0, Modality::kOcr, std::string("because"), "0.9", 0.9, false},
                                       {1, Modality::kVideo, std::nullopt, "Score: 0.1", 0.1, true}};
  EXPECT_EQ(parse_traces_jsonl(write_traces_jsonl(traces)), traces);
}

}  // namespace
}  // namespace lela
