#include <gtest/gtest.h>

#include <set>

#include "lela/ablation.hpp"
#include "lela/error.hpp"
#include "lela/synth_corpus.hpp"
#include "test_support.hpp"

namespace lela {
namespace {

struct Fixture {
  SyntheticCorpus corpus;
  std::vector<LabeledVideo> videos;
  std::shared_ptr<LlmGateway> gateway;
};

Fixture mock_corpus(int n_videos = 3, int frames = 10) {
  CorpusSpec spec;
  spec.n_videos = n_videos;
  spec.frames_per_video = frames;
  Fixture f{generate(spec), {}, nullptr};
  f.videos = labeled_corpus(f.corpus.manifests);
  f.gateway = testing::mock_gateway(f.corpus.mock_rules).gateway;
  return f;
}

TEST(AblationGrids, PromptingRows) {
  const auto grid = prompting_grid(PromptConfig{});
  ASSERT_EQ(grid.size(), 4u);
  EXPECT_EQ(grid.front().label, "final-only");
  EXPECT_FALSE(grid.front().scoring.prompt.enable_contextualization);
  EXPECT_FALSE(grid.front().scoring.prompt.enable_rationale);
  EXPECT_TRUE(grid.back().scoring.prompt.enable_contextualization);
  EXPECT_TRUE(grid.back().scoring.prompt.enable_rationale);
  std::set<std::pair<bool, bool>> toggles;
  for (const auto& row : grid) {
    toggles.emplace(row.scoring.prompt.enable_contextualization, row.scoring.prompt.enable_rationale);
  }
  EXPECT_EQ(toggles.size(), 4u);
}

TEST(AblationGrids, ModalityLadder) {
  const auto ladder = modality_ladder(PromptConfig{});
  ASSERT_EQ(ladder.size(), 5u);
  EXPECT_TRUE(ladder[0].scoring.composable.empty());
  for (std::size_t k = 1; k < ladder.size(); ++k) {
    EXPECT_EQ(ladder[k].scoring.composable.size(), k);
    EXPECT_EQ(ladder[k].scoring.composable.back(), kComposableModalities[k - 1]);
  }
  EXPECT_EQ(ablation_grid_from_string("modality"), AblationGrid::kModality);
  EXPECT_THROW(ablation_grid_from_string("bogus"), DomainError);
}

TEST(RunAblation, PromptingGridDistinctTranscripts) {
  Fixture f = mock_corpus();
  const auto grid = prompting_grid(PromptConfig{});
  const auto rows = run_ablation(f.videos, *f.gateway, grid);
  ASSERT_EQ(rows.size(), 4u);
  std::set<std::string> digests;
  for (const auto& row : rows) {
    digests.insert(row.transcript_sha256);
    EXPECT_DOUBLE_EQ(row.report.roc_auc, 1.0) << row.config.label;
    EXPECT_DOUBLE_EQ(row.report.accuracy, 1.0) << row.config.label;
  }
  EXPECT_EQ(digests.size(), 4u);
  EXPECT_LT(rows[0].exchanges, rows[3].exchanges);
}

TEST(RunAblation, LadderJumpsAtMarkerModality) {
  Fixture f = mock_corpus();
  const auto rows = run_ablation(f.videos, *f.gateway, modality_ladder(PromptConfig{}));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_DOUBLE_EQ(rows[0].report.roc_auc, 0.5);
  EXPECT_DOUBLE_EQ(rows[1].report.roc_auc, 0.5);
  EXPECT_GT(rows[2].report.roc_auc, rows[1].report.roc_auc);
  EXPECT_DOUBLE_EQ(rows[2].report.roc_auc, 1.0);
  std::set<std::string> digests;
  for (const auto& row : rows) digests.insert(row.transcript_sha256);
  EXPECT_EQ(digests.size(), 5u);
}

TEST(RunAblation, EmptyGridGivesEmptyTable) {
  Fixture f = mock_corpus(1);
  EXPECT_TRUE(run_ablation(f.videos, *f.gateway, std::vector<AblationConfig>{}).empty());
}

TEST(RunAblation, LabelGuards) {
  CaptionManifest unlabeled = testing::manifest_of("u", {{{Modality::kSpeech, "s"}}});
  EXPECT_THROW(labeled_corpus(std::vector<CaptionManifest>{unlabeled}), Error);
  try {
    labeled_corpus(std::vector<CaptionManifest>{unlabeled});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "no-labels");
  }
  Fixture f = mock_corpus(1);
  f.videos[0].labels.pop_back();
  try {
    run_ablation(f.videos, *f.gateway, prompting_grid(PromptConfig{}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "label-mismatch");
  }
}

}  // namespace
}  // namespace lela
