#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "lela/app/run_store.hpp"
#include "lela/error.hpp"
#include "lela/synth_corpus.hpp"
#include "test_support.hpp"

namespace lela::app {
namespace {

struct StoredRun {
  CaptionManifest manifest;
  VideoAnalysis analysis;
};

StoredRun synthetic_run(int frames = 10) {
  CorpusSpec spec;
  spec.frames_per_video = frames;
  SyntheticCorpus corpus = generate(spec);
  auto g = testing::mock_gateway(corpus.mock_rules);
  VideoAnalysis analysis = analyze_video(corpus.manifests[0], *g.gateway, {});
  return {corpus.manifests[0], std::move(analysis)};
}

TEST(RunStore, PersistThenLoadReproducesProfile) {
  testing::TempDir dir;
  RunStore store(dir.path());
  const StoredRun run = synthetic_run();
  const RunRecord created = store.create_run(run.manifest, run.analysis, R"({"tau":0.5})");
  EXPECT_TRUE(store.has_run(created.run_id));
  const RunRecord loaded = store.load_run(created.run_id);
  EXPECT_EQ(loaded.profile, run.analysis.profile);
  EXPECT_EQ(loaded.video_id, "synth-000");
  EXPECT_EQ(loaded.created_at, created.created_at);
  EXPECT_EQ(loaded.config_json, R"({"tau":0.5})");
  EXPECT_EQ(store.load_manifest(created.run_id), run.manifest);
  EXPECT_EQ(store.load_traces(created.run_id), run.analysis.traces);
  EXPECT_EQ(store.load_transcript(created.run_id), run.analysis.exchanges);
  for (const char* file : {"run.json", "profile.jsonl", "transcript.jsonl", "traces.jsonl", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(store.run_dir(created.run_id) / file)) << file;
  }
  EXPECT_EQ(loaded.transcripts_path, store.run_dir(created.run_id) / "transcript.jsonl");
}

TEST(RunStore, IdsAreUniqueAndTimeOrdered) {
  testing::TempDir dir;
  RunStore store(dir.path());
  const StoredRun run = synthetic_run();
  std::vector<std::string> ids;
  for (int i = 0; i < 5; ++i) ids.push_back(store.create_run(run.manifest, run.analysis, "{}").run_id);
  EXPECT_TRUE(std::is_sorted(ids.begin(), ids.end()));
  EXPECT_EQ(std::set<std::string>(ids.begin(), ids.end()).size(), ids.size());
  const auto listed = store.list_runs();
  ASSERT_EQ(listed.size(), 5u);
  EXPECT_EQ(listed[0].run_id, ids[0]);
  EXPECT_EQ(listed[0].n_frames, 10);
  EXPECT_EQ(listed[0].created_at.size(), std::string("2026-01-02T03:04:05.678Z").size());
}

TEST(RunStore, UnknownAndHostileIds) {
  testing::TempDir dir;
  RunStore store(dir.path());
  EXPECT_FALSE(store.has_run("../etc"));
  EXPECT_FALSE(store.has_run(""));
  try {
    store.load_run("nope");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), "not-found");
  }
}

TEST(RunStore, VerdictsAppendAndSupersede) {
  testing::TempDir dir;
  RunStore store(dir.path());
  const StoredRun run = synthetic_run();
  const std::string id = store.create_run(run.manifest, run.analysis, "{}").run_id;

  VerdictRecord draft;
  draft.frame_range = {1, 2};
  draft.reviewer_id = "alice";
  draft.decision = Decision::kConfirmHateful;
  draft.note = "slur in overlay";
  const VerdictRecord first = store.append_verdict(id, draft);
  EXPECT_EQ(first.verdict_id, "1");
  EXPECT_EQ(first.run_id, id);
  EXPECT_FALSE(first.decided_at.empty());

  VerdictRecord overturn = draft;
  overturn.decision = Decision::kOverturn;
  overturn.supersedes = "1";
  EXPECT_EQ(store.append_verdict(id, overturn).verdict_id, "2");
  auto expect_kind = [&](VerdictRecord v, const char* kind) {
    try {
      store.append_verdict(id, v);
      FAIL() << kind;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind);
    }
  };
  expect_kind(overturn, "conflict");
  VerdictRecord dangling = draft;
  dangling.supersedes = "42";
  expect_kind(dangling, "validation");
  VerdictRecord out_of_range = draft;
  out_of_range.frame_range = {8, 10};
  expect_kind(out_of_range, "validation");
  out_of_range.frame_range = {3, 2};
  expect_kind(out_of_range, "validation");

  const auto all = store.verdicts(id);
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0].note, "slur in overlay");
  EXPECT_EQ(all[0].decision, Decision::kConfirmHateful);
  EXPECT_EQ(all[1].supersedes, "1");
}

TEST(RunStore, ConcurrentVerdictsSerialize) {
  testing::TempDir dir;
  RunStore store(dir.path());
  const StoredRun run = synthetic_run();
  const std::string id = store.create_run(run.manifest, run.analysis, "{}").run_id;
  {
    std::vector<std::jthread> writers;
    for (int t = 0; t < 16; ++t) {
      writers.emplace_back([&, t] {
        for (int k = 0; k < 5; ++k) {
          VerdictRecord v;
          v.frame_range = {t % 10, t % 10};
          v.reviewer_id = "r" + std::to_string(t);
          v.note = std::string(2000, static_cast<char>('a' + t));
          store.append_verdict(id, v);
        }
      });
    }
  }
  const auto all = store.verdicts(id);
  ASSERT_EQ(all.size(), 80u);
  std::set<std::string> ids;
  for (const auto& v : all) {
    ids.insert(v.verdict_id);
    EXPECT_EQ(v.note.size(), 2000u);
    EXPECT_EQ(v.note.find_first_not_of(v.note[0]), std::string::npos);
  }
  EXPECT_EQ(ids.size(), 80u);
}

TEST(RunStore, DerivedViewsKeepOriginalTau) {
  testing::TempDir dir;
  RunStore store(dir.path());
  const StoredRun run = synthetic_run();
  const std::string id = store.create_run(run.manifest, run.analysis, "{}").run_id;
  const std::string before = testing::slurp(store.run_dir(id) / "profile.jsonl");
  const DerivedView view = store.derive_view(id, 0.95);
  EXPECT_EQ(view.original_tau, 0.5);
  EXPECT_TRUE(view.profile.segments.empty());
  EXPECT_EQ(testing::slurp(store.run_dir(id) / "profile.jsonl"), before);
  EXPECT_EQ(store.load_run(id).profile.tau, 0.5);
  EXPECT_TRUE(std::filesystem::exists(store.run_dir(id) / "views.jsonl"));
}

}  // namespace
}  // namespace lela::app
