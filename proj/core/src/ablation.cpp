#include "lela/ablation.hpp"

#include "lela/digest.hpp"
#include "lela/error.hpp"
#include "lela/pipeline.hpp"
#include "lela/profile_io.hpp"

namespace lela {

std::vector<LabeledVideo> labeled_corpus(std::span<const CaptionManifest> manifests) {
  std::vector<LabeledVideo> corpus;
  corpus.reserve(manifests.size());
  for (const CaptionManifest& m : manifests) {
    auto labels = dense_labels(m);
    if (!labels) throw Error("no-labels", "video '" + m.video_id + "' has no per-frame ground truth");
    corpus.push_back({m, std::move(*labels)});
  }
  return corpus;
}

AblationGrid ablation_grid_from_string(std::string_view name) {
  if (name == "prompting") return AblationGrid::kPrompting;
  if (name == "modality") return AblationGrid::kModality;
  throw DomainError("unknown ablation grid '" + std::string(name) + "' (expected prompting or modality)");
}

std::vector<AblationConfig> prompting_grid(const PromptConfig& base) {
  std::vector<AblationConfig> grid;
  const struct {
    const char* label;
    bool context;
    bool rationale;
  } rows[] = {{"final-only", false, false},
              {"+contextualization", true, false},
              {"+rationale", false, true},
              {"full", true, true}};
  for (const auto& row : rows) {
    AblationConfig config{row.label, {}};
    config.scoring.prompt = base;
    config.scoring.prompt.enable_contextualization = row.context;
    config.scoring.prompt.enable_rationale = row.rationale;
    grid.push_back(std::move(config));
  }
  return grid;
}

std::vector<AblationConfig> modality_ladder(const PromptConfig& base) {
  std::vector<AblationConfig> ladder;
  AblationConfig rung{"speech", {}};
  rung.scoring.prompt = base;
  rung.scoring.composable.clear();
  ladder.push_back(rung);
  for (Modality m : kComposableModalities) {
    rung.label = "+" + std::string(to_string(m));
    rung.scoring.composable.push_back(m);
    ladder.push_back(rung);
  }
  return ladder;
}

std::vector<AblationConfig> ablation_configs(AblationGrid grid, const PromptConfig& base) {
  return grid == AblationGrid::kPrompting ? prompting_grid(base) : modality_ladder(base);
}

std::vector<AblationRow> run_ablation(std::span<const LabeledVideo> corpus, LlmGateway& gateway,
                                      std::span<const AblationConfig> grid, double tau, int workers) {
  std::vector<AblationRow> table;
  for (const AblationConfig& config : grid) {
    AnalysisOptions options;
    options.scoring = config.scoring;
    options.tau = tau;
    options.workers = workers;

    LabeledScores pooled;
    std::string transcript;
    std::size_t exchanges = 0;
    for (const LabeledVideo& video : corpus) {
      if (static_cast<int>(video.labels.size()) != video.manifest.frame_count()) {
        throw Error("label-mismatch", "video '" + video.manifest.video_id + "' has " +
                                          std::to_string(video.manifest.frame_count()) + " frames but " +
                                          std::to_string(video.labels.size()) + " labels");
      }
      const VideoAnalysis analysis = analyze_video(video.manifest, gateway, options);
      const std::vector<double> finals = analysis.profile.finals();
      pooled.scores.insert(pooled.scores.end(), finals.begin(), finals.end());
      pooled.labels.insert(pooled.labels.end(), video.labels.begin(), video.labels.end());
      transcript += write_transcript_jsonl(analysis.exchanges);
      exchanges += analysis.exchanges.size();
    }
    table.push_back({config, evaluate(pooled, tau), sha256_hex(transcript), exchanges});
  }
  return table;
}

}  // namespace lela
