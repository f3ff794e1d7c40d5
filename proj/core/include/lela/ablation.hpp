#pragma once

#include <span>
#include <string>
#include <vector>

#include "lela/caption_model.hpp"
#include "lela/evaluation.hpp"
#include "lela/llm_gateway.hpp"
#include "lela/localization.hpp"

namespace lela {

struct LabeledVideo {
  CaptionManifest manifest;
  std::vector<int> labels;  // one per frame
};

/// Pairs each manifest with its dense ground truth. Throws Error("no-labels")
/// when a manifest lacks full frame coverage.
std::vector<LabeledVideo> labeled_corpus(std::span<const CaptionManifest> manifests);

struct AblationConfig {
  std::string label;
  ScoringOptions scoring;
};

enum class AblationGrid { kPrompting, kModality };
AblationGrid ablation_grid_from_string(std::string_view name);

/// The four contextualization x rationale rows, single-shot scoring first and
/// the full protocol last.
std::vector<AblationConfig> prompting_grid(const PromptConfig& base);

/// Five rungs: speech only (fallback route), then +image, +ocr, +music, +video.
std::vector<AblationConfig> modality_ladder(const PromptConfig& base);

std::vector<AblationConfig> ablation_configs(AblationGrid grid, const PromptConfig& base);

struct AblationRow {
  AblationConfig config;
  EvalReport report;
  std::string transcript_sha256;  // digest of the row's concatenated transcript JSONL
  std::size_t exchanges = 0;
};

/// Runs every configuration end-to-end over the corpus and evaluates the
/// pooled frames at `tau`.
std::vector<AblationRow> run_ablation(std::span<const LabeledVideo> corpus, LlmGateway& gateway,
                                      std::span<const AblationConfig> grid, double tau = kDefaultTau,
                                      int workers = 1);

}  // namespace lela
