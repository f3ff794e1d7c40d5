#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lela/ablation.hpp"
#include "lela/app/run_store.hpp"
#include "lela/evaluation.hpp"
#include "lela/llm_gateway.hpp"
#include "lela/synth_corpus.hpp"

namespace lela::app {

/// Process exit code for an error kind: io 2, config 3, no-labels 4, anything else 1.
int exit_code_for(const std::string& kind);

/// {"error": {"kind", "message"}} on one line.
std::string error_json(const std::string& kind, const std::string& message);

struct GatewaySettings {
  /// Mock rule file. Without one the HTTP backend is configured from LELA_LLM_*.
  std::optional<std::filesystem::path> mock_rules;
  /// Directory cache root; nullopt means an in-memory cache.
  std::optional<std::filesystem::path> cache_dir;
  std::string model_id;  // overrides LELA_LLM_MODEL; "mock" for the mock backend
  RateLimits limits;
};

struct GatewayBundle {
  std::shared_ptr<LlmGateway> gateway;
  std::string backend;  // mock | http
  std::string model_id;
};

/// Throws ConfigError when neither a mock rule file nor an endpoint is available.
GatewayBundle make_gateway(const GatewaySettings& settings);

struct AnalyzeRequest {
  std::filesystem::path manifest_path;
  std::filesystem::path store_dir = "runs";
  GatewaySettings gateway;  // cache_dir defaults to <store_dir>/cache
  bool use_cache = true;
  double tau = kDefaultTau;
  double grid_fps = kDefaultGridFps;  // used when the document holds raw events
  PromptConfig prompt;
  std::vector<Modality> modalities{kComposableModalities.begin(), kComposableModalities.end()};
  AggregationPolicy policy;
  int workers = 1;
};

struct AnalyzeOutcome {
  RunRecord run;
  GatewayStats stats;
  std::uint64_t http_requests = 0;
  std::string summary_json;
};

AnalyzeOutcome cmd_analyze(const AnalyzeRequest& request);

/// Frame labels per video, from manifests or a label file.
struct LabelSource {
  /// Accepted shapes: [0,1,...]; [{"frame_index", "label"}...];
  /// {"videos": {"<video_id>": [0,1,...]}}; {"labels": [...]}.
  std::optional<std::filesystem::path> labels_path;
};

struct EvaluateRequest {
  std::filesystem::path store_dir = "runs";
  std::vector<std::string> run_ids;
  std::vector<std::filesystem::path> profile_paths;  // standalone profile JSONL files
  LabelSource labels;
  std::optional<double> tau;  // default: tau of the first profile
  std::optional<std::filesystem::path> report_out;
  std::optional<std::filesystem::path> timeline_svg;  // single profile only
};

struct EvaluateOutcome {
  EvalReport report;
  std::string report_json;
  std::vector<std::filesystem::path> written;
};

EvaluateOutcome cmd_evaluate(const EvaluateRequest& request);

struct SweepRequest {
  std::filesystem::path store_dir = "runs";
  std::vector<std::string> run_ids;
  std::vector<std::filesystem::path> profile_paths;
  LabelSource labels;
  std::vector<double> taus = default_sweep_taus();
  std::optional<std::filesystem::path> csv_out;
  std::optional<std::filesystem::path> svg_out;
};

struct SweepOutcome {
  std::vector<SweepRow> rows;
  std::string csv;
  std::vector<std::filesystem::path> written;
};

SweepOutcome cmd_sweep(const SweepRequest& request);

struct AblateRequest {
  std::filesystem::path corpus_dir;
  AblationGrid grid = AblationGrid::kPrompting;
  GatewaySettings gateway;  // mock_rules defaults to <corpus>/mock_rules.json when present
  PromptConfig prompt;
  double tau = kDefaultTau;
  int workers = 1;
  std::optional<std::filesystem::path> json_out;
  std::optional<std::filesystem::path> csv_out;
};

struct AblateOutcome {
  std::vector<AblationRow> rows;
  std::string json;
};

AblateOutcome cmd_ablate(const AblateRequest& request);

struct GenFixturesRequest {
  CorpusSpec spec;
  std::filesystem::path out_dir;
};

SyntheticCorpus cmd_gen_fixtures(const GenFixturesRequest& request);

/// Parses "host:port" (port 0 allowed). Throws ConfigError.
std::pair<std::string, int> parse_addr(const std::string& addr);

/// Parses "0.3,0.4,0.5". Throws DomainError.
std::vector<double> parse_tau_list(const std::string& text);

/// Parses "image,ocr". Throws DomainError for speech or unknown names.
std::vector<Modality> parse_modality_list(const std::string& text);

}  // namespace lela::app
