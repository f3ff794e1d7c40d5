// lela: frame-level hateful-content localization from modality captions.

#include <CLI11.hpp>

#include <chrono>
#include <csignal>
#include <thread>
#include <iostream>

#include "lela/app/commands.hpp"
#include "lela/app/service.hpp"
#include "lela/error.hpp"
#include "lela/report_io.hpp"

namespace {

using namespace lela;
namespace fs = std::filesystem;

volatile std::sig_atomic_t g_stop_requested = 0;

void on_signal(int) { g_stop_requested = 1; }

struct PromptFlags {
  bool no_context = false;
  bool no_rationale = false;
  std::string model;
  double temperature = 0.0;
  std::string summary_model;
};

void add_prompt_flags(CLI::App* cmd, PromptFlags& flags) {
  cmd->add_flag("--no-context", flags.no_context, "Skip the contextualization system message");
  cmd->add_flag("--no-rationale", flags.no_rationale, "Score the summary directly, without a rationale stage");
  cmd->add_option("--model", flags.model, "Model id (default: LELA_LLM_MODEL, or \"mock\" with --mock)");
  cmd->add_option("--summary-model", flags.summary_model, "Model id for summarization (default: --model)");
  cmd->add_option("--temperature", flags.temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
}

PromptConfig prompt_from(const PromptFlags& flags) {
  PromptConfig p;
  p.enable_contextualization = !flags.no_context;
  p.enable_rationale = !flags.no_rationale;
  p.temperature = flags.temperature;
  p.summary_model_id = flags.summary_model;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Frame-level hateful-content localization over modality captions"};
  cli.require_subcommand(1);

  // analyze
  app::AnalyzeRequest analyze;
  PromptFlags analyze_prompt;
  std::string mock_rules, cache_dir, modalities, policy = "max_frame";
  bool no_cache = false;
  int max_in_flight = 4, rate_per_minute = 0;
  auto* analyze_cmd = cli.add_subcommand("analyze", "Score every frame of a caption manifest and store a run");
  analyze_cmd->add_option("--manifest", analyze.manifest_path, "Caption manifest or event document")->required();
  analyze_cmd->add_option("--mock", mock_rules, "Mock rule file (offline backend)");
  analyze_cmd->add_option("--tau", analyze.tau, "Decision threshold")->check(CLI::Range(0.0, 1.0));
  analyze_cmd->add_option("--fps", analyze.grid_fps, "Grid rate for event documents")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", analyze.store_dir, "Run store directory")->capture_default_str();
  analyze_cmd->add_option("--cache", cache_dir, "Reply cache directory (default: <out>/cache)");
  analyze_cmd->add_flag("--no-cache", no_cache, "Disable the on-disk reply cache");
  analyze_cmd->add_option("--modalities", modalities, "Composable channels, e.g. image,ocr (\"none\": speech only)");
  analyze_cmd->add_option("--policy", policy, "Video verdict: max_frame or flagged_fraction")->capture_default_str();
  analyze_cmd->add_option("--fraction", analyze.policy.fraction_threshold, "flagged_fraction threshold");
  analyze_cmd->add_option("--workers", analyze.workers, "Frames scored concurrently")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--max-in-flight", max_in_flight, "Concurrent backend calls")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--rate-per-minute", rate_per_minute, "Backend call budget per minute (0: unlimited)");
  add_prompt_flags(analyze_cmd, analyze_prompt);

  // evaluate
  app::EvaluateRequest evaluate_req;
  std::string eval_labels, eval_report, eval_svg;
  double eval_tau = -1.0;
  bool eval_table = false;
  auto* evaluate_cmd = cli.add_subcommand("evaluate", "Frame-level metrics for one or more runs (pooled)");
  evaluate_cmd->add_option("--run", evaluate_req.run_ids, "Run id (repeatable)");
  evaluate_cmd->add_option("--profile", evaluate_req.profile_paths, "Profile JSONL path (repeatable)");
  evaluate_cmd->add_option("--store", evaluate_req.store_dir, "Run store directory")->capture_default_str();
  evaluate_cmd->add_option("--labels", eval_labels, "Label file (default: manifest ground truth)");
  evaluate_cmd->add_option("--tau", eval_tau, "Threshold (default: the run's tau)")->check(CLI::Range(0.0, 1.0));
  evaluate_cmd->add_option("--report", eval_report, "Also write the report JSON here");
  evaluate_cmd->add_option("--svg", eval_svg, "Write a score timeline SVG (single profile)");
  evaluate_cmd->add_flag("--table", eval_table, "Print a text table instead of JSON");

  // sweep
  app::SweepRequest sweep_req;
  std::string sweep_labels, sweep_taus, sweep_csv, sweep_svg;
  auto* sweep_cmd = cli.add_subcommand("sweep", "Accuracy over a grid of thresholds");
  sweep_cmd->add_option("--run", sweep_req.run_ids, "Run id (repeatable)");
  sweep_cmd->add_option("--profile", sweep_req.profile_paths, "Profile JSONL path (repeatable)");
  sweep_cmd->add_option("--store", sweep_req.store_dir, "Run store directory")->capture_default_str();
  sweep_cmd->add_option("--labels", sweep_labels, "Label file (default: manifest ground truth)");
  sweep_cmd->add_option("--taus", sweep_taus, "Comma-separated thresholds (default 0.3,0.4,0.5,0.6,0.7)");
  sweep_cmd->add_option("--csv", sweep_csv, "Also write the CSV here");
  sweep_cmd->add_option("--svg", sweep_svg, "Write an accuracy curve SVG");

  // ablate
  app::AblateRequest ablate_req;
  PromptFlags ablate_prompt;
  std::string grid = "prompting", ablate_mock, ablate_cache, ablate_json, ablate_csv;
  bool ablate_as_csv = false;
  auto* ablate_cmd = cli.add_subcommand("ablate", "Run a prompting or modality ablation over a labeled corpus");
  ablate_cmd->add_option("--corpus", ablate_req.corpus_dir, "Corpus directory (manifests/, mock_rules.json)")->required();
  ablate_cmd->add_option("--grid", grid, "prompting or modality")->capture_default_str();
  ablate_cmd->add_option("--mock", ablate_mock, "Mock rule file (default: <corpus>/mock_rules.json)");
  ablate_cmd->add_option("--cache", ablate_cache, "Reply cache directory (default: in memory)");
  ablate_cmd->add_option("--tau", ablate_req.tau, "Decision threshold")->check(CLI::Range(0.0, 1.0));
  ablate_cmd->add_option("--workers", ablate_req.workers, "Frames scored concurrently")->check(CLI::PositiveNumber);
  ablate_cmd->add_option("--json", ablate_json, "Also write the rows as JSON here");
  ablate_cmd->add_option("--csv-out", ablate_csv, "Also write the rows as CSV here");
  ablate_cmd->add_flag("--csv", ablate_as_csv, "Print CSV instead of JSON");
  ablate_cmd->add_option("--model", ablate_prompt.model, "Model id");

  // serve
  std::string addr = "127.0.0.1:8080", token_file, allow_origin = "*";
  fs::path serve_store = "runs";
  auto* serve_cmd = cli.add_subcommand("serve", "Serve the run store over HTTP");
  serve_cmd->add_option("--addr", addr, "HOST:PORT (port 0 picks a free port)")->capture_default_str();
  serve_cmd->add_option("--store", serve_store, "Run store directory")->capture_default_str();
  serve_cmd->add_option("--tokens", token_file, "Token file {\"<token>\": \"<reviewer_id>\"}");
  serve_cmd->add_option("--allow-origin", allow_origin, "CORS Access-Control-Allow-Origin")->capture_default_str();

  // gen-fixtures
  app::GenFixturesRequest gen;
  std::string marker = "ocr";
  auto* gen_cmd = cli.add_subcommand("gen-fixtures", "Write a deterministic synthetic corpus");
  gen_cmd->add_option("--seed", gen.spec.seed, "Generator seed")->capture_default_str();
  gen_cmd->add_option("--out", gen.out_dir, "Output directory")->required();
  gen_cmd->add_option("--videos", gen.spec.n_videos, "Number of videos")->capture_default_str();
  gen_cmd->add_option("--frames", gen.spec.frames_per_video, "Frames per video")->capture_default_str();
  gen_cmd->add_option("--span", gen.spec.hateful_span_fraction, "Planted span fraction")->capture_default_str();
  gen_cmd->add_option("--marker", marker, "Marker modality (image, ocr, music, video)")->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise_rate, "Probability a frame's mock score is a uniform draw")
      ->capture_default_str();
  gen_cmd->add_option("--hate-score", gen.spec.hate_score, "Mock score on marker frames")->capture_default_str();
  gen_cmd->add_option("--benign-score", gen.spec.benign_score, "Mock score elsewhere")->capture_default_str();

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return cli.exit(e);
  }

  try {
    if (*analyze_cmd) {
      if (!mock_rules.empty()) analyze.gateway.mock_rules = fs::path(mock_rules);
      if (!cache_dir.empty()) analyze.gateway.cache_dir = fs::path(cache_dir);
      analyze.use_cache = !no_cache;
      analyze.gateway.model_id = analyze_prompt.model;
      analyze.gateway.limits = {max_in_flight, rate_per_minute};
      if (analyze_cmd->count("--modalities") > 0) analyze.modalities = app::parse_modality_list(modalities);
      analyze.policy.kind = aggregation_kind_from_string(policy);
      analyze.prompt = prompt_from(analyze_prompt);
      std::cout << app::cmd_analyze(analyze).summary_json << "\n";
    } else if (*evaluate_cmd) {
      if (!eval_labels.empty()) evaluate_req.labels.labels_path = fs::path(eval_labels);
      if (eval_tau >= 0.0) evaluate_req.tau = eval_tau;
      if (!eval_report.empty()) evaluate_req.report_out = fs::path(eval_report);
      if (!eval_svg.empty()) evaluate_req.timeline_svg = fs::path(eval_svg);
      const auto outcome = app::cmd_evaluate(evaluate_req);
      std::cout << (eval_table ? render_eval_table(outcome.report) : outcome.report_json);
    } else if (*sweep_cmd) {
      if (!sweep_labels.empty()) sweep_req.labels.labels_path = fs::path(sweep_labels);
      if (!sweep_taus.empty()) sweep_req.taus = app::parse_tau_list(sweep_taus);
      if (!sweep_csv.empty()) sweep_req.csv_out = fs::path(sweep_csv);
      if (!sweep_svg.empty()) sweep_req.svg_out = fs::path(sweep_svg);
      std::cout << app::cmd_sweep(sweep_req).csv;
    } else if (*ablate_cmd) {
      ablate_req.grid = ablation_grid_from_string(grid);
      if (!ablate_mock.empty()) ablate_req.gateway.mock_rules = fs::path(ablate_mock);
      if (!ablate_cache.empty()) ablate_req.gateway.cache_dir = fs::path(ablate_cache);
      ablate_req.gateway.model_id = ablate_prompt.model;
      if (!ablate_json.empty()) ablate_req.json_out = fs::path(ablate_json);
      if (!ablate_csv.empty()) ablate_req.csv_out = fs::path(ablate_csv);
      const auto outcome = app::cmd_ablate(ablate_req);
      std::cout << (ablate_as_csv ? ablation_to_csv(outcome.rows) : outcome.json);
    } else if (*serve_cmd) {
      const auto [host, port] = app::parse_addr(addr);
      app::ServiceOptions options;
      options.store_dir = serve_store;
      if (!token_file.empty()) options.token_file = fs::path(token_file);
      options.allow_origin = allow_origin;
      app::Service service(options);
      const int bound = service.bind(host, port);
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::jthread watcher([&service](std::stop_token token) {
        while (!token.stop_requested() && !g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(50));
        service.stop();
      });
      std::cout << "{\"listening\":\"" << host << ":" << bound << "\"}" << std::endl;
      service.serve();
    } else if (*gen_cmd) {
      const auto m = modality_from_string(marker);
      if (!m) throw DomainError("unknown marker modality '" + marker + "'");
      gen.spec.marker_modality = *m;
      const SyntheticCorpus corpus = app::cmd_gen_fixtures(gen);
      std::cout << "{\"out\":\"" << gen.out_dir.string() << "\",\"videos\":" << corpus.manifests.size()
                << ",\"corrupted\":" << corpus.corrupted.size() << "}\n";
    }
  } catch (const Error& e) {
    std::cerr << app::error_json(e.kind(), e.what()) << "\n";
    return app::exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << app::error_json("internal", e.what()) << "\n";
    return 1;
  }
  return 0;
}
