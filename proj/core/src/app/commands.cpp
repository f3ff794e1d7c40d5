#include "lela/app/commands.hpp"

#include <charconv>
#include <fstream>

#include "json_util.hpp"
#include "lela/error.hpp"
#include "lela/http_backend.hpp"
#include "lela/mock_backend.hpp"
#include "lela/pipeline.hpp"
#include "lela/profile_io.hpp"
#include "lela/report_io.hpp"

namespace lela::app {

namespace fs = std::filesystem;
using detail::Json;
using detail::OrderedJson;

int exit_code_for(const std::string& kind) {
  if (kind == "io") return 2;
  if (kind == "config") return 3;
  if (kind == "no-labels") return 4;
  return 1;
}

std::string error_json(const std::string& kind, const std::string& message) {
  OrderedJson j;
  j["error"] = {{"kind", kind}, {"message", message}};
  return j.dump();
}

GatewayBundle make_gateway(const GatewaySettings& settings) {
  std::shared_ptr<LlmBackend> backend;
  GatewayBundle bundle;
  if (settings.mock_rules) {
    backend = std::make_shared<MockBackend>(parse_mock_rules(read_text_file(*settings.mock_rules)));
    bundle.backend = "mock";
    bundle.model_id = settings.model_id.empty() ? "mock" : settings.model_id;
  } else {
    auto config = http_config_from_env();
    if (!config) {
      throw ConfigError("LELA_LLM_ENDPOINT is not set; set it or pass --mock RULES for an offline run");
    }
    if (!settings.model_id.empty()) config->model_id = settings.model_id;
    if (config->model_id.empty()) throw ConfigError("no model id; set LELA_LLM_MODEL or pass --model");
    bundle.model_id = config->model_id;
    bundle.backend = "http";
    backend = std::make_shared<HttpBackend>(std::move(*config));
  }
  std::shared_ptr<ReplyCache> cache;
  if (settings.cache_dir) {
    cache = std::make_shared<DirectoryReplyCache>(*settings.cache_dir);
  } else {
    cache = std::make_shared<MemoryReplyCache>();
  }
  GatewayOptions options;
  options.limits = settings.limits;
  bundle.gateway = std::make_shared<LlmGateway>(std::move(backend), std::move(cache), std::move(options));
  return bundle;
}

namespace {

OrderedJson segments_json(const std::vector<Segment>& segments) {
  OrderedJson out = OrderedJson::array();
  for (const Segment& s : segments) out.push_back({{"start_frame", s.start_frame}, {"end_frame", s.end_frame}});
  return out;
}

OrderedJson config_snapshot(const AnalyzeRequest& request, const GatewayBundle& bundle,
                            const AnalysisOptions& options) {
  OrderedJson modalities = OrderedJson::array();
  for (Modality m : options.scoring.composable) modalities.push_back(to_string(m));
  const PromptConfig& p = options.scoring.prompt;
  OrderedJson j;
  j["manifest"] = request.manifest_path.string();
  j["tau"] = options.tau;
  j["grid_fps"] = request.grid_fps;
  j["policy"] = {{"kind", to_string(options.policy.kind)}, {"fraction_threshold", options.policy.fraction_threshold}};
  j["modalities"] = std::move(modalities);
  j["backend"] = bundle.backend;
  j["mock_rules"] = request.gateway.mock_rules ? OrderedJson(request.gateway.mock_rules->string()) : OrderedJson(nullptr);
  j["prompt"] = {{"enable_contextualization", p.enable_contextualization},
                 {"enable_rationale", p.enable_rationale},
                 {"model_id", p.model_id},
                 {"summary_model_id", p.summarizer_model()},
                 {"temperature", p.temperature},
                 {"max_rationale_tokens", p.max_rationale_tokens},
                 {"max_score_tokens", p.max_score_tokens},
                 {"max_summary_tokens", p.max_summary_tokens},
                 {"template_version", p.template_version}};
  j["workers"] = options.workers;
  return j;
}

struct LoadedProfile {
  HateProfile profile;
  std::optional<std::vector<int>> manifest_labels;
  std::optional<fs::path> run_dir;
};

std::vector<LoadedProfile> load_profiles(const fs::path& store_dir, const std::vector<std::string>& run_ids,
                                         const std::vector<fs::path>& profile_paths) {
  if (run_ids.empty() && profile_paths.empty()) throw ConfigError("pass at least one --run or --profile");
  std::vector<LoadedProfile> out;
  if (!run_ids.empty()) {
    if (!fs::is_directory(store_dir)) throw IoError("run store " + store_dir.string() + " does not exist");
    RunStore store(store_dir);
    for (const std::string& id : run_ids) {
      if (!store.has_run(id)) throw IoError("no run '" + id + "' in " + store_dir.string());
      out.push_back({store.load_run(id).profile, dense_labels(store.load_manifest(id)), store.run_dir(id)});
    }
  }
  for (const fs::path& path : profile_paths) {
    out.push_back({parse_profile_jsonl(read_text_file(path)), std::nullopt, std::nullopt});
  }
  return out;
}

std::vector<int> label_array(const Json& value, const std::string& path) {
  if (!value.is_array()) throw SchemaError(path, "expected an array of labels");
  std::vector<int> labels;
  for (std::size_t i = 0; i < value.size(); ++i) {
    const Json& item = value[i];
    const std::string item_path = detail::index_path(path, i);
    const Json* label = &item;
    if (item.is_object()) {
      const long long index = detail::require_integer(item, "frame_index", item_path);
      if (index != static_cast<long long>(i)) {
        throw SchemaError(item_path + ".frame_index", "expected frame_index " + std::to_string(i));
      }
      label = &detail::require(item, "label", item_path);
    }
    if (!label->is_number_integer() || (label->get<int>() != 0 && label->get<int>() != 1)) {
      throw SchemaError(item_path, "label must be 0 or 1");
    }
    labels.push_back(label->get<int>());
  }
  return labels;
}

class LabelLookup {
 public:
  explicit LabelLookup(const LabelSource& source) {
    if (!source.labels_path) return;
    document_ = detail::parse_json(read_text_file(*source.labels_path));
    present_ = true;
  }

  std::vector<int> labels_for(const LoadedProfile& loaded) const {
    const HateProfile& profile = loaded.profile;
    std::vector<int> labels;
    if (present_) {
      if (document_.is_array()) {
        labels = label_array(document_, "$");
      } else if (document_.is_object() && document_.contains("videos")) {
        const Json& videos = document_["videos"];
        if (!videos.is_object() || !videos.contains(profile.video_id)) {
          throw Error("no-labels", "label file has no entry for video '" + profile.video_id + "'");
        }
        labels = label_array(videos[profile.video_id], "$.videos." + profile.video_id);
      } else if (document_.is_object() && document_.contains("labels")) {
        labels = label_array(document_["labels"], "$.labels");
      } else {
        throw SchemaError("$", "label file must be a label array or an object with \"videos\" or \"labels\"");
      }
    } else if (loaded.manifest_labels) {
      labels = *loaded.manifest_labels;
    } else {
      throw Error("no-labels", "video '" + profile.video_id +
                                   "' has no ground truth; pass --labels or analyze a manifest with ground_truth");
    }
    if (labels.size() != profile.frames.size()) {
      throw Error("label-mismatch", "video '" + profile.video_id + "' has " + std::to_string(profile.frames.size()) +
                                        " frames but " + std::to_string(labels.size()) + " labels");
    }
    return labels;
  }

 private:
  Json document_;
  bool present_ = false;
};

LabeledScores pool(const std::vector<LoadedProfile>& profiles, const LabelSource& source) {
  LabelLookup lookup(source);
  LabeledScores data;
  for (const LoadedProfile& p : profiles) {
    const std::vector<int> labels = lookup.labels_for(p);
    const std::vector<double> finals = p.profile.finals();
    data.scores.insert(data.scores.end(), finals.begin(), finals.end());
    data.labels.insert(data.labels.end(), labels.begin(), labels.end());
  }
  return data;
}

}  // namespace

AnalyzeOutcome cmd_analyze(const AnalyzeRequest& request) {
  const CaptionManifest manifest = load_caption_document(read_text_file(request.manifest_path), request.grid_fps);

  GatewaySettings settings = request.gateway;
  if (request.use_cache && !settings.cache_dir) settings.cache_dir = request.store_dir / "cache";
  if (!request.use_cache) settings.cache_dir.reset();
  const GatewayBundle bundle = make_gateway(settings);

  AnalysisOptions options;
  options.scoring.prompt = request.prompt;
  options.scoring.prompt.model_id = bundle.model_id;
  options.scoring.composable = request.modalities;
  options.tau = request.tau;
  options.policy = request.policy;
  options.workers = request.workers;

  const std::uint64_t http_before = HttpBackend::total_requests();
  const VideoAnalysis analysis = analyze_video(manifest, *bundle.gateway, options);

  RunStore store(request.store_dir);
  AnalyzeOutcome outcome;
  outcome.run = store.create_run(manifest, analysis, config_snapshot(request, bundle, options).dump());
  outcome.stats = bundle.gateway->stats();
  outcome.http_requests = HttpBackend::total_requests() - http_before;

  OrderedJson summary;
  summary["run_id"] = outcome.run.run_id;
  summary["video_id"] = outcome.run.video_id;
  summary["run_dir"] = store.run_dir(outcome.run.run_id).string();
  summary["n_frames"] = analysis.profile.frames.size();
  summary["tau"] = analysis.profile.tau;
  summary["segments"] = segments_json(analysis.profile.segments);
  summary["video_verdict"] = analysis.profile.video_verdict;
  summary["backend"] = bundle.backend;
  summary["backend_calls"] = outcome.stats.backend_calls;
  summary["cache_hits"] = outcome.stats.cache_hits;
  summary["retries"] = outcome.stats.retries;
  summary["http_requests"] = outcome.http_requests;
  outcome.summary_json = summary.dump();
  return outcome;
}

EvaluateOutcome cmd_evaluate(const EvaluateRequest& request) {
  const std::vector<LoadedProfile> profiles = load_profiles(request.store_dir, request.run_ids, request.profile_paths);
  const LabeledScores data = pool(profiles, request.labels);
  const double tau = request.tau.value_or(profiles.front().profile.tau);

  EvaluateOutcome outcome;
  try {
    outcome.report = evaluate(data, tau);
  } catch (const DegenerateError& e) {
    throw DegenerateError(std::string(e.what()) +
                          "; ranking metrics need both hateful and non-hateful frames, so pool more runs "
                          "or supply labels covering both classes");
  }
  outcome.report_json = eval_report_to_json(outcome.report);

  if (profiles.size() == 1 && profiles.front().run_dir) {
    const fs::path path = *profiles.front().run_dir / "eval.json";
    write_text_file(path, outcome.report_json);
    outcome.written.push_back(path);
  }
  if (request.report_out) {
    write_text_file(*request.report_out, outcome.report_json);
    outcome.written.push_back(*request.report_out);
  }
  if (request.timeline_svg) {
    if (profiles.size() != 1) throw ConfigError("--svg needs exactly one profile");
    const std::vector<int> labels(data.labels.begin(), data.labels.end());
    write_text_file(*request.timeline_svg, svg_score_timeline(profiles.front().profile, labels));
    outcome.written.push_back(*request.timeline_svg);
  }
  return outcome;
}

SweepOutcome cmd_sweep(const SweepRequest& request) {
  const std::vector<LoadedProfile> profiles = load_profiles(request.store_dir, request.run_ids, request.profile_paths);
  const LabeledScores data = pool(profiles, request.labels);
  SweepOutcome outcome;
  outcome.rows = threshold_sweep(data.scores, data.labels, request.taus);
  outcome.csv = sweep_to_csv(outcome.rows);
  if (profiles.size() == 1 && profiles.front().run_dir) {
    const fs::path path = *profiles.front().run_dir / "sweep.csv";
    write_text_file(path, outcome.csv);
    outcome.written.push_back(path);
  }
  if (request.csv_out) {
    write_text_file(*request.csv_out, outcome.csv);
    outcome.written.push_back(*request.csv_out);
  }
  if (request.svg_out) {
    write_text_file(*request.svg_out, svg_sweep_curve(outcome.rows));
    outcome.written.push_back(*request.svg_out);
  }
  return outcome;
}

AblateOutcome cmd_ablate(const AblateRequest& request) {
  if (!fs::is_directory(request.corpus_dir)) throw IoError("corpus directory " + request.corpus_dir.string() + " does not exist");
  const std::vector<CaptionManifest> manifests = load_fixture_manifests(request.corpus_dir);
  if (manifests.empty()) throw IoError("no manifests under " + (request.corpus_dir / "manifests").string());
  const std::vector<LabeledVideo> corpus = labeled_corpus(manifests);

  GatewaySettings settings = request.gateway;
  if (!settings.mock_rules && fs::exists(request.corpus_dir / "mock_rules.json")) {
    settings.mock_rules = request.corpus_dir / "mock_rules.json";
  }
  const GatewayBundle bundle = make_gateway(settings);
  PromptConfig base = request.prompt;
  base.model_id = bundle.model_id;
  const std::vector<AblationConfig> grid = ablation_configs(request.grid, base);

  AblateOutcome outcome;
  outcome.rows = run_ablation(corpus, *bundle.gateway, grid, request.tau, request.workers);
  outcome.json = ablation_to_json(outcome.rows);
  if (request.json_out) write_text_file(*request.json_out, outcome.json);
  if (request.csv_out) write_text_file(*request.csv_out, ablation_to_csv(outcome.rows));
  return outcome;
}

SyntheticCorpus cmd_gen_fixtures(const GenFixturesRequest& request) {
  SyntheticCorpus corpus = generate(request.spec);
  write_fixtures(corpus, request.out_dir);
  return corpus;
}

std::pair<std::string, int> parse_addr(const std::string& addr) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ConfigError("address must be HOST:PORT, got '" + addr + "'");
  const std::string host = addr.substr(0, colon);
  const std::string port_text = addr.substr(colon + 1);
  int port = -1;
  const auto [end, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
  if (ec != std::errc{} || end != port_text.data() + port_text.size() || port < 0 || port > 65535) {
    throw ConfigError("invalid port in '" + addr + "'");
  }
  return {host, port};
}

std::vector<double> parse_tau_list(const std::string& text) {
  std::vector<double> taus;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (item.empty() || ec != std::errc{} || end != item.data() + item.size() || !(value >= 0.0 && value <= 1.0)) {
      throw DomainError("invalid tau '" + item + "' (expected numbers in [0,1] separated by commas)");
    }
    taus.push_back(value);
    start = comma + 1;
  }
  return taus;
}

std::vector<Modality> parse_modality_list(const std::string& text) {
  std::vector<Modality> out;
  if (text.empty() || text == "none") return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string item = text.substr(start, comma - start);
    const auto m = modality_from_string(item);
    if (!m || !is_composable(*m)) throw DomainError("'" + item + "' is not a composable modality (image, ocr, music, video)");
    out.push_back(*m);
    start = comma + 1;
  }
  return out;
}

}  // namespace lela::app
