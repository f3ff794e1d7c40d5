#include "lela/app/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <charconv>

#include "json_util.hpp"
#include "lela/app/run_store.hpp"
#include "lela/error.hpp"
#include "lela/profile_io.hpp"

namespace lela::app {

namespace {

using detail::Json;
using detail::OrderedJson;

constexpr const char* kJson = "application/json";

OrderedJson envelope() {
  OrderedJson j;
  j["schema_version"] = std::string(kSchemaVersion);
  return j;
}

void send(httplib::Response& res, int status, const OrderedJson& body) {
  res.status = status;
  res.set_content(body.dump() + "\n", kJson);
}

void send_error(httplib::Response& res, int status, std::string_view kind, std::string_view message) {
  OrderedJson body = envelope();
  body["error"] = {{"kind", kind}, {"message", message}};
  send(res, status, body);
}

int status_for(const Error& e) {
  const std::string& kind = e.kind();
  if (kind == "not-found") return 404;
  if (kind == "conflict") return 409;
  if (kind == "syntax") return 400;
  if (kind == "validation" || kind == "schema" || kind == "domain") return 422;
  return 500;
}

}  // namespace

std::map<std::string, std::string> load_token_file(const std::filesystem::path& path) {
  const Json document = detail::parse_json(read_text_file(path));
  if (!document.is_object()) throw SchemaError("$", "token file must be a JSON object of token -> reviewer_id");
  std::map<std::string, std::string> tokens;
  for (const auto& [token, reviewer] : document.items()) {
    if (!reviewer.is_string()) throw SchemaError("$." + token, "reviewer_id must be a string");
    tokens.emplace(token, reviewer.get<std::string>());
  }
  return tokens;
}

struct Service::Impl {
  explicit Impl(ServiceOptions opts) : options(std::move(opts)), store(options.store_dir) {
    if (options.token_file) tokens = load_token_file(*options.token_file);
    routes();
  }

  // Returns the reviewer id, or nullopt after writing a 401.
  std::optional<std::string> authorize(const httplib::Request& req, httplib::Response& res) const {
    if (!options.token_file) return std::string("anonymous");
    const std::string header = req.get_header_value("Authorization");
    constexpr std::string_view prefix = "Bearer ";
    if (header.starts_with(prefix)) {
      auto it = tokens.find(header.substr(prefix.size()));
      if (it != tokens.end()) return it->second;
    }
    send_error(res, 401, "unauthorized", "missing or unknown bearer token");
    return std::nullopt;
  }

  template <typename Fn>
  httplib::Server::Handler guarded(Fn fn) {
    return [this, fn](const httplib::Request& req, httplib::Response& res) {
      if (!authorize(req, res)) return;
      try {
        fn(req, res);
      } catch (const Error& e) {
        send_error(res, status_for(e), e.kind(), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    };
  }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", options.allow_origin},
                                {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      OrderedJson body = envelope();
      body["status"] = "ok";
      send(res, 200, body);
    });

    server.Get("/runs", guarded([this](const httplib::Request&, httplib::Response& res) {
      OrderedJson runs = OrderedJson::array();
      for (const RunSummary& r : store.list_runs()) {
        runs.push_back({{"run_id", r.run_id},
                        {"video_id", r.video_id},
                        {"created_at", r.created_at},
                        {"n_frames", r.n_frames},
                        {"tau", r.tau},
                        {"video_verdict", r.video_verdict}});
      }
      OrderedJson body = envelope();
      body["runs"] = std::move(runs);
      send(res, 200, body);
    }));

    server.Get(R"(/runs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const RunRecord run = store.load_run(req.matches[1]);
      OrderedJson body = envelope();
      body["run_id"] = run.run_id;
      body["video_id"] = run.video_id;
      body["created_at"] = run.created_at;
      body["config"] = OrderedJson::parse(run.config_json);
      body["profile"] = OrderedJson::parse(profile_to_json(run.profile));
      const auto labels = dense_labels(store.load_manifest(run.run_id));
      body["ground_truth"] = labels ? OrderedJson(*labels) : OrderedJson(nullptr);
      send(res, 200, body);
    }));

    server.Get(R"(/runs/([^/]+)/frames/(\d+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      frame(req.matches[1], req.matches[2], res);
    }));

    server.Post(R"(/runs/([^/]+)/threshold)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      threshold(req.matches[1], req.body, res);
    }));

    server.Post(R"(/runs/([^/]+)/verdicts)", [this](const httplib::Request& req, httplib::Response& res) {
      const auto reviewer = authorize(req, res);
      if (!reviewer) return;
      try {
        post_verdict(req.matches[1], req.body, *reviewer, res);
      } catch (const Error& e) {
        send_error(res, status_for(e), e.kind(), e.what());
      } catch (const std::exception& e) {
        send_error(res, 500, "internal", e.what());
      }
    });

    server.Get(R"(/runs/([^/]+)/verdicts)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::vector<VerdictRecord> all = store.verdicts(req.matches[1]);
      OrderedJson list = OrderedJson::array();
      for (const VerdictRecord& v : all) {
        const bool superseded = std::any_of(all.begin(), all.end(), [&](const VerdictRecord& other) {
          return other.supersedes && *other.supersedes == v.verdict_id;
        });
        OrderedJson item = verdict_body(v);
        item["active"] = !superseded;
        list.push_back(std::move(item));
      }
      OrderedJson body = envelope();
      body["run_id"] = std::string(req.matches[1]);
      body["verdicts"] = std::move(list);
      send(res, 200, body);
    }));

    server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        send_error(res, res.status, res.status == 404 ? "not-found" : "http", httplib::status_message(res.status));
      }
    });
  }

  void frame(const std::string& run_id, const std::string& index_text, httplib::Response& res) {
    const RunRecord run = store.load_run(run_id);
    int j = -1;
    std::from_chars(index_text.data(), index_text.data() + index_text.size(), j);
    if (j < 0 || j >= static_cast<int>(run.profile.frames.size())) {
      throw Error("not-found", "frame " + index_text + " outside [0, " +
                                   std::to_string(run.profile.frames.size()) + ")");
    }
    const FrameScore& f = run.profile.frames[static_cast<std::size_t>(j)];
    const CaptionManifest manifest = store.load_manifest(run_id);

    OrderedJson scores = OrderedJson::object();
    std::optional<Modality> dominant;
    for (const auto& [modality, score] : f.per_modality) {
      scores[std::string(to_string(modality))] = score;
      if (!dominant || score > f.per_modality.at(*dominant)) dominant = modality;
    }
    OrderedJson captions = OrderedJson::object();
    for (const auto& [modality, text] : manifest.frames[static_cast<std::size_t>(j)].captions) {
      captions[std::string(to_string(modality))] = text;
    }
    OrderedJson traces = OrderedJson::array();
    for (const StageTrace& t : store.load_traces(run_id)) {
      if (t.frame_index != j) continue;
      traces.push_back({{"modality", to_string(t.modality)},
                        {"rationale", t.rationale ? OrderedJson(*t.rationale) : OrderedJson(nullptr)},
                        {"raw_score_reply", t.raw_score_reply},
                        {"score", t.score},
                        {"speech_fallback", t.speech_fallback}});
    }
    OrderedJson refs = OrderedJson::array();
    const ExchangeLog transcript = store.load_transcript(run_id);
    for (std::size_t line = 0; line < transcript.size(); ++line) {
      const ExchangeRecord& e = transcript[line];
      if (e.frame_index != j) continue;
      refs.push_back({{"line", line},
                      {"modality", to_string(e.modality)},
                      {"stage", e.stage},
                      {"prompt_sha256", e.prompt_sha256}});
    }

    OrderedJson body = envelope();
    body["run_id"] = run_id;
    body["frame_index"] = f.frame_index;
    body["timestamp_s"] = f.timestamp_s;
    body["scores"] = std::move(scores);
    body["final"] = f.final_score;
    body["flag"] = f.flag;
    body["dominant_modality"] = dominant ? OrderedJson(to_string(*dominant)) : OrderedJson(nullptr);
    body["captions"] = std::move(captions);
    body["traces"] = std::move(traces);
    body["transcript"] = {{"path", "transcript.jsonl"}, {"refs", std::move(refs)}};
    const auto labels = dense_labels(manifest);
    body["ground_truth"] = labels ? OrderedJson((*labels)[static_cast<std::size_t>(j)]) : OrderedJson(nullptr);
    send(res, 200, body);
  }

  void threshold(const std::string& run_id, const std::string& text, httplib::Response& res) {
    const Json request = detail::parse_json(text);
    if (!request.is_object() || !request.contains("tau") || !request["tau"].is_number()) {
      throw Error("validation", "body must be {\"tau\": number}");
    }
    const double tau = request["tau"].get<double>();
    if (!(tau >= 0.0 && tau <= 1.0)) throw Error("validation", "tau must lie in [0, 1]");
    if (!store.has_run(run_id)) throw Error("not-found", "no run '" + run_id + "'");
    const DerivedView view = store.derive_view(run_id, tau);

    OrderedJson frames = OrderedJson::array();
    for (const FrameScore& f : view.profile.frames) {
      frames.push_back({{"frame_index", f.frame_index}, {"final", f.final_score}, {"flag", f.flag}});
    }
    OrderedJson segments = OrderedJson::array();
    for (const Segment& s : view.profile.segments) {
      segments.push_back({{"start_frame", s.start_frame}, {"end_frame", s.end_frame}});
    }
    OrderedJson body = envelope();
    body["run_id"] = run_id;
    body["tau"] = view.tau;
    body["original_tau"] = view.original_tau;
    body["flags"] = view.profile.flags();
    body["segments"] = std::move(segments);
    body["video_verdict"] = view.profile.video_verdict;
    body["frames"] = std::move(frames);
    send(res, 200, body);
  }

  static OrderedJson verdict_body(const VerdictRecord& v) {
    OrderedJson j;
    j["verdict_id"] = v.verdict_id;
    j["run_id"] = v.run_id;
    j["frame_range"] = {{"start", v.frame_range.start}, {"end", v.frame_range.end}};
    j["reviewer_id"] = v.reviewer_id;
    j["decision"] = to_string(v.decision);
    j["note"] = v.note;
    j["decided_at"] = v.decided_at;
    j["supersedes"] = v.supersedes ? OrderedJson(*v.supersedes) : OrderedJson(nullptr);
    return j;
  }

  void post_verdict(const std::string& run_id, const std::string& text, const std::string& reviewer,
                    httplib::Response& res) {
    const Json request = detail::parse_json(text);
    if (!store.has_run(run_id)) throw Error("not-found", "no run '" + run_id + "'");
    if (!request.is_object()) throw Error("validation", "body must be a JSON object");
    VerdictRecord draft;
    const Json* range = request.contains("frame_range") ? &request["frame_range"] : nullptr;
    if (!range || !range->is_object() || !range->contains("start") || !range->contains("end") ||
        !(*range)["start"].is_number_integer() || !(*range)["end"].is_number_integer()) {
      throw Error("validation", "frame_range must be {\"start\": int, \"end\": int}");
    }
    draft.frame_range = {(*range)["start"].get<int>(), (*range)["end"].get<int>()};
    const auto decision = request.contains("decision") && request["decision"].is_string()
                              ? decision_from_string(request["decision"].get<std::string>())
                              : std::nullopt;
    if (!decision) throw Error("validation", "decision must be confirm_hateful, overturn or unsure");
    draft.decision = *decision;
    if (request.contains("note")) {
      if (!request["note"].is_string()) throw Error("validation", "note must be a string");
      draft.note = request["note"].get<std::string>();
    }
    if (request.contains("supersedes") && !request["supersedes"].is_null()) {
      if (!request["supersedes"].is_string()) throw Error("validation", "supersedes must be a verdict id");
      draft.supersedes = request["supersedes"].get<std::string>();
    }
    draft.reviewer_id = reviewer;
    OrderedJson body = envelope();
    body["verdict"] = verdict_body(store.append_verdict(run_id, std::move(draft)));
    send(res, 201, body);
  }

  ServiceOptions options;
  RunStore store;
  std::map<std::string, std::string> tokens;
  httplib::Server server;
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}
Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void Service::serve() { impl_->server.listen_after_bind(); }
void Service::stop() { impl_->server.stop(); }
void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace lela::app
