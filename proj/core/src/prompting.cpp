#include "lela/prompting.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "lela/error.hpp"
#include "lela/score_parser.hpp"
#include "prompt_assets.hpp"

namespace lela {

std::string_view prompt_template(std::string_view version, std::string_view name) {
  for (const detail::PromptAsset& asset : detail::prompt_assets()) {
    if (asset.version == version && asset.name == name) return asset.text;
  }
  throw ConfigError("no prompt template '" + std::string(name) + "' in version '" + std::string(version) + "'");
}

std::vector<std::string> template_versions() {
  std::set<std::string> versions;
  for (const detail::PromptAsset& asset : detail::prompt_assets()) versions.emplace(asset.version);
  return {versions.begin(), versions.end()};
}

std::string fill_template(std::string_view tmpl,
                          const std::vector<std::pair<std::string_view, std::string_view>>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const std::size_t close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string_view key = tmpl.substr(i + 1, close - i - 1);
        auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

void validate_prompt_config(const PromptConfig& config) {
  if (!(config.temperature >= 0.0 && config.temperature <= 2.0)) {
    throw DomainError("temperature must lie in [0, 2]");
  }
  if (config.max_rationale_tokens <= 0 || config.max_score_tokens <= 0 || config.max_summary_tokens <= 0) {
    throw DomainError("reply token budgets must be positive");
  }
  if (config.model_id.empty()) throw DomainError("model_id must be non-empty");
}

std::string render_context_prompt(std::string_view version) {
  return std::string(prompt_template(version, "context"));
}

std::string render_rationale_prompt(Modality modality, const SummaryCaption& summary, std::string_view version) {
  if (!is_composable(modality)) throw DomainError("rationale prompt: speech has no standalone channel");
  return fill_template(prompt_template(version, "rationale"),
                       {{"modality", modality_prompt_name(modality)}, {"description", summary.text}});
}

std::string render_score_prompt(std::string_view rationale_or_summary, std::string_view version) {
  if (rationale_or_summary.empty()) throw DomainError("score prompt: input text is empty");
  return fill_template(prompt_template(version, "score"), {{"rationale", rationale_or_summary}});
}

std::string render_summary_prompt(std::string_view composed_text, std::string_view version) {
  if (composed_text.empty()) throw DomainError("summary prompt: composed text is empty");
  return fill_template(prompt_template(version, "summary"), {{"composed", composed_text}});
}

namespace {

constexpr int kRationaleAttempts = 3;

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

LlmRequest base_request(const PromptConfig& config, int max_tokens) {
  LlmRequest request;
  request.model_id = config.model_id;
  request.temperature = config.temperature;
  request.max_reply_tokens = max_tokens;
  request.template_version = config.template_version;
  if (config.enable_contextualization) {
    request.messages.push_back({Role::kSystem, render_context_prompt(config.template_version)});
  }
  return request;
}

}  // namespace

StageTrace run_multistage(LlmGateway& gateway, const SummaryCaption& summary, const PromptConfig& config,
                          ExchangeLog* log) {
  validate_prompt_config(config);
  if (summary.text.empty()) throw DomainError("run_multistage: summary text is empty");

  StageTrace trace;
  trace.frame_index = summary.frame_index;
  trace.modality = summary.modality;
  trace.speech_fallback = summary.speech_fallback;

  auto record = [&](const LlmRequest& request, std::string stage, const std::string& reply) {
    if (log) {
      log->push_back({summary.frame_index, summary.modality, std::move(stage), messages_digest(request), reply,
                      summary.speech_fallback});
    }
  };

  if (config.enable_rationale) {
    LlmRequest request = base_request(config, config.max_rationale_tokens);
    request.input = summary.text;
    request.messages.push_back({Role::kUser, render_rationale_prompt(summary.modality, summary, config.template_version)});
    for (int attempt = 0; attempt < kRationaleAttempts && !trace.rationale; ++attempt) {
      request.attempt = attempt;
      LlmReply reply = gateway.complete(request);
      record(request, "rationale", reply.text);
      if (!is_blank(reply.text)) trace.rationale = std::move(reply.text);
    }
    if (!trace.rationale) {
      throw EmptyReplyError("rationale stage returned a blank reply " + std::to_string(kRationaleAttempts) +
                            " times for frame " + std::to_string(summary.frame_index));
    }
  }

  const std::string& score_input = trace.rationale ? *trace.rationale : summary.text;
  const std::string score_prompt = render_score_prompt(score_input, config.template_version);
  LlmRequest request = base_request(config, config.max_score_tokens);
  request.input = score_input;
  request.messages.push_back({Role::kUser, score_prompt});

  for (int attempt = 0; attempt <= kMaxScoreReasks; ++attempt) {
    if (attempt > 0) {
      request.attempt = attempt;
      request.messages.back().content =
          score_prompt + "\n" + std::string(prompt_template(config.template_version, "score_reask"));
    }
    LlmReply reply = gateway.complete(request);
    record(request, attempt == 0 ? std::string("score") : "score-reask-" + std::to_string(attempt), reply.text);
    trace.raw_score_reply = std::move(reply.text);
    if (auto score = try_parse_score(trace.raw_score_reply)) {
      trace.score = *score;
      return trace;
    }
  }
  throw ScoreParseError("no parseable score after " + std::to_string(kMaxScoreReasks) + " re-asks for frame " +
                        std::to_string(summary.frame_index) + " (" + std::string(to_string(summary.modality)) +
                        "); last reply: \"" + trace.raw_score_reply.substr(0, 120) + "\"");
}

}  // namespace lela
