#include "lela/http_backend.hpp"

#include <atomic>
#include <cstdlib>
#include <regex>

#include <httplib.h>

#include "json_util.hpp"
#include "lela/error.hpp"

namespace lela {

using detail::Json;

namespace {

std::atomic<std::uint64_t> g_http_requests{0};

std::string env_or_empty(const char* name) {
  const char* value = std::getenv(name);
  return value ? std::string(value) : std::string();
}

}  // namespace

std::optional<HttpBackendConfig> http_config_from_env() {
  HttpBackendConfig config;
  config.endpoint = env_or_empty("LELA_LLM_ENDPOINT");
  if (config.endpoint.empty()) return std::nullopt;
  config.api_key = env_or_empty("LELA_LLM_API_KEY");
  config.model_id = env_or_empty("LELA_LLM_MODEL");
  return config;
}

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
  static const std::regex kUrl(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch match;
  if (!std::regex_match(config_.endpoint, match, kUrl)) {
    throw ConfigError("LLM endpoint must be an http(s) URL, got '" + config_.endpoint + "'");
  }
  origin_ = match[1].str();
  path_ = match[2].matched ? match[2].str() : std::string();
  while (!path_.empty() && path_.back() == '/') path_.pop_back();
  static constexpr std::string_view kSuffix = "/chat/completions";
  if (path_.size() < kSuffix.size() || path_.compare(path_.size() - kSuffix.size(), kSuffix.size(), kSuffix) != 0) {
    path_ += kSuffix;
  }
}

std::uint64_t HttpBackend::total_requests() { return g_http_requests.load(); }

BackendResponse HttpBackend::send(const LlmRequest& request) {
  Json messages = Json::array();
  for (const ChatMessage& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  const Json body = {{"model", request.model_id},
                     {"messages", std::move(messages)},
                     {"temperature", request.temperature},
                     {"max_tokens", request.max_reply_tokens}};

  httplib::Client client(origin_);
  const auto seconds = static_cast<time_t>(config_.timeout.count());
  client.set_connection_timeout(seconds, 0);
  client.set_read_timeout(seconds, 0);
  client.set_write_timeout(seconds, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);

  ++g_http_requests;
  auto res = client.Post(path_, headers, body.dump(), "application/json");
  if (!res) return BackendResponse{0, {}, httplib::to_string(res.error())};
  if (res->status != 200) return BackendResponse{res->status, {}, res->body.substr(0, 512)};

  try {
    const Json reply = Json::parse(res->body);
    const Json& content = reply.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return BackendResponse{200, {}, {}};
    return BackendResponse{200, content.get<std::string>(), {}};
  } catch (const Json::exception& e) {
    // A 200 with an unreadable body is treated like an upstream gateway fault.
    return BackendResponse{502, {}, std::string("malformed completion body: ") + e.what()};
  }
}

}  // namespace lela
