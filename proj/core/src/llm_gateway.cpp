#include "lela/llm_gateway.hpp"

#include <cmath>
#include <thread>

#include "json_util.hpp"
#include "lela/digest.hpp"
#include "lela/error.hpp"

namespace lela {

using detail::Json;

std::string_view to_string(Role role) { return role == Role::kSystem ? "system" : "user"; }

const ChatMessage* LlmRequest::last_user_message() const {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == Role::kUser) return &*it;
  }
  return nullptr;
}

void validate_request(const LlmRequest& request) {
  if (!request.last_user_message()) throw DomainError("LLM request needs at least one user message");
  std::size_t total = 0;
  for (const ChatMessage& m : request.messages) total += m.content.size();
  if (total > kMaxRequestContentBytes) {
    throw DomainError("LLM request content is " + std::to_string(total) + " bytes, limit " +
                      std::to_string(kMaxRequestContentBytes));
  }
}

namespace {

Json messages_json(const LlmRequest& request) {
  Json messages = Json::array();
  for (const ChatMessage& m : request.messages) {
    messages.push_back(Json::array({std::string(to_string(m.role)), m.content}));
  }
  return messages;
}

}  // namespace

std::string canonical_request(const LlmRequest& request) {
  const Json canonical = Json::array({"lela-request/1", request.model_id, request.temperature,
                                      request.max_reply_tokens, request.template_version, request.attempt,
                                      messages_json(request)});
  return canonical.dump();
}

std::string cache_key(const LlmRequest& request) { return sha256_hex(canonical_request(request)); }

std::string messages_digest(const LlmRequest& request) { return sha256_hex(messages_json(request).dump()); }

std::chrono::milliseconds RetryPolicy::delay_before_retry(int retry) const {
  const double scale = std::pow(factor, retry - 1);
  return std::chrono::milliseconds(static_cast<long long>(static_cast<double>(base_delay.count()) * scale));
}

bool is_retryable_status(int status) { return status == 0 || status == 429 || (status >= 500 && status <= 599); }

LlmGateway::LlmGateway(std::shared_ptr<LlmBackend> backend, std::shared_ptr<ReplyCache> cache,
                       GatewayOptions options)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      options_(std::move(options)),
      limiter_(options_.limits, options_.clock) {
  if (!options_.sleeper) options_.sleeper = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

LlmReply LlmGateway::complete(const LlmRequest& request) {
  validate_request(request);
  if (!backend_) throw ConfigError("no LLM backend configured (set LELA_LLM_ENDPOINT or use a mock rule set)");

  const std::string key = cache_key(request);
  if (cache_) {
    if (auto hit = cache_->get(key)) {
      ++cache_hits_;
      return LlmReply{std::move(*hit), true, 0};
    }
  }

  const auto started = std::chrono::steady_clock::now();
  int attempts = 0;
  for (int retry = 0;; ++retry) {
    BackendResponse response;
    {
      RateLimiter::Permit permit = limiter_.acquire();
      ++backend_calls_;
      ++attempts;
      response = backend_->send(request);
    }
    if (response.status == 200) {
      if (cache_) cache_->put(key, response.text);
      const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - started);
      return LlmReply{std::move(response.text), false, elapsed.count()};
    }
    if (!is_retryable_status(response.status) || retry >= options_.retry.max_retries) {
      throw GatewayError(attempts, response.status,
                         "chat completion failed via " + backend_->name() +
                             (response.error.empty() ? std::string() : ": " + response.error));
    }
    ++retries_;
    options_.sleeper(options_.retry.delay_before_retry(retry + 1));
  }
}

GatewayStats LlmGateway::stats() const {
  return GatewayStats{backend_calls_.load(), cache_hits_.load(), retries_.load()};
}

}  // namespace lela
