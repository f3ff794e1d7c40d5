#pragma once

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>

#include "lela/llm_backend.hpp"
#include "lela/llm_request.hpp"
#include "lela/rate_limiter.hpp"
#include "lela/reply_cache.hpp"

namespace lela {

struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{1000};
  double factor = 2.0;

  std::chrono::milliseconds delay_before_retry(int retry) const;  // retry is 1-based
};

/// 429, 5xx and transport failures (status 0).
bool is_retryable_status(int status);

struct GatewayOptions {
  RetryPolicy retry;
  RateLimits limits;
  std::function<void(std::chrono::milliseconds)> sleeper;  // defaults to this_thread::sleep_for
  RateLimiter::Clock clock;
};

struct GatewayStats {
  long backend_calls = 0;
  long cache_hits = 0;
  long retries = 0;
};

/// Shareable chat-completion client: cache lookup, rate-limited backend
/// call, and retry with exponential backoff on transient failures.
class LlmGateway {
 public:
  LlmGateway(std::shared_ptr<LlmBackend> backend, std::shared_ptr<ReplyCache> cache,
             GatewayOptions options = {});

  LlmReply complete(const LlmRequest& request);

  GatewayStats stats() const;
  const LlmBackend* backend() const { return backend_.get(); }

 private:
  std::shared_ptr<LlmBackend> backend_;
  std::shared_ptr<ReplyCache> cache_;
  GatewayOptions options_;
  RateLimiter limiter_;
  std::atomic<long> backend_calls_{0};
  std::atomic<long> cache_hits_{0};
  std::atomic<long> retries_{0};
};

}  // namespace lela
