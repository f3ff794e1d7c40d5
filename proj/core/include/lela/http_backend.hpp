#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>

#include "lela/llm_backend.hpp"

namespace lela {

struct HttpBackendConfig {
  std::string endpoint;  // base URL, e.g. https://api.example.com/v1
  std::string api_key;
  std::string model_id;
  std::chrono::seconds timeout{60};
};

/// Reads LELA_LLM_ENDPOINT, LELA_LLM_API_KEY and LELA_LLM_MODEL. Returns
/// nullopt when no endpoint is set.
std::optional<HttpBackendConfig> http_config_from_env();

/// Chat-completions client: POST <endpoint>/chat/completions with
/// {model, messages, temperature, max_tokens} and bearer auth; the reply is
/// choices[0].message.content.
class HttpBackend final : public LlmBackend {
 public:
  explicit HttpBackend(HttpBackendConfig config);

  BackendResponse send(const LlmRequest& request) override;
  std::string name() const override { return "http"; }

  /// Process-wide count of HTTP requests issued by any HttpBackend.
  static std::uint64_t total_requests();

 private:
  HttpBackendConfig config_;
  std::string origin_;
  std::string path_;
};

}  // namespace lela
