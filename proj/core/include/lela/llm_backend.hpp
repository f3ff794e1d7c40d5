#pragma once

#include <string>

#include "lela/llm_request.hpp"

namespace lela {

/// Outcome of a single wire attempt. `status` is the HTTP status, or 0 when
/// the transport failed (timeout, connection refused).
struct BackendResponse {
  int status = 200;
  std::string text;
  std::string error;
};

class LlmBackend {
 public:
  virtual ~LlmBackend() = default;
  virtual BackendResponse send(const LlmRequest& request) = 0;
  virtual std::string name() const = 0;
};

}  // namespace lela
