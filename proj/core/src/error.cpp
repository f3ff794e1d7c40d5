#include "lela/error.hpp"

namespace lela {

GatewayError::GatewayError(int attempts, int last_status, const std::string& message)
    : Error("gateway", message + " (attempts=" + std::to_string(attempts) +
                           ", last_status=" + std::to_string(last_status) + ")"),
      attempts_(attempts),
      last_status_(last_status) {}

}  // namespace lela
