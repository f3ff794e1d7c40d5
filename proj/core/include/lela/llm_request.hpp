#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lela {

enum class Role { kSystem, kUser };

std::string_view to_string(Role role);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;

  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

inline constexpr std::size_t kMaxRequestContentBytes = 64 * 1024;

struct LlmRequest {
  std::string model_id;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_reply_tokens = 512;
  std::string template_version = "v1";
  // Payload substituted into the prompt template. Not sent on the wire; the
  // mock backend exposes it as {input}.
  std::string input;
  // Re-ask index; part of the cache key so each re-ask is cached separately.
  int attempt = 0;

  const ChatMessage* last_user_message() const;

  friend bool operator==(const LlmRequest&, const LlmRequest&) = default;
};

struct LlmReply {
  std::string text;
  bool cached = false;
  std::int64_t latency_ms = 0;
};

/// Throws DomainError unless the request has a user message and at most
/// kMaxRequestContentBytes of message content.
void validate_request(const LlmRequest& request);

/// Canonical byte serialization hashed by cache_key.
std::string canonical_request(const LlmRequest& request);

/// SHA-256 (hex) of the canonical serialization.
std::string cache_key(const LlmRequest& request);

/// SHA-256 (hex) over the message list only (roles and contents).
std::string messages_digest(const LlmRequest& request);

}  // namespace lela
