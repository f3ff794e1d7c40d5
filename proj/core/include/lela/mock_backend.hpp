#pragma once

#include <atomic>
#include <string>
#include <string_view>
#include <vector>

#include "lela/llm_backend.hpp"

namespace lela {

/// Deterministic reply rule. Fires when every `match` string is a substring
/// of the last user message; an empty `match` list matches everything.
/// `reply_template` may contain {input}, replaced with the request's payload
/// (or the whole last user message when the request has no payload).
struct MockRule {
  std::string name;
  std::vector<std::string> match;
  std::string reply_template;
  int priority = 0;

  friend bool operator==(const MockRule&, const MockRule&) = default;
};

/// Rules evaluated by descending priority, then ascending name; the first
/// match fires. Construction requires at least one catch-all rule.
class MockRuleSet {
 public:
  MockRuleSet() = default;
  explicit MockRuleSet(std::vector<MockRule> rules);

  const MockRule& select(const LlmRequest& request) const;
  std::string reply(const LlmRequest& request) const;

  const std::vector<MockRule>& rules() const { return rules_; }

 private:
  std::vector<MockRule> rules_;
};

/// Mock rule file: JSON list of {name, match: string | [string], reply_template, priority}.
MockRuleSet parse_mock_rules(std::string_view document);
std::string serialize_mock_rules(const MockRuleSet& rules);

class MockBackend final : public LlmBackend {
 public:
  explicit MockBackend(MockRuleSet rules) : rules_(std::move(rules)) {}

  BackendResponse send(const LlmRequest& request) override;
  std::string name() const override { return "mock"; }

  long calls() const { return calls_.load(); }
  const MockRuleSet& rules() const { return rules_; }

 private:
  MockRuleSet rules_;
  std::atomic<long> calls_{0};
};

}  // namespace lela
