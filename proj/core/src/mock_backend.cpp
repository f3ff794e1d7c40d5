#include "lela/mock_backend.hpp"

#include <algorithm>
#include <tuple>

#include "json_util.hpp"
#include "lela/error.hpp"

namespace lela {

using detail::Json;
using detail::OrderedJson;

namespace {

bool rule_matches(const MockRule& rule, std::string_view text) {
  return std::all_of(rule.match.begin(), rule.match.end(),
                     [&](const std::string& needle) { return text.find(needle) != std::string_view::npos; });
}

std::string substitute_input(const std::string& tmpl, std::string_view input) {
  static constexpr std::string_view kPlaceholder = "{input}";
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    const std::size_t hit = tmpl.find(kPlaceholder, pos);
    if (hit == std::string::npos) break;
    out.append(tmpl, pos, hit - pos);
    out.append(input);
    pos = hit + kPlaceholder.size();
  }
  out.append(tmpl, pos, std::string::npos);
  return out;
}

}  // namespace

MockRuleSet::MockRuleSet(std::vector<MockRule> rules) : rules_(std::move(rules)) {
  std::sort(rules_.begin(), rules_.end(), [](const MockRule& a, const MockRule& b) {
    return std::tie(b.priority, a.name) < std::tie(a.priority, b.name);
  });
  const bool has_default =
      std::any_of(rules_.begin(), rules_.end(), [](const MockRule& r) { return r.match.empty(); });
  if (!has_default) throw ConfigError("mock rule set needs a catch-all rule (empty match)");
}

const MockRule& MockRuleSet::select(const LlmRequest& request) const {
  const ChatMessage* user = request.last_user_message();
  const std::string_view text = user ? std::string_view(user->content) : std::string_view();
  for (const MockRule& rule : rules_) {
    if (rule_matches(rule, text)) return rule;
  }
  // Unreachable: the constructor guarantees a catch-all rule.
  throw ConfigError("no mock rule matched");
}

std::string MockRuleSet::reply(const LlmRequest& request) const {
  const MockRule& rule = select(request);
  std::string_view input = request.input;
  if (input.empty()) {
    const ChatMessage* user = request.last_user_message();
    if (user) input = user->content;
  }
  return substitute_input(rule.reply_template, input);
}

MockRuleSet parse_mock_rules(std::string_view document) {
  const Json root = detail::parse_json(document);
  if (!root.is_array()) throw SchemaError("", "mock rule file must be a JSON list");
  std::vector<MockRule> rules;
  for (std::size_t i = 0; i < root.size(); ++i) {
    const std::string path = detail::index_path("", i);
    const Json& r = root[i];
    MockRule rule;
    rule.name = detail::require_string(r, "name", path);
    const Json& match = detail::require(r, "match", path);
    if (match.is_string()) {
      if (!match.get<std::string>().empty()) rule.match.push_back(match.get<std::string>());
    } else if (match.is_array()) {
      for (std::size_t k = 0; k < match.size(); ++k) {
        if (!match[k].is_string()) throw SchemaError(detail::index_path(path + ".match", k), "expected a string");
        if (!match[k].get<std::string>().empty()) rule.match.push_back(match[k].get<std::string>());
      }
    } else {
      throw SchemaError(path + ".match", "expected a string or a list of strings");
    }
    rule.reply_template = detail::require_string(r, "reply_template", path);
    if (r.contains("priority")) rule.priority = static_cast<int>(detail::require_integer(r, "priority", path));
    rules.push_back(std::move(rule));
  }
  return MockRuleSet(std::move(rules));
}

std::string serialize_mock_rules(const MockRuleSet& rules) {
  OrderedJson root = OrderedJson::array();
  for (const MockRule& rule : rules.rules()) {
    OrderedJson r;
    r["name"] = rule.name;
    if (rule.match.size() == 1) {
      r["match"] = rule.match.front();
    } else if (rule.match.empty()) {
      r["match"] = "";
    } else {
      r["match"] = rule.match;
    }
    r["reply_template"] = rule.reply_template;
    r["priority"] = rule.priority;
    root.push_back(std::move(r));
  }
  return root.dump(2) + "\n";
}

BackendResponse MockBackend::send(const LlmRequest& request) {
  ++calls_;
  return BackendResponse{200, rules_.reply(request), {}};
}

}  // namespace lela
