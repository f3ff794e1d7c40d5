#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

namespace lela::app {

struct ServiceOptions {
  std::filesystem::path store_dir = "runs";
  /// JSON object {"<token>": "<reviewer_id>"}. Without a file every request
  /// is accepted and verdicts are attributed to "anonymous".
  std::optional<std::filesystem::path> token_file;
  std::string allow_origin = "*";
};

/// Reads a token file. Throws IoError / SyntaxError / SchemaError.
std::map<std::string, std::string> load_token_file(const std::filesystem::path& path);

/// JSON HTTP API over a RunStore:
///   GET  /healthz
///   GET  /runs
///   GET  /runs/{id}
///   GET  /runs/{id}/frames/{j}
///   POST /runs/{id}/threshold   {"tau": number}
///   POST /runs/{id}/verdicts    {"frame_range": {start, end}, "decision", "note", "supersedes"?}
///   GET  /runs/{id}/verdicts
/// Every body carries "schema_version". Errors are {"schema_version", "error": {kind, message}}.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds without serving. Port 0 picks a free port; returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void serve();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lela::app
