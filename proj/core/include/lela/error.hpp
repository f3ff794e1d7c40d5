#pragma once

#include <stdexcept>
#include <string>

namespace lela {

/// Base of every error raised by the engine. `kind()` is a stable,
/// machine-readable tag used by the CLI's error objects.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

 private:
  std::string kind_;
};

/// Malformed document (not parseable as JSON at all).
class SyntaxError : public Error {
 public:
  explicit SyntaxError(const std::string& message) : Error("syntax", message) {}
};

/// Missing or ill-typed field. `path()` is a jq-style path such as ".frames[2].captions".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& message)
      : Error("schema", path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Well-typed document violating a structural invariant.
class InvariantError : public Error {
 public:
  explicit InvariantError(const std::string& message) : Error("invariant", message) {}
};

/// Precondition violation on an operation's arguments.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& message) : Error("domain", message) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error("io", message) {}
};

/// Chat completion failed after the retry budget, or with a non-retryable status.
/// `last_status` is the HTTP status of the final attempt, 0 for transport failures.
class GatewayError : public Error {
 public:
  GatewayError(int attempts, int last_status, const std::string& message);

  int attempts() const noexcept { return attempts_; }
  int last_status() const noexcept { return last_status_; }

 private:
  int attempts_;
  int last_status_;
};

class EmptyReplyError : public Error {
 public:
  explicit EmptyReplyError(const std::string& message) : Error("empty-reply", message) {}
};

class ScoreParseError : public Error {
 public:
  explicit ScoreParseError(const std::string& message) : Error("score-parse", message) {}
};

/// Frame carries no caption that any scoring channel can use.
class NoEvidenceError : public Error {
 public:
  NoEvidenceError(int frame_index, const std::string& message)
      : Error("no-evidence", message), frame_index_(frame_index) {}

  int frame_index() const noexcept { return frame_index_; }

 private:
  int frame_index_;
};

/// Metric undefined for the given labels (e.g. ROC-AUC with one class).
class DegenerateError : public Error {
 public:
  explicit DegenerateError(const std::string& message) : Error("degenerate", message) {}
};

}  // namespace lela
