#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace lela {

/// Content-addressed store of completion replies keyed by cache_key().
class ReplyCache {
 public:
  virtual ~ReplyCache() = default;
  virtual std::optional<std::string> get(const std::string& key) = 0;
  virtual void put(const std::string& key, const std::string& reply) = 0;
};

class MemoryReplyCache final : public ReplyCache {
 public:
  std::optional<std::string> get(const std::string& key) override;
  void put(const std::string& key, const std::string& reply) override;
  std::size_t size() const;

 private:
  mutable std::mutex mutex_;
  std::map<std::string, std::string> entries_;
};

/// On-disk layout: <root>/<first 2 hex>/<key>.reply holding the raw reply
/// bytes, plus <root>/index.jsonl with one {key, bytes} line per insertion.
/// Reply files are written to a temporary name and renamed into place.
class DirectoryReplyCache final : public ReplyCache {
 public:
  explicit DirectoryReplyCache(std::filesystem::path root);

  std::optional<std::string> get(const std::string& key) override;
  void put(const std::string& key, const std::string& reply) override;

  std::filesystem::path path_for(const std::string& key) const;
  const std::filesystem::path& root() const { return root_; }

 private:
  std::filesystem::path root_;
  std::mutex index_mutex_;
};

}  // namespace lela
