#include "lela/reply_cache.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "json_util.hpp"
#include "lela/error.hpp"

namespace lela {

namespace fs = std::filesystem;

std::optional<std::string> MemoryReplyCache::get(const std::string& key) {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void MemoryReplyCache::put(const std::string& key, const std::string& reply) {
  std::lock_guard lock(mutex_);
  entries_.insert_or_assign(key, reply);
}

std::size_t MemoryReplyCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

DirectoryReplyCache::DirectoryReplyCache(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec) throw IoError("cannot create cache directory " + root_.string() + ": " + ec.message());
}

fs::path DirectoryReplyCache::path_for(const std::string& key) const {
  if (key.size() < 2) throw DomainError("cache key too short");
  return root_ / key.substr(0, 2) / (key + ".reply");
}

std::optional<std::string> DirectoryReplyCache::get(const std::string& key) {
  std::ifstream in(path_for(key), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void DirectoryReplyCache::put(const std::string& key, const std::string& reply) {
  static std::atomic<unsigned long> counter{0};
  const fs::path target = path_for(key);
  std::error_code ec;
  fs::create_directories(target.parent_path(), ec);
  if (ec) throw IoError("cannot create " + target.parent_path().string() + ": " + ec.message());

  const fs::path temp = target.parent_path() /
                        (key + ".tmp." + std::to_string(::getpid()) + "." + std::to_string(counter++));
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    out.write(reply.data(), static_cast<std::streamsize>(reply.size()));
    if (!out) throw IoError("cannot write " + temp.string());
  }
  fs::rename(temp, target, ec);
  if (ec) throw IoError("cannot rename " + temp.string() + ": " + ec.message());

  std::lock_guard lock(index_mutex_);
  std::ofstream index(root_ / "index.jsonl", std::ios::app);
  index << detail::Json{{"key", key}, {"bytes", reply.size()}}.dump() << "\n";
}

}  // namespace lela
