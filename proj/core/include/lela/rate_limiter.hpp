#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <mutex>

namespace lela {

struct RateLimits {
  int max_in_flight = 4;
  int rate_per_minute = 0;  // 0 disables the per-minute window
};

/// Admission control shared by all gateway callers: at most `max_in_flight`
/// concurrent calls and at most `rate_per_minute` admissions in any sliding
/// 60 s window. Clock and sleep are injectable for tests.
class RateLimiter {
 public:
  using TimePoint = std::chrono::steady_clock::time_point;
  using Clock = std::function<TimePoint()>;
  using Sleeper = std::function<void(std::chrono::nanoseconds)>;

  class Permit {
   public:
    Permit() = default;
    explicit Permit(RateLimiter* owner) : owner_(owner) {}
    Permit(Permit&& other) noexcept : owner_(std::exchange(other.owner_, nullptr)) {}
    Permit& operator=(Permit&& other) noexcept;
    Permit(const Permit&) = delete;
    Permit& operator=(const Permit&) = delete;
    ~Permit() { release(); }

    void release();

   private:
    RateLimiter* owner_ = nullptr;
  };

  explicit RateLimiter(RateLimits limits, Clock clock = {}, Sleeper sleeper = {});

  Permit acquire();

  int in_flight() const;
  const RateLimits& limits() const { return limits_; }

 private:
  void release_one();
  void prune_locked(TimePoint now);

  RateLimits limits_;
  Clock clock_;
  Sleeper sleeper_;
  mutable std::mutex mutex_;
  std::condition_variable released_;
  int in_flight_ = 0;
  std::deque<TimePoint> admitted_;
};

}  // namespace lela
