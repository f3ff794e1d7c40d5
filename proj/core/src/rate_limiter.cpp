#include "lela/rate_limiter.hpp"

#include <thread>

#include "lela/error.hpp"

namespace lela {

using namespace std::chrono_literals;

RateLimiter::Permit& RateLimiter::Permit::operator=(Permit&& other) noexcept {
  if (this != &other) {
    release();
    owner_ = std::exchange(other.owner_, nullptr);
  }
  return *this;
}

void RateLimiter::Permit::release() {
  if (owner_) std::exchange(owner_, nullptr)->release_one();
}

RateLimiter::RateLimiter(RateLimits limits, Clock clock, Sleeper sleeper)
    : limits_(limits), clock_(std::move(clock)), sleeper_(std::move(sleeper)) {
  if (limits_.max_in_flight < 1) throw DomainError("max_in_flight must be >= 1");
  if (limits_.rate_per_minute < 0) throw DomainError("rate_per_minute must be >= 0");
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
  if (!sleeper_) sleeper_ = [](std::chrono::nanoseconds d) { std::this_thread::sleep_for(d); };
}

void RateLimiter::prune_locked(TimePoint now) {
  while (!admitted_.empty() && admitted_.front() <= now - 60s) admitted_.pop_front();
}

RateLimiter::Permit RateLimiter::acquire() {
  std::unique_lock lock(mutex_);
  for (;;) {
    if (in_flight_ >= limits_.max_in_flight) {
      released_.wait(lock);
      continue;
    }
    if (limits_.rate_per_minute > 0) {
      const TimePoint now = clock_();
      prune_locked(now);
      if (static_cast<int>(admitted_.size()) >= limits_.rate_per_minute) {
        const auto wait = admitted_.front() + 60s - now;
        lock.unlock();
        sleeper_(wait);
        lock.lock();
        continue;
      }
      admitted_.push_back(now);
    }
    ++in_flight_;
    return Permit(this);
  }
}

void RateLimiter::release_one() {
  {
    std::lock_guard lock(mutex_);
    --in_flight_;
  }
  released_.notify_one();
}

int RateLimiter::in_flight() const {
  std::lock_guard lock(mutex_);
  return in_flight_;
}

}  // namespace lela
