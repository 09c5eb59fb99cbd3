#include "roadtones/rate_limiter.hpp"

#include <algorithm>
#include <thread>

namespace roadtones {

RateLimiter::RateLimiter(int capacity, std::chrono::milliseconds interval)
    : capacity_(std::max(capacity, 0)),
      tokens_per_ms_(capacity_ > 0 && interval.count() > 0
                         ? static_cast<double>(capacity_) / static_cast<double>(interval.count())
                         : 0.0),
      tokens_(static_cast<double>(capacity_)),
      last_(Clock::now()) {}

void RateLimiter::refill(Clock::time_point now) {
  const auto elapsed = std::chrono::duration<double, std::milli>(now - last_).count();
  tokens_ = std::min(static_cast<double>(capacity_), tokens_ + elapsed * tokens_per_ms_);
  last_ = now;
}

bool RateLimiter::try_acquire() {
  if (capacity_ == 0) return true;
  std::lock_guard lock(mutex_);
  refill(Clock::now());
  if (tokens_ >= 1.0) {
    tokens_ -= 1.0;
    return true;
  }
  return false;
}

void RateLimiter::acquire() {
  if (capacity_ == 0) return;
  for (;;) {
    std::chrono::duration<double, std::milli> wait{};
    {
      std::lock_guard lock(mutex_);
      refill(Clock::now());
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double, std::milli>((1.0 - tokens_) / tokens_per_ms_);
    }
    std::this_thread::sleep_for(wait);
  }
}

}  // namespace roadtones
