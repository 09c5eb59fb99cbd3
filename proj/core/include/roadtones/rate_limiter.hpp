#pragma once

#include <chrono>
#include <mutex>

namespace roadtones {

/// Token bucket: `capacity` requests per `interval`, refilled continuously.
/// A capacity of 0 disables limiting. Safe for concurrent callers.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  RateLimiter(int capacity, std::chrono::milliseconds interval);

  /// Blocks until a token is available, then consumes it.
  void acquire();
  /// Consumes a token if one is available right now.
  bool try_acquire();

 private:
  void refill(Clock::time_point now);

  const int capacity_;
  const double tokens_per_ms_;
  std::mutex mutex_;
  double tokens_;
  Clock::time_point last_;
};

}  // namespace roadtones
