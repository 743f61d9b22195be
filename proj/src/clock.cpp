#include "provio/clock.hpp"

#include <chrono>

namespace provio {

std::int64_t SteadyClock::now_us() {
  return std::chrono::duration_cast<std::chrono::microseconds>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

bool SteadyClock::wait_until(std::int64_t deadline_us, std::stop_token stop) {
  auto deadline = std::chrono::steady_clock::time_point(
      std::chrono::microseconds(deadline_us));
  std::unique_lock lock(mutex_);
  cv_.wait_until(lock, stop, deadline, [] { return false; });
  return !stop.stop_requested();
}

bool ManualClock::wait_until(std::int64_t deadline_us, std::stop_token stop) {
  std::unique_lock lock(mutex_);
  return cv_.wait(lock, stop, [&] { return now_.load() >= deadline_us; });
}

void ManualClock::advance(std::int64_t delta_us) {
  {
    std::lock_guard lock(mutex_);
    now_ += delta_us;
  }
  cv_.notify_all();
}

}  // namespace provio
