#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <stop_token>

namespace provio {

// Monotonic microsecond time source. Sessions take one by injection so that
// tests can drive durations and periodic flushes deterministically.
class Clock {
 public:
  virtual ~Clock() = default;

  virtual std::int64_t now_us() = 0;

  // Blocks until now_us() >= deadline_us. Returns false if `stop` was
  // requested first.
  virtual bool wait_until(std::int64_t deadline_us, std::stop_token stop) = 0;
};

class SteadyClock final : public Clock {
 public:
  std::int64_t now_us() override;
  bool wait_until(std::int64_t deadline_us, std::stop_token stop) override;

 private:
  std::mutex mutex_;
  std::condition_variable_any cv_;
};

// Time only moves when advance() is called.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(std::int64_t start_us = 0) : now_(start_us) {}

  std::int64_t now_us() override { return now_.load(); }
  bool wait_until(std::int64_t deadline_us, std::stop_token stop) override;

  void advance(std::int64_t delta_us);

 private:
  std::atomic<std::int64_t> now_;
  std::mutex mutex_;
  std::condition_variable_any cv_;
};

}  // namespace provio
