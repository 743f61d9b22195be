#pragma once

#include <string>
#include <type_traits>
#include <utility>

#include "provio/tracker.hpp"

namespace provio::detail {

// Runs `op` and, when it succeeds, reports one event to `session`. A failing
// op throws before anything is recorded.
template <class Op>
auto instrumented(Session* session, SubClass api_class, const char* api_name,
                  SubClass target_class, const std::string& target, Op&& op) {
  if (session == nullptr) return op();
  const bool timed = session->times(api_class);
  const std::int64_t start = timed ? session->clock().now_us() : 0;
  auto report = [&] {
    IoEvent ev{api_name, api_class, target_class, target, std::nullopt};
    if (timed) ev.duration_us = session->clock().now_us() - start;
    session->record_io(ev);
  };
  if constexpr (std::is_void_v<decltype(op())>) {
    op();
    report();
  } else {
    auto result = op();
    report();
    return result;
  }
}

}  // namespace provio::detail
