#pragma once

#include <bitset>
#include <chrono>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "provio/model.hpp"

namespace provio {

struct FlushPolicy {
  bool periodic = false;
  std::chrono::milliseconds interval{0};

  static FlushPolicy at_end() { return {}; }
  static FlushPolicy every(std::chrono::milliseconds ms) { return {true, ms}; }

  friend bool operator==(const FlushPolicy&, const FlushPolicy&) = default;
};

// Which sub-classes a session records and how it persists them.
struct TrackingConfig {
  std::bitset<kSubClassCount> enabled;
  bool track_duration = false;
  FlushPolicy flush;
  std::filesystem::path output_dir = ".";

  static TrackingConfig all_enabled();
  static TrackingConfig all_disabled();

  bool is_enabled(SubClass s) const { return enabled.test(static_cast<std::size_t>(s)); }
  TrackingConfig& set(SubClass s, bool on) {
    enabled.set(static_cast<std::size_t>(s), on);
    return *this;
  }
  TrackingConfig& set_all(SuperClass super, bool on);
  bool any_enabled(SuperClass super) const;

  // Throws std::invalid_argument when the periodic interval is not positive
  // or an Activity class is enabled without the Program agent it attaches to.
  void validate() const;

  // INI text accepted by parse_tracking_config.
  std::string to_ini() const;

  friend bool operator==(const TrackingConfig&, const TrackingConfig&) = default;
};

// INI format:
//   [classes]   <subclass>=true|false   (lowercase names; unlisted = enabled)
//   [tracking]  durations=true|false, flush=atend|periodic:<ms>, output=<dir>
// Throws SyntaxError on malformed or unknown entries.
TrackingConfig parse_tracking_config(std::string_view text);

TrackingConfig load_tracking_config(const std::filesystem::path& path);

inline constexpr const char* kConfigEnvVar = "PROVIO_CONFIG";

// Loads the file named by $PROVIO_CONFIG, if set.
std::optional<TrackingConfig> config_from_environment();

}  // namespace provio
