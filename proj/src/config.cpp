#include "provio/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "provio/errors.hpp"

namespace provio {

namespace {

namespace pt = boost::property_tree;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// ptree loses line numbers, so errors after parsing report the line on which
// the offending key appears in the source text.
std::size_t line_of(std::string_view text, std::string_view key) {
  std::size_t line = 1;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    auto row = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
    auto eq = row.find('=');
    auto trim = [](std::string_view s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string_view::npos ? std::string_view{} : s.substr(b, e - b + 1);
    };
    if (trim(row) == key || (eq != std::string_view::npos && trim(row.substr(0, eq)) == key)) {
      return line;
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
    ++line;
  }
  return 0;
}

bool parse_bool(std::string_view text, const std::string& key, std::string_view src) {
  auto v = lower(std::string(text));
  if (v == "true") return true;
  if (v == "false") return false;
  throw SyntaxError("'" + key + "' expects true or false, got '" + std::string(text) + "'",
                    line_of(src, key), 1);
}

}  // namespace

TrackingConfig TrackingConfig::all_enabled() {
  TrackingConfig c;
  c.enabled.set();
  return c;
}

TrackingConfig TrackingConfig::all_disabled() {
  TrackingConfig c;
  c.enabled.reset();
  return c;
}

TrackingConfig& TrackingConfig::set_all(SuperClass super, bool on) {
  for (SubClass s : sub_classes_of(super)) set(s, on);
  return *this;
}

bool TrackingConfig::any_enabled(SuperClass super) const {
  for (SubClass s : sub_classes_of(super)) {
    if (is_enabled(s)) return true;
  }
  return false;
}

void TrackingConfig::validate() const {
  if (flush.periodic && flush.interval.count() <= 0) {
    throw std::invalid_argument("periodic flush interval must be positive");
  }
  if (any_enabled(SuperClass::Activity) && !is_enabled(SubClass::Program)) {
    throw std::invalid_argument(
        "I/O API tracking requires the program agent to be enabled");
  }
}

std::string TrackingConfig::to_ini() const {
  std::ostringstream out;
  out << "[classes]\n";
  for (SubClass s : all_sub_classes()) {
    out << sub_class_key(s) << "=" << (is_enabled(s) ? "true" : "false") << "\n";
  }
  out << "\n[tracking]\n";
  out << "durations=" << (track_duration ? "true" : "false") << "\n";
  if (flush.periodic) {
    out << "flush=periodic:" << flush.interval.count() << "\n";
  } else {
    out << "flush=atend\n";
  }
  out << "output=" << output_dir.string() << "\n";
  return out.str();
}

TrackingConfig parse_tracking_config(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::ini_parser::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw SyntaxError(e.message(), e.line(), 1);
  }

  TrackingConfig cfg = TrackingConfig::all_enabled();
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw SyntaxError("entry '" + section + "' is outside any section",
                        line_of(text, section), 1);
    }
    if (section == "classes") {
      for (const auto& [key, value] : body) {
        auto sub = parse_sub_class(key);
        if (!sub || key != sub_class_key(*sub)) {
          throw SyntaxError("unknown sub-class '" + key + "'", line_of(text, key), 1);
        }
        cfg.set(*sub, parse_bool(value.data(), key, text));
      }
    } else if (section == "tracking") {
      for (const auto& [key, value] : body) {
        const std::string& v = value.data();
        if (key == "durations") {
          cfg.track_duration = parse_bool(v, key, text);
        } else if (key == "flush") {
          if (lower(v) == "atend") {
            cfg.flush = FlushPolicy::at_end();
          } else if (lower(v).starts_with("periodic:")) {
            long ms = 0;
            try {
              std::size_t used = 0;
              ms = std::stol(v.substr(9), &used);
              if (used != v.size() - 9) throw std::invalid_argument(v);
            } catch (const std::exception&) {
              throw SyntaxError("bad flush interval '" + v + "'", line_of(text, key), 1);
            }
            if (ms <= 0) {
              throw SyntaxError("flush interval must be positive", line_of(text, key), 1);
            }
            cfg.flush = FlushPolicy::every(std::chrono::milliseconds(ms));
          } else {
            throw SyntaxError("flush expects atend or periodic:<ms>, got '" + v + "'",
                              line_of(text, key), 1);
          }
        } else if (key == "output") {
          if (v.empty()) throw SyntaxError("empty output directory", line_of(text, key), 1);
          cfg.output_dir = v;
        } else {
          throw SyntaxError("unknown tracking option '" + key + "'", line_of(text, key), 1);
        }
      }
    } else {
      throw SyntaxError("unknown section [" + section + "]",
                        line_of(text, "[" + section + "]"), 1);
    }
  }
  return cfg;
}

TrackingConfig load_tracking_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_tracking_config(ss.str());
  } catch (const SyntaxError& e) {
    throw e.in_source(path.string());
  }
}

std::optional<TrackingConfig> config_from_environment() {
  const char* path = std::getenv(kConfigEnvVar);
  if (path == nullptr || *path == '\0') return std::nullopt;
  return load_tracking_config(path);
}

}  // namespace provio
