#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace provio {

enum class IoErrc {
  NotFound,
  Exists,
  PathEscape,
  BadMode,
  Closed,
  KindMismatch,
  MissingParent,
  Busy,
  Corrupt,
  System,
};

class IoError : public std::runtime_error {
 public:
  IoError(IoErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  IoErrc code() const { return code_; }

 private:
  IoErrc code_;
};

// Confines relative paths to a root directory.
class Sandbox {
 public:
  // Creates `root` if needed.
  explicit Sandbox(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  // Lexically normalized path relative to the root: no ".", no "..", no
  // duplicate or trailing separators. A leading '/' means the root.
  // Throws IoError(PathEscape) when the path climbs above the root.
  std::string canonical(std::string_view path) const;

  // root / canonical(path), additionally checked against symlink escapes.
  std::filesystem::path resolve(std::string_view path) const;

 private:
  std::filesystem::path root_;
};

}  // namespace provio
