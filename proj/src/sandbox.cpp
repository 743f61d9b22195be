#include "provio/sandbox.hpp"

#include <vector>

namespace provio {

Sandbox::Sandbox(const std::filesystem::path& root) {
  std::filesystem::create_directories(root);
  root_ = std::filesystem::canonical(root);
}

std::string Sandbox::canonical(std::string_view path) const {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    auto slash = path.find('/', pos);
    auto part = path.substr(pos, slash == std::string_view::npos ? path.npos : slash - pos);
    if (part == "..") {
      if (parts.empty()) {
        throw IoError(IoErrc::PathEscape, "path escapes the sandbox: " + std::string(path));
      }
      parts.pop_back();
    } else if (!part.empty() && part != ".") {
      parts.push_back(part);
    }
    if (slash == std::string_view::npos) break;
    pos = slash + 1;
  }
  if (parts.empty()) throw IoError(IoErrc::NotFound, "empty path: '" + std::string(path) + "'");
  std::string out;
  for (auto p : parts) {
    if (!out.empty()) out += '/';
    out += p;
  }
  return out;
}

std::filesystem::path Sandbox::resolve(std::string_view path) const {
  auto full = root_ / canonical(path);
  // Symlinks inside the sandbox must not lead outside it.
  auto real = std::filesystem::weakly_canonical(full);
  auto rel = real.lexically_relative(root_);
  if (rel.empty() || *rel.begin() == "..") {
    throw IoError(IoErrc::PathEscape, "path escapes the sandbox: " + std::string(path));
  }
  return full;
}

}  // namespace provio
