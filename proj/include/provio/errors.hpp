#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace provio {

// A malformed Turtle document, query, or config file. Positions are 1-based.
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column,
              const std::string& source = {})
      : std::runtime_error((source.empty() ? "" : source + ":") + "line " +
                           std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        message_(message),
        source_(source),
        line_(line),
        column_(column) {}

  // Same error, attributed to a named file.
  SyntaxError in_source(const std::string& source) const {
    return SyntaxError(message_, line_, column_, source);
  }

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::string source_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace provio
