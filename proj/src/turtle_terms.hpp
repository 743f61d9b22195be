#pragma once

// Term resolution shared by the Turtle reader and the query parser.

#include <map>
#include <optional>
#include <string>

#include "lexer.hpp"
#include "provio/model.hpp"

namespace provio::detail {

std::optional<Literal> literal_from_token(const Token& tok);

struct PrefixMap {
  std::map<std::string, std::string> prefixes;

  static PrefixMap standard();

  // Throws SyntaxError for an undeclared prefix.
  std::string expand(const Token& tok) const;
  // Throws SyntaxError for anything outside the vocabulary.
  Predicate predicate(const Token& tok) const;
  std::optional<SuperClass> super_class(const Token& tok) const;
};

}  // namespace provio::detail
