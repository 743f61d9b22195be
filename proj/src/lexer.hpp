#pragma once

// Tokenizer shared by the Turtle reader and the query parser. Both accept the
// same lexical subset: IRI references, prefixed names, variables, quoted
// strings, integers, decimals and a handful of punctuation tokens.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "provio/errors.hpp"

namespace provio::detail {

enum class TokenKind {
  IriRef,       // text = decoded IRI without brackets
  PrefixedName, // text = "prefix:local"
  Variable,     // text = name without '?'
  String,       // text = decoded contents
  Integer,
  Decimal,
  Word,         // bare identifier or @-directive ("@prefix")
  Punct,        // . ; , { } ( ) * and comparators < <= = >= > !=
  End,
};

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t line;
  std::size_t column;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view input);

// Escapes a GUID for use inside <...>.
std::string escape_iri(std::string_view iri);
// Escapes a string literal body for use inside "...".
std::string escape_string(std::string_view s);

}  // namespace provio::detail
