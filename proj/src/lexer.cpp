#include "lexer.hpp"

#include <cctype>
#include <cstdio>

namespace provio::detail {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
}

bool iri_forbidden(unsigned char c) {
  return c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' ||
         c == '}' || c == '|' || c == '^' || c == '`' || c == '\\';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view in) : in_(in) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      start_line_ = line_;
      start_col_ = col_;
      start_ = pos_;
      if (pos_ >= in_.size()) {
        out.push_back(make(TokenKind::End, ""));
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, start_line_, start_col_);
  }

  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }

  char advance() {
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  Token make(TokenKind kind, std::string text) const {
    return Token{kind, std::move(text), start_line_, start_col_, start_};
  }

  void skip_space() {
    while (pos_ < in_.size()) {
      char c = peek();
      if (c == '#') {
        while (pos_ < in_.size() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  unsigned long read_hex(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      char c = peek();
      if (!std::isxdigit(static_cast<unsigned char>(c))) {
        fail("malformed \\u escape");
      }
      advance();
      cp = cp * 16 + static_cast<unsigned long>(
                         std::isdigit(static_cast<unsigned char>(c))
                             ? c - '0'
                             : std::tolower(static_cast<unsigned char>(c)) - 'a' + 10);
    }
    return cp;
  }

  // An IRI reference needs a closing '>' before any forbidden character;
  // otherwise '<' is a comparator.
  bool looks_like_iri() const {
    for (std::size_t i = pos_ + 1; i < in_.size(); ++i) {
      unsigned char c = static_cast<unsigned char>(in_[i]);
      if (c == '>') return true;
      if (c == '\\') continue;
      if (iri_forbidden(c)) return false;
    }
    return false;
  }

  Token next() {
    char c = peek();
    if (c == '<' && looks_like_iri()) return iri();
    if (c == '"') return string();
    if (c == '?' || c == '$') {
      advance();
      std::string name;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        name += advance();
      }
      if (name.empty()) fail("empty variable name");
      return make(TokenKind::Variable, name);
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') &&
         std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return number();
    }
    if (c == '@') {
      advance();
      std::string word = "@";
      while (is_name_char(peek())) word += advance();
      if (word.size() == 1) fail("stray '@'");
      return make(TokenKind::Word, word);
    }
    if (is_name_start(c)) return name();
    if (c == ':') return name();
    switch (c) {
      case '.': case ';': case ',': case '{': case '}': case '(': case ')':
      case '*':
        advance();
        return make(TokenKind::Punct, std::string(1, c));
      case '<': case '>': case '!': {
        advance();
        std::string op(1, c);
        if (peek() == '=') op += advance();
        if (op == "!") fail("unexpected '!'");
        return make(TokenKind::Punct, op);
      }
      case '=':
        advance();
        return make(TokenKind::Punct, "=");
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }

  Token iri() {
    advance();  // '<'
    std::string text;
    while (peek() != '>') {
      char c = advance();
      if (c == '\\') {
        char kind = advance();
        if (kind == 'u') {
          append_utf8(text, read_hex(4));
        } else if (kind == 'U') {
          append_utf8(text, read_hex(8));
        } else {
          fail("invalid escape in IRI");
        }
      } else {
        text += c;
      }
    }
    advance();  // '>'
    return make(TokenKind::IriRef, text);
  }

  Token string() {
    advance();  // '"'
    std::string text;
    for (;;) {
      if (pos_ >= in_.size()) fail("unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\n') fail("newline in string literal");
      if (c != '\\') {
        text += c;
        continue;
      }
      if (pos_ >= in_.size()) fail("unterminated string literal");
      char e = advance();
      switch (e) {
        case 'n': text += '\n'; break;
        case 'r': text += '\r'; break;
        case 't': text += '\t'; break;
        case 'b': text += '\b'; break;
        case 'f': text += '\f'; break;
        case '"': text += '"'; break;
        case '\'': text += '\''; break;
        case '\\': text += '\\'; break;
        case 'u': append_utf8(text, read_hex(4)); break;
        case 'U': append_utf8(text, read_hex(8)); break;
        default: fail(std::string("invalid escape '\\") + e + "'");
      }
    }
    return make(TokenKind::String, text);
  }

  Token number() {
    std::string text;
    if (peek() == '-' || peek() == '+') text += advance();
    while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      text += advance();
      while (std::isdigit(static_cast<unsigned char>(peek()))) text += advance();
      return make(TokenKind::Decimal, text);
    }
    return make(TokenKind::Integer, text);
  }

  Token name() {
    std::string text;
    while (is_name_char(peek())) text += advance();
    if (peek() != ':') return make(TokenKind::Word, text);
    text += advance();
    // Local part; a trailing '.' terminates the statement instead.
    while (is_name_char(peek()) ||
           (peek() == '.' && is_name_char(peek(1)))) {
      text += advance();
    }
    return make(TokenKind::PrefixedName, text);
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t start_ = 0;
  std::size_t start_line_ = 1;
  std::size_t start_col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view input) { return Lexer(input).run(); }

std::string escape_iri(std::string_view iri) {
  std::string out;
  out.reserve(iri.size());
  for (char c : iri) {
    auto u = static_cast<unsigned char>(c);
    if (iri_forbidden(u)) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", u);
      out += buf;
    } else {
      out += c;
    }
  }
  return out;
}

std::string escape_string(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned char>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace provio::detail
