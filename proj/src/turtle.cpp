#include "provio/turtle.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <system_error>

#include "lexer.hpp"
#include "turtle_terms.hpp"

namespace provio {

using detail::Token;
using detail::TokenKind;

std::string format_term(const Term& term) {
  if (const auto* g = std::get_if<Guid>(&term)) {
    return "<" + detail::escape_iri(g->value) + ">";
  }
  if (const auto* s = std::get_if<SuperClass>(&term)) {
    return std::string(super_class_iri(*s));
  }
  const auto& lit = std::get<Literal>(term);
  if (lit.is_string()) return "\"" + detail::escape_string(lit.text()) + "\"";
  return lit.text();
}

std::string serialize_turtle(const ProvGraph& graph) {
  std::string out;
  out += "@prefix prov: <" + std::string(kProvNamespace) + "> .\n";
  out += "@prefix provio: <" + std::string(kProvioNamespace) + "> .\n";
  out += "@prefix ns1: <" + std::string(kExtNamespace) + "> .\n";

  auto triples = graph.sorted_triples();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    bool first = i == 0 || triples[i - 1].subject != t.subject;
    if (first) {
      out += "\n";
      out += format_term(t.subject);
      out += " ";
    } else {
      out += "    ";
    }
    out += predicate_name(t.predicate);
    out += " ";
    out += format_term(t.object);
    bool last = i + 1 == triples.size() || triples[i + 1].subject != t.subject;
    out += last ? " .\n" : " ;\n";
  }
  return out;
}

namespace detail {

std::optional<Literal> literal_from_token(const Token& tok) {
  switch (tok.kind) {
    case TokenKind::String:
      return Literal::string(tok.text);
    case TokenKind::Integer: {
      std::int64_t v = 0;
      auto first = tok.text.data() + (tok.text[0] == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, tok.text.data() + tok.text.size(), v);
      if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
        throw SyntaxError("integer out of range: " + tok.text, tok.line, tok.column);
      }
      return Literal::integer(v);
    }
    case TokenKind::Decimal: {
      double v = 0;
      auto first = tok.text.data() + (tok.text[0] == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, tok.text.data() + tok.text.size(), v);
      if (ec != std::errc() || ptr != tok.text.data() + tok.text.size()) {
        throw SyntaxError("malformed decimal: " + tok.text, tok.line, tok.column);
      }
      return Literal::decimal(v);
    }
    default:
      return std::nullopt;
  }
}

std::string PrefixMap::expand(const Token& tok) const {
  auto colon = tok.text.find(':');
  auto prefix = tok.text.substr(0, colon);
  auto it = prefixes.find(prefix);
  if (it == prefixes.end()) {
    throw SyntaxError("undeclared prefix '" + prefix + ":'", tok.line, tok.column);
  }
  return it->second + tok.text.substr(colon + 1);
}

PrefixMap PrefixMap::standard() {
  PrefixMap m;
  m.prefixes["prov"] = std::string(kProvNamespace);
  m.prefixes["provio"] = std::string(kProvioNamespace);
  m.prefixes["ns1"] = std::string(kExtNamespace);
  return m;
}

namespace {

// Full IRI -> canonical prefixed vocabulary name.
std::optional<std::string> canonical_name(const std::string& iri) {
  for (auto [prefix, ns] : {std::pair{"prov:", kProvNamespace},
                            std::pair{"provio:", kProvioNamespace},
                            std::pair{"ns1:", kExtNamespace}}) {
    if (iri.size() > ns.size() && iri.compare(0, ns.size(), ns) == 0) {
      return prefix + iri.substr(ns.size());
    }
  }
  return std::nullopt;
}

}  // namespace

Predicate PrefixMap::predicate(const Token& tok) const {
  std::string iri;
  if (tok.kind == TokenKind::PrefixedName) {
    iri = expand(tok);
  } else if (tok.kind == TokenKind::IriRef) {
    iri = tok.text;
  } else {
    throw SyntaxError("expected a predicate, found '" + tok.text + "'",
                      tok.line, tok.column);
  }
  if (auto name = canonical_name(iri)) {
    if (auto p = parse_predicate(*name)) return *p;
  }
  throw SyntaxError("unknown predicate '" + tok.text + "'", tok.line, tok.column);
}

std::optional<SuperClass> PrefixMap::super_class(const Token& tok) const {
  std::string iri = tok.kind == TokenKind::PrefixedName ? expand(tok) : tok.text;
  if (auto name = canonical_name(iri)) return parse_super_class_iri(*name);
  return std::nullopt;
}

}  // namespace detail

namespace {

struct RawTriple {
  Triple triple;
  std::size_t line;
  std::size_t column;
};

class TurtleReader {
 public:
  explicit TurtleReader(std::string_view text) : tokens_(detail::tokenize(text)) {}

  ProvGraph read() {
    while (peek().kind != TokenKind::End) {
      const Token& tok = peek();
      if (tok.kind == TokenKind::Word && tok.text == "@prefix") {
        prefix_directive();
      } else {
        statement();
      }
    }
    return build();
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& tok, const std::string& msg) const {
    throw SyntaxError(msg, tok.line, tok.column);
  }

  void expect_punct(std::string_view p) {
    const Token& tok = take();
    if (tok.kind != TokenKind::Punct || tok.text != p) {
      fail(tok, "expected '" + std::string(p) + "', found '" + tok.text + "'");
    }
  }

  void prefix_directive() {
    take();
    const Token& name = take();
    if (name.kind != TokenKind::PrefixedName || name.text.back() != ':') {
      fail(name, "expected a prefix name like 'prov:'");
    }
    const Token& iri = take();
    if (iri.kind != TokenKind::IriRef) fail(iri, "expected <iri> in @prefix");
    prefixes_.prefixes[name.text.substr(0, name.text.size() - 1)] = iri.text;
    expect_punct(".");
  }

  void statement() {
    const Token& subj = take();
    if (subj.kind != TokenKind::IriRef) {
      fail(subj, "subject must be an <iri> reference, found '" + subj.text + "'");
    }
    Guid subject(subj.text);
    for (;;) {
      const Token& verb = take();
      Predicate pred = prefixes_.predicate(verb);
      for (;;) {
        const Token& obj = take();
        raw_.push_back({Triple{subject, pred, object(obj)}, obj.line, obj.column});
        if (peek().kind == TokenKind::Punct && peek().text == ",") {
          take();
          continue;
        }
        break;
      }
      const Token& sep = take();
      if (sep.kind == TokenKind::Punct && sep.text == ";") {
        // Allow a dangling ';' before the final '.'.
        if (peek().kind == TokenKind::Punct && peek().text == ".") {
          take();
          return;
        }
        continue;
      }
      if (sep.kind == TokenKind::Punct && sep.text == ".") return;
      fail(sep, "expected ';', ',' or '.', found '" + sep.text + "'");
    }
  }

  Term object(const Token& tok) {
    if (auto lit = detail::literal_from_token(tok)) return *lit;
    if (tok.kind == TokenKind::PrefixedName) {
      if (auto cls = prefixes_.super_class(tok)) return *cls;
      fail(tok, "unknown class '" + tok.text + "'");
    }
    if (tok.kind == TokenKind::IriRef) {
      if (auto cls = prefixes_.super_class(tok)) return *cls;
      return Guid(tok.text);
    }
    fail(tok, "expected an object term, found '" + tok.text + "'");
  }

  ProvGraph build() {
    ProvGraph graph;
    // Nodes first: every subject is classified by its provio:subClass.
    std::map<Guid, const RawTriple*> classified;
    for (const RawTriple& r : raw_) {
      if (r.triple.predicate == Predicate::SubClassOf) {
        classified.emplace(r.triple.subject, &r);
      }
    }
    for (const auto& [guid, r] : classified) {
      const auto& lit = std::get<Literal>(r->triple.object);
      auto sub = lit.is_string() ? parse_sub_class(lit.text()) : std::nullopt;
      if (!sub) {
        throw SyntaxError("unknown sub-class " + format_term(lit), r->line, r->column);
      }
      auto label = label_from_guid(*sub, guid.value);
      if (!label) {
        throw SyntaxError("<" + guid.value + "> is not a valid " +
                              std::string(sub_class_name(*sub)) + " identifier",
                          r->line, r->column);
      }
      try {
        graph.add_node(ProvNode{guid, *sub, *label});
      } catch (const GraphError& e) {
        throw SyntaxError(e.what(), r->line, r->column);
      }
    }
    for (const RawTriple& r : raw_) {
      if (!classified.contains(r.triple.subject)) {
        throw SyntaxError("<" + r.triple.subject.value +
                              "> has no provio:subClass classification",
                          r.line, r.column);
      }
      try {
        graph.add_triple(r.triple);
      } catch (const GraphError& e) {
        throw SyntaxError(e.what(), r.line, r.column);
      }
    }
    return graph;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  detail::PrefixMap prefixes_;
  std::vector<RawTriple> raw_;
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::system_error(errno, std::generic_category(),
                            "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

ProvGraph parse_turtle(std::string_view text) { return TurtleReader(text).read(); }

ProvGraph read_turtle_file(const std::filesystem::path& path) {
  try {
    return parse_turtle(read_file(path));
  } catch (const SyntaxError& e) {
    throw e.in_source(path.string());
  }
}

void write_turtle_file(const std::filesystem::path& path, const ProvGraph& graph) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::system_error(errno, std::generic_category(),
                              "cannot write " + tmp.string());
    }
    out << serialize_turtle(graph);
    out.flush();
    if (!out) {
      throw std::system_error(EIO, std::generic_category(),
                              "short write to " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

std::string subgraph_file_name(std::string_view program, unsigned rank) {
  return "prov_" + std::string(program) + "_" + std::to_string(rank) + ".ttl";
}

std::vector<std::filesystem::path> list_subgraph_files(
    const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    auto name = entry.path().filename().string();
    if (name.starts_with("prov_") && name.ends_with(".ttl")) {
      out.push_back(entry.path());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProvGraph merge_files(std::span<const std::filesystem::path> files) {
  std::vector<ProvGraph> graphs;
  graphs.reserve(files.size());
  for (const auto& f : files) graphs.push_back(read_turtle_file(f));
  return merge(graphs);
}

ProvGraph merge_directory(const std::filesystem::path& dir) {
  auto files = list_subgraph_files(dir);
  return merge_files(files);
}

}  // namespace provio
