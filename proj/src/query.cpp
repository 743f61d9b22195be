#include "provio/query.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"

#include "lexer.hpp"
#include "provio/turtle.hpp"
#include "turtle_terms.hpp"

namespace provio {

using detail::Token;
using detail::TokenKind;

std::string_view comparator_symbol(Comparator c) {
  switch (c) {
    case Comparator::Less: return "<";
    case Comparator::LessEqual: return "<=";
    case Comparator::Equal: return "=";
    case Comparator::GreaterEqual: return ">=";
    case Comparator::Greater: return ">";
  }
  return "?";
}

bool compare_with(double value, Comparator c, double bound) {
  switch (c) {
    case Comparator::Less: return value < bound;
    case Comparator::LessEqual: return value <= bound;
    case Comparator::Equal: return value == bound;
    case Comparator::GreaterEqual: return value >= bound;
    case Comparator::Greater: return value > bound;
  }
  return false;
}

namespace {

const Variable* as_var(const PatternTerm& t) { return std::get_if<Variable>(&t); }

void for_each_var(const TriplePattern& p, auto&& fn) {
  if (auto v = as_var(p.subject)) fn(v->name);
  if (auto v = as_var(p.object)) fn(v->name);
}

}  // namespace

std::vector<std::string> Query::projection() const {
  if (!select_all) return select;
  std::vector<std::string> out;
  for (const auto& p : where) {
    for_each_var(p, [&](const std::string& name) {
      if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
    });
  }
  return out;
}

void Query::validate() const {
  std::set<std::string> seen;
  for (const auto& p : where) {
    for_each_var(p, [&](const std::string& name) { seen.insert(name); });
    if (!as_var(p.subject) && !std::holds_alternative<Guid>(std::get<Term>(p.subject))) {
      throw std::invalid_argument("pattern subject must be a variable or a node");
    }
  }
  if (where.empty()) throw std::invalid_argument("query has no patterns");
  for (const auto& v : select) {
    if (!seen.contains(v)) throw std::invalid_argument("selected variable ?" + v + " is unbound");
  }
  for (const auto& f : filters) {
    if (!seen.contains(f.var)) {
      throw std::invalid_argument("filter variable ?" + f.var + " is unbound");
    }
  }
}

std::vector<Term> BindingSet::column(std::string_view var) const {
  auto it = std::find(variables.begin(), variables.end(), var);
  if (it == variables.end()) throw std::out_of_range("no variable ?" + std::string(var));
  auto idx = static_cast<std::size_t>(it - variables.begin());
  std::vector<Term> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[idx]);
  return out;
}

// ---------------------------------------------------------------- parsing

namespace {

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

bool is_unsupported_keyword(const std::string& w) {
  static const std::set<std::string> kw = {
      "OPTIONAL", "UNION", "GRAPH", "MINUS", "BIND", "VALUES", "SERVICE", "ORDER",
      "LIMIT", "OFFSET", "GROUP", "HAVING", "CONSTRUCT", "ASK", "DESCRIBE", "FROM",
      "REDUCED", "EXISTS", "NOT", "BASE", "INSERT", "DELETE"};
  return kw.contains(upper(w));
}

class QueryParser {
 public:
  explicit QueryParser(std::string_view text)
      : tokens_(detail::tokenize(text)), prefixes_(detail::PrefixMap::standard()) {}

  Query parse() {
    while (keyword_is("PREFIX")) prefix_decl();
    if (!keyword_is("SELECT")) {
      if (peek().kind == TokenKind::Word && is_unsupported_keyword(peek().text)) {
        unsupported(peek());
      }
      fail(peek(), "expected SELECT");
    }
    take();
    if (keyword_is("DISTINCT")) take();
    Query q;
    if (peek().kind == TokenKind::Punct && peek().text == "*") {
      take();
      q.select_all = true;
    } else {
      while (peek().kind == TokenKind::Variable) q.select.push_back(take().text);
      if (q.select.empty()) fail(peek(), "expected variables or '*' after SELECT");
    }
    if (!keyword_is("WHERE")) {
      if (peek().kind == TokenKind::Word && is_unsupported_keyword(peek().text)) {
        unsupported(peek());
      }
      fail(peek(), "expected WHERE");
    }
    take();
    const Token& open = peek();
    expect("{");
    group(q);
    expect("}");
    if (peek().kind != TokenKind::End) {
      if (peek().kind == TokenKind::Word && is_unsupported_keyword(peek().text)) {
        unsupported(peek());
      }
      fail(peek(), "unexpected '" + peek().text + "' after the WHERE block");
    }
    if (q.where.empty()) fail(open, "empty WHERE block");
    check_variables(q);
    return q;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (t.kind != TokenKind::End) ++pos_;
    return t;
  }

  bool keyword_is(std::string_view kw) const {
    return peek().kind == TokenKind::Word && upper(peek().text) == kw;
  }

  bool punct_is(std::string_view p) const {
    return peek().kind == TokenKind::Punct && peek().text == p;
  }

  [[noreturn]] void fail(const Token& tok, const std::string& msg) const {
    throw SyntaxError(msg, tok.line, tok.column);
  }

  [[noreturn]] void unsupported(const Token& tok) const {
    fail(tok, "unsupported feature: " + upper(tok.text));
  }

  void expect(std::string_view p) {
    const Token& tok = take();
    if (tok.kind != TokenKind::Punct || tok.text != p) {
      fail(tok, "expected '" + std::string(p) + "', found '" + tok.text + "'");
    }
  }

  void prefix_decl() {
    take();
    const Token& name = take();
    if (name.kind != TokenKind::PrefixedName || name.text.back() != ':') {
      fail(name, "expected a prefix name like 'prov:'");
    }
    const Token& iri = take();
    if (iri.kind != TokenKind::IriRef) fail(iri, "expected <iri> after prefix name");
    bool known = iri.text == kProvNamespace || iri.text == kProvioNamespace ||
                 iri.text == kExtNamespace;
    if (!known) fail(iri, "unknown namespace <" + iri.text + ">");
    prefixes_.prefixes[name.text.substr(0, name.text.size() - 1)] = iri.text;
  }

  void group(Query& q) {
    while (!punct_is("}")) {
      if (peek().kind == TokenKind::End) fail(peek(), "unterminated WHERE block");
      if (peek().kind == TokenKind::Word) {
        if (upper(peek().text) == "FILTER") {
          q.filters.push_back(filter());
          if (punct_is(".")) take();
          continue;
        }
        if (is_unsupported_keyword(peek().text)) unsupported(peek());
      }
      if (punct_is("{")) fail(peek(), "unsupported feature: nested group");
      triples_block(q);
      if (punct_is(".")) {
        take();
      } else if (!punct_is("}") && !keyword_is("FILTER")) {
        if (peek().kind == TokenKind::Word && is_unsupported_keyword(peek().text)) {
          unsupported(peek());
        }
        fail(peek(), "expected '.' or '}', found '" + peek().text + "'");
      }
    }
  }

  void triples_block(Query& q) {
    PatternTerm subject = subject_term(take());
    for (;;) {
      Predicate pred = predicate(take());
      for (;;) {
        q.where.push_back({subject, pred, object_term(take())});
        if (!punct_is(",")) break;
        take();
      }
      if (!punct_is(";")) return;
      take();
      // A dangling ';' before '.' or '}'.
      if (punct_is(".") || punct_is("}")) return;
    }
  }

  PatternTerm subject_term(const Token& tok) {
    if (tok.kind == TokenKind::Variable) return Variable{tok.text};
    if (tok.kind == TokenKind::IriRef) return Term(Guid(tok.text));
    if (tok.kind == TokenKind::Word && is_unsupported_keyword(tok.text)) unsupported(tok);
    fail(tok, "expected a variable or <iri> as subject, found '" + tok.text + "'");
  }

  Predicate predicate(const Token& tok) {
    if (tok.kind == TokenKind::Variable) {
      fail(tok, "unsupported feature: predicate variables");
    }
    if (tok.kind == TokenKind::Word && tok.text == "a") {
      fail(tok, "unsupported feature: 'a' (rdf:type)");
    }
    return prefixes_.predicate(tok);
  }

  PatternTerm object_term(const Token& tok) {
    if (tok.kind == TokenKind::Variable) return Variable{tok.text};
    if (auto lit = detail::literal_from_token(tok)) return Term(*lit);
    if (tok.kind == TokenKind::PrefixedName) {
      if (auto cls = prefixes_.super_class(tok)) return Term(*cls);
      fail(tok, "unknown class '" + tok.text + "'");
    }
    if (tok.kind == TokenKind::IriRef) {
      if (auto cls = prefixes_.super_class(tok)) return Term(*cls);
      return Term(Guid(tok.text));
    }
    fail(tok, "expected an object term, found '" + tok.text + "'");
  }

  Filter filter() {
    take();
    expect("(");
    const Token& var = take();
    if (var.kind != TokenKind::Variable) fail(var, "FILTER expects ?var <op> number");
    const Token& op = take();
    static const std::map<std::string, Comparator> ops = {
        {"<", Comparator::Less},          {"<=", Comparator::LessEqual},
        {"=", Comparator::Equal},         {">=", Comparator::GreaterEqual},
        {">", Comparator::Greater}};
    auto it = op.kind == TokenKind::Punct ? ops.find(op.text) : ops.end();
    if (it == ops.end()) {
      fail(op, "unsupported filter operator '" + op.text + "'");
    }
    const Token& num = take();
    if (num.kind != TokenKind::Integer && num.kind != TokenKind::Decimal) {
      fail(num, "FILTER bound must be a number");
    }
    double bound = *detail::literal_from_token(num)->as_number();
    expect(")");
    filter_tokens_.push_back(var);
    return Filter{var.text, it->second, bound};
  }

  void check_variables(const Query& q) {
    std::set<std::string> seen;
    for (const auto& p : q.where) for_each_var(p, [&](const std::string& n) { seen.insert(n); });
    for (const auto& v : q.select) {
      if (!seen.contains(v)) {
        throw SyntaxError("selected variable ?" + v + " does not occur in WHERE", 1, 1);
      }
    }
    for (const auto& tok : filter_tokens_) {
      if (!seen.contains(tok.text)) {
        fail(tok, "filter variable ?" + tok.text + " does not occur in any pattern");
      }
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  detail::PrefixMap prefixes_;
  std::vector<Token> filter_tokens_;
};

}  // namespace

Query parse_query(std::string_view text) { return QueryParser(text).parse(); }

// ------------------------------------------------------------- evaluation

namespace {

struct RowLess {
  bool operator()(const std::vector<Term>& a, const std::vector<Term>& b) const {
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
      auto c = compare(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return a.size() < b.size();
  }
};

class Evaluator {
 public:
  Evaluator(const ProvGraph& g, const Query& q) : graph_(g), query_(q) {
    for (const auto& p : q.where) {
      for_each_var(p, [&](const std::string& n) {
        if (!slots_.contains(n)) {
          slots_.emplace(n, slots_.size());
        }
      });
    }
    values_.resize(slots_.size());
    for (const auto& f : q.filters) filters_by_slot_[slots_.at(f.var)].push_back(&f);
    for (const auto& v : q.projection()) out_slots_.push_back(slots_.at(v));
    done_.assign(q.where.size(), false);
  }

  std::set<std::vector<Term>, RowLess> run() {
    search(0);
    return std::move(rows_);
  }

 private:
  // Current value of a pattern slot: a constant, a bound variable, or none.
  std::optional<Term> resolve(const PatternTerm& t) const {
    if (auto v = as_var(t)) return values_[slots_.at(v->name)];
    return std::get<Term>(t);
  }

  bool passes(std::size_t slot) const {
    auto it = filters_by_slot_.find(slot);
    if (it == filters_by_slot_.end()) return true;
    const auto* lit = std::get_if<Literal>(&*values_[slot]);
    if (!lit || !lit->is_numeric()) return false;
    double v = *lit->as_number();
    for (const Filter* f : it->second) {
      if (!compare_with(v, f->op, f->bound)) return false;
    }
    return true;
  }

  void search(std::size_t depth) {
    if (depth == query_.where.size()) {
      std::vector<Term> row;
      row.reserve(out_slots_.size());
      for (auto s : out_slots_) row.push_back(*values_[s]);
      rows_.insert(std::move(row));
      return;
    }
    // Pick the remaining pattern with the smallest candidate list.
    std::size_t best = query_.where.size();
    std::size_t best_cost = 0;
    for (std::size_t i = 0; i < query_.where.size(); ++i) {
      if (done_[i]) continue;
      const auto& p = query_.where[i];
      auto s = resolve(p.subject);
      auto o = resolve(p.object);
      if (s && !std::holds_alternative<Guid>(*s)) return;  // literal in subject slot
      std::optional<Guid> sg;
      if (s) sg = std::get<Guid>(*s);
      std::size_t cost = graph_.estimate(sg, p.predicate, o);
      if (cost == 0) return;
      if (best == query_.where.size() || cost < best_cost) {
        best = i;
        best_cost = cost;
      }
    }
    const auto& p = query_.where[best];
    auto s = resolve(p.subject);
    auto o = resolve(p.object);
    std::optional<Guid> sg;
    if (s) sg = std::get<Guid>(*s);
    done_[best] = true;
    for (const Triple& t : graph_.scan(sg, p.predicate, o)) {
      std::vector<std::size_t> bound_here;
      bool ok = true;
      auto bind = [&](const PatternTerm& slot_term, const Term& value) {
        auto v = as_var(slot_term);
        if (!v) return;
        std::size_t slot = slots_.at(v->name);
        if (values_[slot]) {
          if (*values_[slot] != value) ok = false;
          return;
        }
        values_[slot] = value;
        bound_here.push_back(slot);
        if (!passes(slot)) ok = false;
      };
      bind(p.subject, Term(t.subject));
      if (ok) bind(p.object, t.object);
      if (ok) search(depth + 1);
      for (auto slot : bound_here) values_[slot].reset();
    }
    done_[best] = false;
  }

  const ProvGraph& graph_;
  const Query& query_;
  std::map<std::string, std::size_t> slots_;
  std::vector<std::optional<Term>> values_;
  std::unordered_map<std::size_t, std::vector<const Filter*>> filters_by_slot_;
  std::vector<std::size_t> out_slots_;
  std::vector<bool> done_;
  std::set<std::vector<Term>, RowLess> rows_;
};

}  // namespace

BindingSet evaluate(const ProvGraph& graph, const Query& query) {
  query.validate();
  BindingSet out;
  out.variables = query.projection();
  auto rows = Evaluator(graph, query).run();
  out.rows.assign(rows.begin(), rows.end());
  return out;
}

std::string to_tsv(const BindingSet& bindings) {
  std::string out;
  for (std::size_t i = 0; i < bindings.variables.size(); ++i) {
    if (i) out += '\t';
    out += "?" + bindings.variables[i];
  }
  out += '\n';
  for (const auto& row : bindings.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      out += format_term(row[i]);
    }
    out += '\n';
  }
  return out;
}

std::string to_json(const BindingSet& bindings) {
  nlohmann::ordered_json doc;
  doc["variables"] = bindings.variables;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : bindings.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      nlohmann::ordered_json cell;
      if (const auto* g = std::get_if<Guid>(&row[i])) {
        cell["type"] = "node";
        cell["value"] = g->value;
      } else if (const auto* c = std::get_if<SuperClass>(&row[i])) {
        cell["type"] = "class";
        cell["value"] = std::string(super_class_iri(*c));
      } else {
        const auto& lit = std::get<Literal>(row[i]);
        cell["type"] = "literal";
        if (const auto* n = std::get_if<std::int64_t>(&lit.value)) {
          cell["value"] = *n;
        } else if (const auto* d = std::get_if<double>(&lit.value)) {
          cell["value"] = *d;
        } else {
          cell["value"] = lit.text();
        }
      }
      obj[bindings.variables[i]] = std::move(cell);
    }
    doc["rows"].push_back(std::move(obj));
  }
  return doc.dump(2) + "\n";
}

}  // namespace provio
