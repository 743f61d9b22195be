#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "provio/errors.hpp"
#include "provio/graph.hpp"

namespace provio {

struct Variable {
  std::string name;  // without the leading '?'
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Subject slots hold a Variable or a Guid; object slots any Term.
using PatternTerm = std::variant<Variable, Term>;

struct TriplePattern {
  PatternTerm subject;
  Predicate predicate;
  PatternTerm object;
  friend bool operator==(const TriplePattern&, const TriplePattern&) = default;
};

enum class Comparator { Less, LessEqual, Equal, GreaterEqual, Greater };

// "<", "<=", "=", ">=", ">"
std::string_view comparator_symbol(Comparator c);
bool compare_with(double value, Comparator c, double bound);

// Keeps rows whose `var` is bound to a numeric literal satisfying the bound.
struct Filter {
  std::string var;
  Comparator op;
  double bound;
};

struct Query {
  std::vector<std::string> select;  // variable names; empty with select_all
  bool select_all = false;
  std::vector<TriplePattern> where;
  std::vector<Filter> filters;

  // Projection order: `select`, or every variable by first appearance.
  std::vector<std::string> projection() const;
  // Throws std::invalid_argument when a selected or filtered variable does
  // not occur in any pattern, or a subject slot holds a non-Guid term.
  void validate() const;
};

// Subset grammar:
//   [PREFIX p: <iri>]* SELECT [DISTINCT] (?v+ | *) WHERE { patterns }
// where patterns are separated by '.', with ';' (same subject) and ','
// (same subject and predicate) continuations, and FILTER(?v op number)
// clauses may appear between them. Predicates must be bound vocabulary
// terms. OPTIONAL, UNION, GRAPH, MINUS, BIND, VALUES, ORDER/LIMIT/GROUP,
// property paths and 'a' are rejected as unsupported features.
Query parse_query(std::string_view text);

struct BindingSet {
  std::vector<std::string> variables;
  std::vector<std::vector<Term>> rows;  // sorted, duplicate-free

  std::size_t size() const { return rows.size(); }
  bool empty() const { return rows.empty(); }
  // Column values for one variable, in row order.
  std::vector<Term> column(std::string_view var) const;
};

// Exact solutions of the conjunctive query under set semantics. Patterns
// are joined most-selective-first given the bindings made so far.
BindingSet evaluate(const ProvGraph& graph, const Query& query);

// Header line of "?var" names, then one tab-separated line per row with
// values in Turtle form.
std::string to_tsv(const BindingSet& bindings);
// {"variables": [...], "rows": [{"var": {"type": ..., "value": ...}}, ...]}
std::string to_json(const BindingSet& bindings);

}  // namespace provio
