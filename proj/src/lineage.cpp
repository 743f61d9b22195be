#include "provio/lineage.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "provio/turtle.hpp"

namespace provio {

std::vector<Guid> LineageTree::entities_at(std::size_t level) const {
  std::set<Guid> out;
  if (level >= 1 && level <= levels.size()) {
    for (const auto& s : levels[level - 1]) out.insert(s.entity);
  }
  return {out.begin(), out.end()};
}

namespace {

const ProvNode& require_node(const ProvGraph& g, const Guid& guid, SuperClass super,
                             std::string_view what) {
  const ProvNode* node = g.find_node(guid);
  if (!node) throw QueryError("unknown " + std::string(what) + " <" + guid.value + ">");
  if (node->super_class() != super) {
    throw QueryError("<" + guid.value + "> is not an " + std::string(super_class_name(super)));
  }
  return *node;
}

std::vector<Guid> objects_of(const ProvGraph& g, const Guid& s, Predicate p) {
  std::vector<Guid> out;
  for (const Triple& t : g.scan(s, p)) {
    if (const auto* o = std::get_if<Guid>(&t.object)) out.push_back(*o);
  }
  return out;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool name_matches(std::string_view label, std::string_view name) {
  auto l = lower(label);
  auto n = lower(name);
  if (l == n) return true;
  if (l.size() <= n.size() + 1 || !l.starts_with(n) || l[n.size()] != '_') return false;
  return l.find('_', n.size() + 1) == std::string::npos;
}

}  // namespace

LineageTree backward_lineage(const ProvGraph& graph, const Guid& object, unsigned levels) {
  require_node(graph, object, SuperClass::Entity, "object");
  if (levels == 0) throw QueryError("lineage needs at least one level");

  LineageTree tree{object, {}};
  std::set<Guid> visited{object};
  std::set<Guid> frontier{object};
  for (unsigned k = 1; k <= levels; ++k) {
    std::set<LineageStep> steps;
    for (const Guid& e : frontier) {
      for (const Guid& program : objects_of(graph, e, Predicate::WasAttributedTo)) {
        for (const Triple& t : graph.scan(std::nullopt, Predicate::WasAttributedTo, program)) {
          const Guid& x = t.subject;
          if (visited.contains(x)) continue;
          for (const Guid& read : objects_of(graph, x, Predicate::WasReadBy)) {
            if (graph.contains({read, Predicate::WasAssociatedWith, program})) {
              steps.insert({x, program, read});
            }
          }
        }
      }
    }
    if (steps.empty()) break;
    frontier.clear();
    for (const auto& s : steps) {
      frontier.insert(s.entity);
      visited.insert(s.entity);
    }
    tree.levels.emplace_back(steps.begin(), steps.end());
  }
  return tree;
}

std::string lineage_query_text(const Guid& object, unsigned levels) {
  std::string out = "SELECT * WHERE {\n";
  for (unsigned k = 1; k <= levels; ++k) {
    auto n = std::to_string(k);
    std::string prev = k == 1 ? format_term(object) : "?object_" + std::to_string(k - 1);
    out += "  " + prev + " prov:wasAttributedTo ?program_" + n + " .\n";
    out += "  ?object_" + n + " prov:wasAttributedTo ?program_" + n + " ;\n";
    out += "      provio:wasReadBy ?io_" + n + " .\n";
  }
  out += "}\n";
  return out;
}

std::map<SubClass, IoStat> io_stats(const ProvGraph& graph, bool with_duration) {
  std::map<SubClass, IoStat> out;
  for (const ProvNode& n : graph.nodes()) {
    if (n.super_class() == SuperClass::Activity) ++out[n.sub_class].count;
  }
  if (!with_duration) return out;
  auto elapsed = graph.scan(std::nullopt, Predicate::Elapsed);
  if (elapsed.empty()) throw QueryError("durations not tracked in this graph");
  for (auto& [cls, stat] : out) stat.elapsed_us = 0;
  for (const Triple& t : elapsed) {
    const ProvNode* n = graph.find_node(t.subject);
    const auto& lit = std::get<Literal>(t.object);
    *out[n->sub_class].elapsed_us += std::get<std::int64_t>(lit.value);
  }
  return out;
}

std::vector<AgentChain> file_modifiers(const ProvGraph& graph, const Guid& file) {
  const ProvNode& node = require_node(graph, file, SuperClass::Entity, "file");
  if (node.sub_class != SubClass::File) {
    throw QueryError("<" + file.value + "> is a " + std::string(sub_class_name(node.sub_class)) +
                     ", not a File");
  }
  std::set<AgentChain> chains;
  for (const Guid& p : objects_of(graph, file, Predicate::WasAttributedTo)) {
    for (const Guid& t : objects_of(graph, p, Predicate::ActedOnBehalfOf)) {
      for (const Guid& u : objects_of(graph, t, Predicate::ActedOnBehalfOf)) {
        chains.insert({p, t, u});
      }
    }
  }
  return {chains.begin(), chains.end()};
}

std::vector<ConfigAccuracy> config_accuracy_map(const ProvGraph& graph) {
  std::vector<ConfigAccuracy> rows;
  for (const ProvNode& n : graph.nodes()) {
    if (n.sub_class != SubClass::Configuration) continue;
    auto versions = graph.scan(n.guid, Predicate::Version);
    auto accuracies = graph.scan(n.guid, Predicate::HasAccuracy);
    for (const auto& v : versions) {
      for (const auto& a : accuracies) {
        rows.push_back({n.label, std::get<Literal>(v.object), std::get<Literal>(a.object)});
      }
    }
  }
  std::sort(rows.begin(), rows.end(), [](const ConfigAccuracy& a, const ConfigAccuracy& b) {
    if (auto c = compare_values(a.version, b.version); c != 0) return c < 0;
    if (auto c = compare_values(a.accuracy, b.accuracy); c != 0) return c < 0;
    return a.config < b.config;
  });
  return rows;
}

QualityCondition parse_quality(std::string_view text) {
  static const std::pair<std::string_view, Comparator> ops[] = {
      {"<=", Comparator::LessEqual}, {">=", Comparator::GreaterEqual},
      {"<", Comparator::Less},       {">", Comparator::Greater},
      {"=", Comparator::Equal}};
  auto at = text.find_first_of("<>=");
  if (at == std::string_view::npos || at == 0) {
    throw std::invalid_argument("quality condition must look like prop<bound: '" +
                                std::string(text) + "'");
  }
  Comparator op = Comparator::Equal;
  std::size_t op_len = 0;
  for (const auto& [sym, c] : ops) {
    if (text.substr(at).starts_with(sym)) {
      op = c;
      op_len = sym.size();
      break;
    }
  }
  auto prop_text = text.substr(0, at);
  auto prop = parse_predicate(prop_text);
  if (!prop || !is_property(*prop)) {
    throw std::invalid_argument("unknown property '" + std::string(prop_text) + "'");
  }
  auto num = text.substr(at + op_len);
  double bound = 0;
  auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), bound);
  if (num.empty() || ec != std::errc() || ptr != num.data() + num.size()) {
    throw std::invalid_argument("bad quality bound '" + std::string(num) + "'");
  }
  return {*prop, op, bound};
}

std::pair<std::string, Literal> parse_constraint(std::string_view text) {
  auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0 || eq + 1 == text.size()) {
    throw std::invalid_argument("constraint must look like name=value: '" + std::string(text) +
                                "'");
  }
  std::string name(text.substr(0, eq));
  auto value = text.substr(eq + 1);
  const char* end = value.data() + value.size();
  std::int64_t i = 0;
  if (auto [ptr, ec] = std::from_chars(value.data(), end, i); ec == std::errc() && ptr == end) {
    return {name, Literal::integer(i)};
  }
  double d = 0;
  if (auto [ptr, ec] = std::from_chars(value.data(), end, d);
      ec == std::errc() && ptr == end && std::isfinite(d)) {
    return {name, Literal::decimal(d)};
  }
  return {name, Literal::string(std::string(value))};
}

std::vector<Guid> consistent_checkpoints(
    const ProvGraph& graph, const std::vector<std::pair<std::string, Literal>>& constraints,
    const std::optional<QualityCondition>& quality) {
  auto all_nodes = graph.nodes();
  std::set<Guid> result;
  for (const ProvNode& n : all_nodes) {
    if (n.sub_class == SubClass::Checkpoint) result.insert(n.guid);
  }

  for (const auto& [name, required] : constraints) {
    std::set<Guid> reached;
    bool any_config = false;
    for (const ProvNode& n : all_nodes) {
      if (n.sub_class != SubClass::Configuration || !name_matches(n.label, name)) continue;
      any_config = true;
      bool value_ok = false;
      for (const Triple& t : graph.scan(n.guid, Predicate::HasValue)) {
        if (compare_values(std::get<Literal>(t.object), required) == 0) value_ok = true;
      }
      if (!value_ok) continue;
      for (const Guid& target : objects_of(graph, n.guid, Predicate::Influenced)) {
        reached.insert(target);
      }
    }
    if (!any_config) throw QueryError("unknown configuration '" + name + "'");
    std::set<Guid> kept;
    std::set_intersection(result.begin(), result.end(), reached.begin(), reached.end(),
                          std::inserter(kept, kept.end()));
    result = std::move(kept);
  }

  std::vector<Guid> out;
  for (const Guid& ckpt : result) {
    if (quality) {
      std::vector<Guid> sources{ckpt};
      for (const Triple& t : graph.scan(std::nullopt, Predicate::Influenced, ckpt)) {
        const ProvNode* m = graph.find_node(t.subject);
        if (m && m->sub_class == SubClass::Metrics) sources.push_back(t.subject);
      }
      for (const Guid& g : objects_of(graph, ckpt, Predicate::Influenced)) {
        const ProvNode* m = graph.find_node(g);
        if (m && m->sub_class == SubClass::Metrics) sources.push_back(g);
      }
      std::size_t seen = 0;
      bool ok = true;
      for (const Guid& src : sources) {
        for (const Triple& t : graph.scan(src, quality->property)) {
          auto v = std::get<Literal>(t.object).as_number();
          if (!v) continue;
          ++seen;
          if (!compare_with(*v, quality->op, quality->bound)) ok = false;
        }
      }
      if (seen == 0 || !ok) continue;
    }
    out.push_back(ckpt);
  }
  return out;
}

}  // namespace provio
