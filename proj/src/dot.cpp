#include "provio/dot.hpp"

#include <map>
#include <stdexcept>

namespace provio {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

const char* shape_of(SuperClass s) {
  switch (s) {
    case SuperClass::Entity: return "box";
    case SuperClass::Activity: return "ellipse";
    case SuperClass::Agent: return "house";
    case SuperClass::Extensible: return "note";
  }
  return "box";
}

const char* fill_of(SuperClass s) {
  switch (s) {
    case SuperClass::Entity: return "#fff2cc";
    case SuperClass::Activity: return "#dae8fc";
    case SuperClass::Agent: return "#e1d5e7";
    case SuperClass::Extensible: return "#d5e8d4";
  }
  return "white";
}

constexpr const char* kHighlight = ", color=blue, fontcolor=blue, penwidth=2";

}  // namespace

RenderSpec lineage_highlight(const ProvGraph& graph, const LineageTree& tree) {
  RenderSpec spec;
  spec.highlight_nodes.insert(tree.root);
  std::vector<Guid> previous{tree.root};
  for (const auto& level : tree.levels) {
    std::set<Guid> current;
    for (const auto& step : level) {
      spec.highlight_nodes.insert(step.entity);
      spec.highlight_nodes.insert(step.program);
      spec.highlight_nodes.insert(step.activity);
      spec.highlight_edges.emplace(step.entity, Predicate::WasAttributedTo, step.program);
      spec.highlight_edges.emplace(step.entity, Predicate::WasReadBy, step.activity);
      spec.highlight_edges.emplace(step.activity, Predicate::WasAssociatedWith, step.program);
      current.insert(step.entity);
    }
    // The successor side of each hop is attributed to the same program.
    for (const auto& step : level) {
      for (const Guid& prev : previous) {
        if (graph.contains({prev, Predicate::WasAttributedTo, step.program})) {
          spec.highlight_edges.emplace(prev, Predicate::WasAttributedTo, step.program);
        }
      }
    }
    previous.assign(current.begin(), current.end());
  }
  return spec;
}

std::string to_dot(const ProvGraph& graph, const RenderSpec& spec) {
  for (const Guid& g : spec.highlight_nodes) {
    if (!graph.find_node(g)) {
      throw std::invalid_argument("highlighted node <" + g.value + "> is not in the graph");
    }
  }
  for (const auto& [s, p, o] : spec.highlight_edges) {
    if (!graph.contains({s, p, o})) {
      throw std::invalid_argument("highlighted edge <" + s.value + "> " +
                                  std::string(predicate_name(p)) + " <" + o.value +
                                  "> is not in the graph");
    }
  }

  auto nodes = graph.nodes();
  auto triples = graph.sorted_triples();

  // Node id each GUID is drawn as; collapsed activities share one id.
  std::map<Guid, std::string> drawn_as;
  std::map<SubClass, std::size_t> collapsed;
  for (const ProvNode& n : nodes) {
    if (spec.collapse && n.super_class() == SuperClass::Activity) {
      drawn_as[n.guid] = "activity:" + std::string(sub_class_name(n.sub_class));
      ++collapsed[n.sub_class];
    } else {
      drawn_as[n.guid] = n.guid.value;
    }
  }

  std::map<Guid, std::vector<std::string>> property_lines;
  for (const Triple& t : triples) {
    if (!is_property(t.predicate) || t.predicate == Predicate::SubClassOf) continue;
    const auto& lit = std::get<Literal>(t.object);
    property_lines[t.subject].push_back(std::string(predicate_local_name(t.predicate)) + ": " +
                                        lit.text());
  }

  std::string out;
  out += "// Provenance graph.\n";
  out += "// Shapes: Entity=box, Activity=ellipse, Agent=house, Extensible=note.\n";
  out += "// Property triples appear as extra label lines; blue marks highlights.\n";
  out += "digraph prov {\n";
  if (!nodes.empty()) {
    out += "  rankdir=BT;\n";
    out += "  node [style=filled, fontname=\"Helvetica\"];\n";
    out += "  edge [fontname=\"Helvetica\", fontsize=10];\n";
  }
  for (const ProvNode& n : nodes) {
    if (spec.collapse && n.super_class() == SuperClass::Activity) continue;
    std::string label = n.label;
    for (const auto& line : property_lines[n.guid]) label += "\n" + line;
    out += "  " + quote(n.guid.value) + " [shape=" + shape_of(n.super_class()) +
           ", fillcolor=" + quote(fill_of(n.super_class())) + ", label=" + quote(label);
    if (spec.highlight_nodes.contains(n.guid)) out += kHighlight;
    out += "];\n";
  }
  for (const auto& [sub, count] : collapsed) {
    std::string id = "activity:" + std::string(sub_class_name(sub));
    bool hl = false;
    for (const Guid& g : spec.highlight_nodes) {
      if (drawn_as[g] == id) hl = true;
    }
    out += "  " + quote(id) + " [shape=ellipse, peripheries=2, fillcolor=" +
           quote(fill_of(SuperClass::Activity)) + ", label=" +
           quote(std::string(sub_class_name(sub)) + " x" + std::to_string(count));
    if (hl) out += kHighlight;
    out += "];\n";
  }

  // Collapsed endpoints can make several triples draw as one edge.
  std::vector<std::tuple<std::string, Predicate, std::string>> order;
  std::map<std::tuple<std::string, Predicate, std::string>, bool> edges;
  for (const Triple& t : triples) {
    const auto* obj = std::get_if<Guid>(&t.object);
    if (is_property(t.predicate) || !obj) continue;
    std::tuple key{drawn_as[t.subject], t.predicate, drawn_as[*obj]};
    bool hl = spec.highlight_edges.contains({t.subject, t.predicate, *obj});
    auto [it, fresh] = edges.emplace(key, hl);
    if (fresh) {
      order.push_back(key);
    } else {
      it->second = it->second || hl;
    }
  }
  for (const auto& key : order) {
    const auto& [from, pred, to] = key;
    out += "  " + quote(from) + " -> " + quote(to) + " [label=" +
           quote(predicate_local_name(pred));
    if (edges[key]) out += kHighlight;
    out += "];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace provio
