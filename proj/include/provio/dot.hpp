#pragma once

#include <set>
#include <string>
#include <tuple>

#include "provio/graph.hpp"
#include "provio/lineage.hpp"

namespace provio {

using Edge = std::tuple<Guid, Predicate, Guid>;

struct RenderSpec {
  std::set<Guid> highlight_nodes;
  std::set<Edge> highlight_edges;
  // Fold all Activity nodes of one sub-class into a single counted node.
  bool collapse = false;
};

// Nodes and edges along a lineage tree: root, predecessors, programs and
// read activities, with the attribution, read and association edges
// joining them.
RenderSpec lineage_highlight(const ProvGraph& graph, const LineageTree& tree);

// Graphviz text. One node per ProvNode (shape by super-class, property
// triples as extra label lines), one edge per relation triple between
// nodes, highlighted elements in blue. Throws std::invalid_argument when a
// highlighted node or edge is not in the graph.
std::string to_dot(const ProvGraph& graph, const RenderSpec& spec = {});

}  // namespace provio
