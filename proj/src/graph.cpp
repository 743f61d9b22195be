#include "provio/graph.hpp"

#include <algorithm>

namespace provio {

namespace {

std::string describe(const Guid& g) { return "<" + g.value + ">"; }

SuperClass require_super(const ProvNode* node, const Guid& guid,
                         std::string_view role) {
  if (node == nullptr) {
    throw GraphError("unregistered " + std::string(role) + " " + describe(guid));
  }
  return node->super_class();
}

}  // namespace

bool ProvGraph::add_node(const ProvNode& node) {
  if (node.label.empty()) {
    throw GraphError("node " + describe(node.guid) + " has an empty label");
  }
  auto decoded = label_from_guid(node.sub_class, node.guid.value);
  if (!decoded || *decoded != node.label) {
    throw GraphError("GUID " + describe(node.guid) +
                     " does not encode label '" + node.label + "' for a " +
                     std::string(sub_class_name(node.sub_class)));
  }
  if (auto it = nodes_.find(node.guid); it != nodes_.end()) {
    if (it->second == node) return false;
    throw GraphError("conflicting registration of " + describe(node.guid) +
                     ": " + std::string(sub_class_name(it->second.sub_class)) +
                     " vs " + std::string(sub_class_name(node.sub_class)));
  }
  nodes_.emplace(node.guid, node);
  add_triple({node.guid, Predicate::WasMemberOf, node.super_class()});
  add_triple({node.guid, Predicate::SubClassOf,
              Literal::string(std::string(sub_class_name(node.sub_class)))});
  return true;
}

void ProvGraph::check_triple(const Triple& t) const {
  const ProvNode* subject = find_node(t.subject);
  SuperClass s = require_super(subject, t.subject, "subject");
  const std::string pname(predicate_name(t.predicate));

  if (is_property(t.predicate)) {
    const auto* lit = std::get_if<Literal>(&t.object);
    if (lit == nullptr) {
      throw GraphError(pname + " requires a literal object");
    }
    if (t.predicate == Predicate::SubClassOf &&
        *lit != Literal::string(std::string(sub_class_name(subject->sub_class)))) {
      throw GraphError(pname + " of " + describe(t.subject) +
                       " disagrees with its registered sub-class");
    }
    if (t.predicate == Predicate::Elapsed) {
      const auto* v = std::get_if<std::int64_t>(&lit->value);
      if (s != SuperClass::Activity || v == nullptr || *v < 0) {
        throw GraphError(pname +
                         " takes an Activity subject and a non-negative integer");
      }
    }
    return;
  }

  if (t.predicate == Predicate::WasMemberOf) {
    const auto* cls = std::get_if<SuperClass>(&t.object);
    if (cls == nullptr || *cls != s) {
      throw GraphError(pname + " of " + describe(t.subject) +
                       " must name its own super-class");
    }
    return;
  }

  const auto* target = std::get_if<Guid>(&t.object);
  if (target == nullptr) {
    throw GraphError(pname + " requires a node object");
  }
  const ProvNode* object = find_node(*target);
  SuperClass o = require_super(object, *target, "object");

  auto expect = [&](bool ok, std::string_view rule) {
    if (!ok) {
      throw GraphError("domain/range violation: " + pname + " is " +
                       std::string(rule) + " (got " +
                       std::string(super_class_name(s)) + " -> " +
                       std::string(super_class_name(o)) + ")");
    }
  };
  switch (t.predicate) {
    case Predicate::WasAttributedTo:
      expect(s == SuperClass::Entity && o == SuperClass::Agent, "Entity -> Agent");
      break;
    case Predicate::ActedOnBehalfOf:
      expect(s == SuperClass::Agent && o == SuperClass::Agent, "Agent -> Agent");
      break;
    case Predicate::WasAssociatedWith:
      expect(s == SuperClass::Activity && o == SuperClass::Agent,
             "Activity -> Agent");
      break;
    case Predicate::WasDerivedFrom:
      expect(s == SuperClass::Entity && o == SuperClass::Entity,
             "Entity -> Entity");
      break;
    case Predicate::Influenced:
      expect(s == SuperClass::Extensible &&
                 (o == SuperClass::Extensible || o == SuperClass::Entity),
             "Extensible -> Extensible|Entity");
      break;
    default: {
      auto api = io_class_for_relation(t.predicate);
      expect(s == SuperClass::Entity && o == SuperClass::Activity,
             "Entity -> Activity");
      if (api != object->sub_class) {
        throw GraphError(pname + " cannot point at a " +
                         std::string(sub_class_name(object->sub_class)) +
                         " activity");
      }
    }
  }
}

bool ProvGraph::add_triple(const Triple& triple) {
  if (triple_set_.contains(triple)) return false;
  check_triple(triple);
  std::size_t pos = triples_.size();
  triples_.push_back(triple);
  triple_set_.insert(triple);
  by_subject_[triple.subject].push_back(pos);
  by_predicate_[triple.predicate].push_back(pos);
  by_object_[triple.object].push_back(pos);
  return true;
}

const ProvNode* ProvGraph::find_node(const Guid& guid) const {
  auto it = nodes_.find(guid);
  return it == nodes_.end() ? nullptr : &it->second;
}

bool ProvGraph::contains(const Triple& triple) const {
  return triple_set_.contains(triple);
}

const std::vector<std::size_t>* ProvGraph::candidates(
    const std::optional<Guid>& subject, const std::optional<Predicate>& predicate,
    const std::optional<Term>& object) const {
  static const std::vector<std::size_t> kNone;
  const std::vector<std::size_t>* best = nullptr;
  auto consider = [&](const std::vector<std::size_t>* list) {
    if (best == nullptr || list->size() < best->size()) best = list;
  };
  auto lookup = [&](const auto& index, const auto& key) {
    auto it = index.find(key);
    consider(it == index.end() ? &kNone : &it->second);
  };
  if (subject) lookup(by_subject_, *subject);
  if (object) lookup(by_object_, *object);
  if (predicate) lookup(by_predicate_, *predicate);
  return best;
}

std::size_t ProvGraph::estimate(const std::optional<Guid>& subject,
                                const std::optional<Predicate>& predicate,
                                const std::optional<Term>& object) const {
  auto size_of = [](const auto& index, const auto& key) -> std::size_t {
    auto it = index.find(key);
    return it == index.end() ? 0 : it->second.size();
  };
  std::size_t best = triples_.size();
  if (subject) best = std::min(best, size_of(by_subject_, *subject));
  if (object) best = std::min(best, size_of(by_object_, *object));
  if (predicate) best = std::min(best, size_of(by_predicate_, *predicate));
  return best;
}

std::vector<Triple> ProvGraph::scan(const std::optional<Guid>& subject,
                                    const std::optional<Predicate>& predicate,
                                    const std::optional<Term>& object) const {
  const auto* positions = candidates(subject, predicate, object);
  std::vector<Triple> out;
  auto matches = [&](const Triple& t) {
    return (!subject || t.subject == *subject) &&
           (!predicate || t.predicate == *predicate) &&
           (!object || t.object == *object);
  };
  if (positions == nullptr) return triples_;
  for (std::size_t pos : *positions) {
    if (matches(triples_[pos])) out.push_back(triples_[pos]);
  }
  return out;
}

std::vector<ProvNode> ProvGraph::nodes() const {
  std::vector<ProvNode> out;
  out.reserve(nodes_.size());
  for (const auto& [_, node] : nodes_) out.push_back(node);
  std::sort(out.begin(), out.end(),
            [](const ProvNode& a, const ProvNode& b) { return a.guid < b.guid; });
  return out;
}

std::vector<Triple> ProvGraph::sorted_triples() const {
  std::vector<Triple> out = triples_;
  std::sort(out.begin(), out.end());
  return out;
}

void ProvGraph::validate() const {
  std::unordered_map<Guid, int> membership;
  for (const Triple& t : triples_) {
    check_triple(t);
    if (t.predicate == Predicate::WasMemberOf) ++membership[t.subject];
  }
  for (const auto& [guid, node] : nodes_) {
    if (membership[guid] != 1) {
      throw GraphError(describe(guid) +
                       " must have exactly one prov:wasMemberOf triple");
    }
  }
  if (triple_set_.size() != triples_.size()) {
    throw GraphError("duplicate triples in graph");
  }
}

bool operator==(const ProvGraph& a, const ProvGraph& b) {
  return a.nodes_ == b.nodes_ && a.triple_set_ == b.triple_set_;
}

ProvGraph merge(std::span<const ProvGraph> graphs) {
  ProvGraph out;
  for (const ProvGraph& g : graphs) {
    for (const ProvNode& n : g.nodes()) out.add_node(n);
  }
  for (const ProvGraph& g : graphs) {
    for (const Triple& t : g.triples()) out.add_triple(t);
  }
  return out;
}

ProvGraph merge(const ProvGraph& a, const ProvGraph& b) {
  const ProvGraph both[] = {a, b};
  return merge(both);
}

}  // namespace provio
