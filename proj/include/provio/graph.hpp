#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "provio/model.hpp"

namespace provio {

// Raised for any mutation that would break graph invariants: conflicting node
// registration, dangling references, or domain/range violations.
class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An indexed set of provenance nodes and triples. Triples are never removed,
// so index postings are stable positions into the triple vector.
class ProvGraph {
 public:
  // Registers `node` together with its two classification triples
  // (wasMemberOf super-class, subClass literal). Idempotent for identical
  // content; returns false when the node was already present.
  bool add_node(const ProvNode& node);

  // Inserts a triple after checking referential integrity and the
  // domain/range rules of its predicate. Returns false for duplicates.
  bool add_triple(const Triple& triple);

  const ProvNode* find_node(const Guid& guid) const;
  bool contains(const Triple& triple) const;

  // Triples matching every bound position. Uses the narrowest index among
  // the bound positions; only scans everything when nothing is bound.
  std::vector<Triple> scan(const std::optional<Guid>& subject = std::nullopt,
                           const std::optional<Predicate>& predicate = std::nullopt,
                           const std::optional<Term>& object = std::nullopt) const;

  // Number of triples scan() would inspect for the given bound positions.
  std::size_t estimate(const std::optional<Guid>& subject,
                       const std::optional<Predicate>& predicate,
                       const std::optional<Term>& object) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t triple_count() const { return triples_.size(); }
  bool empty() const { return nodes_.empty(); }

  // Insertion order.
  const std::vector<Triple>& triples() const { return triples_; }
  // Sorted by GUID.
  std::vector<ProvNode> nodes() const;
  std::vector<Triple> sorted_triples() const;

  // Re-checks every invariant from scratch; throws GraphError on violation.
  void validate() const;

  friend bool operator==(const ProvGraph& a, const ProvGraph& b);

 private:
  // nullptr when no position is bound.
  const std::vector<std::size_t>* candidates(
      const std::optional<Guid>& subject,
      const std::optional<Predicate>& predicate,
      const std::optional<Term>& object) const;
  void check_triple(const Triple& t) const;

  std::unordered_map<Guid, ProvNode> nodes_;
  std::vector<Triple> triples_;
  std::unordered_set<Triple> triple_set_;
  std::unordered_map<Guid, std::vector<std::size_t>> by_subject_;
  std::unordered_map<Predicate, std::vector<std::size_t>> by_predicate_;
  std::unordered_map<Term, std::vector<std::size_t>> by_object_;
};

// Keyed union of nodes and set union of triples. Throws GraphError when two
// inputs disagree on a shared GUID.
ProvGraph merge(std::span<const ProvGraph> graphs);
ProvGraph merge(const ProvGraph& a, const ProvGraph& b);

}  // namespace provio
