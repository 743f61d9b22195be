#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "provio/graph.hpp"
#include "provio/query.hpp"

namespace provio {

// Bad arguments to the lineage and statistics calls: unknown nodes, wrong
// node classes, missing duration data.
class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LineageStep {
  Guid entity;    // predecessor
  Guid program;   // shared program agent
  Guid activity;  // the program's read of `entity`
  friend bool operator==(const LineageStep&, const LineageStep&) = default;
  friend auto operator<=>(const LineageStep&, const LineageStep&) = default;
};

struct LineageTree {
  Guid root;
  // levels[k-1] holds the steps found k hops back; sorted. Stops at the
  // first empty level.
  std::vector<std::vector<LineageStep>> levels;

  // Distinct predecessor entities of one level (1-based), sorted.
  std::vector<Guid> entities_at(std::size_t level) const;
};

// One backward hop from E finds every entity X with
//   E prov:wasAttributedTo P . X prov:wasAttributedTo P .
//   X provio:wasReadBy A . A prov:wasAssociatedWith P .
// Entities already reached (including the root) are not revisited.
LineageTree backward_lineage(const ProvGraph& graph, const Guid& object, unsigned levels);

// The plain three-statements-per-hop pattern without the agent join, as
// SPARQL text. Variables ?program_k, ?object_k, ?io_k for k = 1..levels.
std::string lineage_query_text(const Guid& object, unsigned levels);

struct IoStat {
  std::uint64_t count = 0;
  std::optional<std::int64_t> elapsed_us;
  friend bool operator==(const IoStat&, const IoStat&) = default;
};

// Activity count (and summed provio:elapsed) per Activity sub-class;
// classes without events are omitted. Throws QueryError when durations
// are requested but the graph carries none.
std::map<SubClass, IoStat> io_stats(const ProvGraph& graph, bool with_duration);

struct AgentChain {
  Guid program;
  Guid thread;
  Guid user;
  friend auto operator<=>(const AgentChain&, const AgentChain&) = default;
};

// Program -> thread -> user chains of every program the file is
// attributed to. Throws QueryError unless `file` is a File entity.
std::vector<AgentChain> file_modifiers(const ProvGraph& graph, const Guid& file);

struct ConfigAccuracy {
  std::string config;
  Literal version;
  Literal accuracy;
};

// One row per (Configuration, ns1:Version, provio:hasAccuracy) pairing,
// sorted by version, then accuracy, then name.
std::vector<ConfigAccuracy> config_accuracy_map(const ProvGraph& graph);

struct QualityCondition {
  Predicate property;
  Comparator op;
  double bound;
};

// "ns1:hasValue<3.2"
QualityCondition parse_quality(std::string_view text);

// "batch_size=256" -> ("batch_size", 256). The value becomes an integer or
// decimal literal when it reads as one, a string otherwise.
std::pair<std::string, Literal> parse_constraint(std::string_view text);

// A constraint name matches a Configuration node whose label equals it
// ignoring case, optionally followed by "_<variant>" (batch_size matches
// Batch_Size_A). Returns the Checkpoints influenced by a matching
// configuration whose ns1:hasValue equals the required value, for every
// constraint. With `quality`, a checkpoint survives when the property's
// numeric values on it and on Metrics nodes linked to it by prov:influenced
// exist and all satisfy the condition. Throws QueryError for a constraint
// name that matches no configuration.
std::vector<Guid> consistent_checkpoints(
    const ProvGraph& graph, const std::vector<std::pair<std::string, Literal>>& constraints,
    const std::optional<QualityCondition>& quality = std::nullopt);

}  // namespace provio
