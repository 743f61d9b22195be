#pragma once

// Provenance vocabulary: class taxonomy, predicates, node identity, terms.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

namespace provio {

inline constexpr std::string_view kProvNamespace = "http://www.w3.org/ns/prov#";
inline constexpr std::string_view kProvioNamespace = "http://provio.dev/ns#";
inline constexpr std::string_view kExtNamespace = "http://provio.dev/ext#";

enum class SuperClass : std::uint8_t { Entity, Activity, Agent, Extensible };

enum class SubClass : std::uint8_t {
  // Entity
  Directory,
  File,
  Group,
  Dataset,
  Attribute,
  Datatype,
  Link,
  // Activity
  Create,
  Open,
  Read,
  Write,
  Fsync,
  Rename,
  // Agent
  User,
  Rank,
  Program,
  Thread,
  // Extensible
  Checkpoint,
  Type,
  Configuration,
  Metrics,
};

inline constexpr std::size_t kSubClassCount = 21;

// Declaration order doubles as the serialization order of predicates within
// a subject record.
enum class Predicate : std::uint8_t {
  WasMemberOf,
  SubClassOf,  // provio:subClass
  ActedOnBehalfOf,
  WasAssociatedWith,
  WasAttributedTo,
  WasDerivedFrom,
  WasCreatedBy,
  WasOpenedBy,
  WasReadBy,
  WasWrittenBy,
  WasFlushedBy,
  WasModifiedBy,
  Influenced,
  Elapsed,
  HasAccuracy,
  Version,
  HasValue,
};

inline constexpr std::size_t kPredicateCount = 17;

std::span<const SubClass> all_sub_classes();
std::span<const SubClass> sub_classes_of(SuperClass super);
std::span<const Predicate> all_predicates();

SuperClass super_of(SubClass sub);

// "Dataset"
std::string_view sub_class_name(SubClass sub);
// "dataset"
std::string sub_class_key(SubClass sub);
// Accepts either spelling, case-insensitive.
std::optional<SubClass> parse_sub_class(std::string_view text);

std::string_view super_class_name(SuperClass super);
// Prefixed IRI of the super-class, e.g. "prov:Activity".
std::string_view super_class_iri(SuperClass super);
std::optional<SuperClass> parse_super_class_iri(std::string_view prefixed);

// Prefixed form, e.g. "provio:wasReadBy".
std::string_view predicate_name(Predicate p);
// Local part only, e.g. "wasReadBy".
std::string_view predicate_local_name(Predicate p);
std::optional<Predicate> parse_predicate(std::string_view prefixed);

// Property predicates take literal objects; all others are relations.
bool is_property(Predicate p);

// Maps an I/O API sub-class to its entity relation (Create -> wasCreatedBy).
// Throws std::invalid_argument for non-Activity sub-classes.
Predicate relation_for_io(SubClass api);

// Inverse of relation_for_io; nullopt when `p` is not an I/O relation.
std::optional<SubClass> io_class_for_relation(Predicate p);

struct Guid {
  std::string value;

  Guid() = default;
  explicit Guid(std::string v) : value(std::move(v)) {}

  bool empty() const { return value.empty(); }
  friend bool operator==(const Guid&, const Guid&) = default;
  friend auto operator<=>(const Guid& a, const Guid& b) {
    return a.value <=> b.value;
  }
};

struct Literal {
  std::variant<std::string, std::int64_t, double> value;

  static Literal string(std::string s) { return Literal{std::move(s)}; }
  static Literal integer(std::int64_t v) { return Literal{v}; }
  // Throws std::invalid_argument for NaN or infinities.
  static Literal decimal(double v);

  bool is_string() const { return value.index() == 0; }
  bool is_numeric() const { return value.index() != 0; }
  std::optional<double> as_number() const;
  // Lexical form without quotes: "v3", "256", "0.25".
  std::string text() const;

  friend bool operator==(const Literal&, const Literal&) = default;
};

// Total order: strings < integers < decimals, then by value.
std::strong_ordering compare(const Literal& a, const Literal& b);

// Compares two literals the way query filters and constraint matching do:
// numerically when both are numeric, lexically otherwise.
std::partial_ordering compare_values(const Literal& a, const Literal& b);

// The object of a triple: a node, a super-class IRI, or a literal.
using Term = std::variant<Guid, SuperClass, Literal>;

std::strong_ordering compare(const Term& a, const Term& b);

struct Triple {
  Guid subject;
  Predicate predicate;
  Term object;

  friend bool operator==(const Triple&, const Triple&) = default;
};

std::strong_ordering compare(const Triple& a, const Triple& b);
inline bool operator<(const Triple& a, const Triple& b) {
  return compare(a, b) < 0;
}

struct ProvNode {
  Guid guid;
  SubClass sub_class;
  std::string label;

  SuperClass super_class() const { return super_of(sub_class); }
  friend bool operator==(const ProvNode&, const ProvNode&) = default;
};

// Identity of the running process: who runs what, where.
struct AgentContext {
  std::string user;
  std::string program;
  std::uint32_t rank = 0;
  // Defaults to "MPI_rank_<rank>" when empty.
  std::string thread_label;

  std::string effective_thread_label() const;
};

// Node identifiers:
//   Agents      "<label>--a<8 hex digits>", stable across processes
//   Entities    the canonical path itself
//   Extensible  the name itself
//   Activities  "<label>--b<rank>.<seq>", unique per instance
// Thread and Rank hashes also cover the user and program so that equally
// named threads of different programs stay distinct.
Guid mint_guid(SubClass sub, std::string_view label, const AgentContext& ctx,
               std::uint64_t seq = 0);

// Recovers the human-readable label encoded in a GUID of the given class;
// nullopt when the GUID does not follow the scheme for that class.
std::optional<std::string> label_from_guid(SubClass sub, std::string_view guid);

ProvNode make_node(SubClass sub, std::string_view label,
                   const AgentContext& ctx, std::uint64_t seq = 0);

std::uint64_t stable_hash(std::string_view bytes);

}  // namespace provio

template <>
struct std::hash<provio::Guid> {
  std::size_t operator()(const provio::Guid& g) const noexcept {
    return std::hash<std::string>{}(g.value);
  }
};

template <>
struct std::hash<provio::Literal> {
  std::size_t operator()(const provio::Literal& l) const noexcept;
};

template <>
struct std::hash<provio::Term> {
  std::size_t operator()(const provio::Term& t) const noexcept;
};

template <>
struct std::hash<provio::Triple> {
  std::size_t operator()(const provio::Triple& t) const noexcept;
};
