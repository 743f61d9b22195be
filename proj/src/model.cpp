#include "provio/model.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace provio {

namespace {

constexpr std::array<SubClass, kSubClassCount> kAllSubClasses = {
    SubClass::Directory,  SubClass::File,     SubClass::Group,
    SubClass::Dataset,    SubClass::Attribute, SubClass::Datatype,
    SubClass::Link,       SubClass::Create,   SubClass::Open,
    SubClass::Read,       SubClass::Write,    SubClass::Fsync,
    SubClass::Rename,     SubClass::User,     SubClass::Rank,
    SubClass::Program,    SubClass::Thread,   SubClass::Checkpoint,
    SubClass::Type,       SubClass::Configuration, SubClass::Metrics,
};

constexpr std::array<std::string_view, kSubClassCount> kSubClassNames = {
    "Directory", "File",   "Group",  "Dataset",    "Attribute", "Datatype",
    "Link",      "Create", "Open",   "Read",       "Write",     "Fsync",
    "Rename",    "User",   "Rank",   "Program",    "Thread",    "Checkpoint",
    "Type",      "Configuration", "Metrics",
};

constexpr std::array<Predicate, kPredicateCount> kAllPredicates = {
    Predicate::WasMemberOf,     Predicate::SubClassOf,
    Predicate::ActedOnBehalfOf, Predicate::WasAssociatedWith,
    Predicate::WasAttributedTo, Predicate::WasDerivedFrom,
    Predicate::WasCreatedBy,    Predicate::WasOpenedBy,
    Predicate::WasReadBy,       Predicate::WasWrittenBy,
    Predicate::WasFlushedBy,    Predicate::WasModifiedBy,
    Predicate::Influenced,      Predicate::Elapsed,
    Predicate::HasAccuracy,     Predicate::Version,
    Predicate::HasValue,
};

constexpr std::array<std::string_view, kPredicateCount> kPredicateNames = {
    "prov:wasMemberOf",       "provio:subClass",
    "prov:actedOnBehalfOf",   "prov:wasAssociatedWith",
    "prov:wasAttributedTo",   "prov:wasDerivedFrom",
    "provio:wasCreatedBy",    "provio:wasOpenedBy",
    "provio:wasReadBy",       "provio:wasWrittenBy",
    "provio:wasFlushedBy",    "provio:wasModifiedBy",
    "prov:influenced",        "provio:elapsed",
    "provio:hasAccuracy",     "ns1:Version",
    "ns1:hasValue",
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

std::string hex8(std::uint64_t h) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x",
                static_cast<unsigned>((h ^ (h >> 32)) & 0xffffffffu));
  return buf;
}

bool is_hex(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
  });
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return c >= '0' && c <= '9';
  });
}

template <typename T>
std::strong_ordering order_of(const T& a, const T& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

}  // namespace

std::span<const SubClass> all_sub_classes() { return kAllSubClasses; }

std::span<const SubClass> sub_classes_of(SuperClass super) {
  std::span<const SubClass> all = kAllSubClasses;
  switch (super) {
    case SuperClass::Entity: return all.subspan(0, 7);
    case SuperClass::Activity: return all.subspan(7, 6);
    case SuperClass::Agent: return all.subspan(13, 4);
    case SuperClass::Extensible: return all.subspan(17, 4);
  }
  return {};
}

std::span<const Predicate> all_predicates() { return kAllPredicates; }

SuperClass super_of(SubClass sub) {
  auto i = static_cast<std::size_t>(sub);
  if (i < 7) return SuperClass::Entity;
  if (i < 13) return SuperClass::Activity;
  if (i < 17) return SuperClass::Agent;
  return SuperClass::Extensible;
}

std::string_view sub_class_name(SubClass sub) {
  return kSubClassNames[static_cast<std::size_t>(sub)];
}

std::string sub_class_key(SubClass sub) {
  std::string key(sub_class_name(sub));
  for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return key;
}

std::optional<SubClass> parse_sub_class(std::string_view text) {
  for (SubClass s : kAllSubClasses) {
    if (iequals(sub_class_name(s), text)) return s;
  }
  return std::nullopt;
}

std::string_view super_class_name(SuperClass super) {
  switch (super) {
    case SuperClass::Entity: return "Entity";
    case SuperClass::Activity: return "Activity";
    case SuperClass::Agent: return "Agent";
    case SuperClass::Extensible: return "Extensible";
  }
  return "";
}

std::string_view super_class_iri(SuperClass super) {
  switch (super) {
    case SuperClass::Entity: return "prov:Entity";
    case SuperClass::Activity: return "prov:Activity";
    case SuperClass::Agent: return "prov:Agent";
    case SuperClass::Extensible: return "provio:Extensible";
  }
  return "";
}

std::optional<SuperClass> parse_super_class_iri(std::string_view prefixed) {
  for (auto s : {SuperClass::Entity, SuperClass::Activity, SuperClass::Agent,
                 SuperClass::Extensible}) {
    if (super_class_iri(s) == prefixed) return s;
  }
  return std::nullopt;
}

std::string_view predicate_name(Predicate p) {
  return kPredicateNames[static_cast<std::size_t>(p)];
}

std::string_view predicate_local_name(Predicate p) {
  auto name = predicate_name(p);
  return name.substr(name.find(':') + 1);
}

std::optional<Predicate> parse_predicate(std::string_view prefixed) {
  for (Predicate p : kAllPredicates) {
    if (predicate_name(p) == prefixed) return p;
  }
  return std::nullopt;
}

bool is_property(Predicate p) {
  switch (p) {
    case Predicate::SubClassOf:
    case Predicate::Elapsed:
    case Predicate::HasAccuracy:
    case Predicate::Version:
    case Predicate::HasValue:
      return true;
    default:
      return false;
  }
}

Predicate relation_for_io(SubClass api) {
  switch (api) {
    case SubClass::Create: return Predicate::WasCreatedBy;
    case SubClass::Open: return Predicate::WasOpenedBy;
    case SubClass::Read: return Predicate::WasReadBy;
    case SubClass::Write: return Predicate::WasWrittenBy;
    case SubClass::Fsync: return Predicate::WasFlushedBy;
    case SubClass::Rename: return Predicate::WasModifiedBy;
    default:
      throw std::invalid_argument("relation_for_io: " +
                                  std::string(sub_class_name(api)) +
                                  " is not an I/O API sub-class");
  }
}

std::optional<SubClass> io_class_for_relation(Predicate p) {
  switch (p) {
    case Predicate::WasCreatedBy: return SubClass::Create;
    case Predicate::WasOpenedBy: return SubClass::Open;
    case Predicate::WasReadBy: return SubClass::Read;
    case Predicate::WasWrittenBy: return SubClass::Write;
    case Predicate::WasFlushedBy: return SubClass::Fsync;
    case Predicate::WasModifiedBy: return SubClass::Rename;
    default: return std::nullopt;
  }
}

Literal Literal::decimal(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("decimal literal must be finite");
  }
  // Normalize negative zero so equal values serialize identically.
  if (v == 0.0) v = 0.0;
  return Literal{v};
}

std::optional<double> Literal::as_number() const {
  if (auto* i = std::get_if<std::int64_t>(&value)) return static_cast<double>(*i);
  if (auto* d = std::get_if<double>(&value)) return *d;
  return std::nullopt;
}

std::string Literal::text() const {
  if (auto* s = std::get_if<std::string>(&value)) return *s;
  if (auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
  double d = std::get<double>(value);
  char buf[400];
  auto res = std::to_chars(buf, buf + sizeof buf, d, std::chars_format::fixed);
  std::string out(buf, res.ptr);
  if (out.find('.') == std::string::npos) out += ".0";
  return out;
}

std::strong_ordering compare(const Literal& a, const Literal& b) {
  if (a.value.index() != b.value.index()) {
    return a.value.index() <=> b.value.index();
  }
  if (auto* s = std::get_if<std::string>(&a.value)) {
    return order_of(*s, std::get<std::string>(b.value));
  }
  if (auto* i = std::get_if<std::int64_t>(&a.value)) {
    return *i <=> std::get<std::int64_t>(b.value);
  }
  return order_of(std::get<double>(a.value), std::get<double>(b.value));
}

std::partial_ordering compare_values(const Literal& a, const Literal& b) {
  auto x = a.as_number();
  auto y = b.as_number();
  if (x && y) return *x <=> *y;
  return a.text() <=> b.text();
}

std::strong_ordering compare(const Term& a, const Term& b) {
  if (a.index() != b.index()) return a.index() <=> b.index();
  if (auto* g = std::get_if<Guid>(&a)) return *g <=> std::get<Guid>(b);
  if (auto* s = std::get_if<SuperClass>(&a)) return *s <=> std::get<SuperClass>(b);
  return compare(std::get<Literal>(a), std::get<Literal>(b));
}

std::strong_ordering compare(const Triple& a, const Triple& b) {
  if (auto c = a.subject <=> b.subject; c != 0) return c;
  if (auto c = a.predicate <=> b.predicate; c != 0) return c;
  return compare(a.object, b.object);
}

std::string AgentContext::effective_thread_label() const {
  return thread_label.empty() ? "MPI_rank_" + std::to_string(rank)
                              : thread_label;
}

std::uint64_t stable_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

Guid mint_guid(SubClass sub, std::string_view label, const AgentContext& ctx,
               std::uint64_t seq) {
  if (label.empty()) {
    throw std::invalid_argument("mint_guid: empty label");
  }
  switch (super_of(sub)) {
    case SuperClass::Entity:
    case SuperClass::Extensible:
      return Guid(std::string(label));
    case SuperClass::Activity:
      return Guid(std::string(label) + "--b" + std::to_string(ctx.rank) + "." +
                  std::to_string(seq));
    case SuperClass::Agent: {
      std::string key(sub_class_name(sub));
      key += '\0';
      key += label;
      if (sub == SubClass::Thread || sub == SubClass::Rank) {
        key += '\0';
        key += ctx.user;
        key += '\0';
        key += ctx.program;
      }
      return Guid(std::string(label) + "--a" + hex8(stable_hash(key)));
    }
  }
  return {};
}

std::optional<std::string> label_from_guid(SubClass sub, std::string_view guid) {
  if (guid.empty()) return std::nullopt;
  switch (super_of(sub)) {
    case SuperClass::Entity:
    case SuperClass::Extensible:
      return std::string(guid);
    case SuperClass::Agent: {
      // "<label>--a" + 8 hex digits
      if (guid.size() < 12) return std::nullopt;
      auto suffix = guid.substr(guid.size() - 11);
      if (suffix.substr(0, 3) != "--a" || !is_hex(suffix.substr(3))) {
        return std::nullopt;
      }
      return std::string(guid.substr(0, guid.size() - 11));
    }
    case SuperClass::Activity: {
      auto pos = guid.rfind("--b");
      if (pos == std::string_view::npos || pos == 0) return std::nullopt;
      auto tail = guid.substr(pos + 3);
      auto dot = tail.find('.');
      if (dot == std::string_view::npos || !is_digits(tail.substr(0, dot)) ||
          !is_digits(tail.substr(dot + 1))) {
        return std::nullopt;
      }
      return std::string(guid.substr(0, pos));
    }
  }
  return std::nullopt;
}

ProvNode make_node(SubClass sub, std::string_view label,
                   const AgentContext& ctx, std::uint64_t seq) {
  return ProvNode{mint_guid(sub, label, ctx, seq), sub, std::string(label)};
}

}  // namespace provio

std::size_t std::hash<provio::Literal>::operator()(
    const provio::Literal& l) const noexcept {
  std::size_t seed = l.value.index() * 0x9e3779b97f4a7c15ull;
  return std::visit(
      [seed](const auto& v) {
        return seed ^ std::hash<std::decay_t<decltype(v)>>{}(v);
      },
      l.value);
}

std::size_t std::hash<provio::Term>::operator()(
    const provio::Term& t) const noexcept {
  std::size_t seed = t.index() * 0x9e3779b97f4a7c15ull;
  return std::visit(
      [seed](const auto& v) {
        return seed ^ (std::hash<std::decay_t<decltype(v)>>{}(v) * 31);
      },
      t);
}

std::size_t std::hash<provio::Triple>::operator()(
    const provio::Triple& t) const noexcept {
  std::size_t h = std::hash<provio::Guid>{}(t.subject);
  h = h * 1099511628211ull ^ static_cast<std::size_t>(t.predicate);
  h = h * 1099511628211ull ^ std::hash<provio::Term>{}(t.object);
  return h;
}
