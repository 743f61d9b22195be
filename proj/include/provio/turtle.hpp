#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "provio/errors.hpp"
#include "provio/graph.hpp"

namespace provio {

// Byte-deterministic Turtle: the three prefix declarations, then one record
// per subject in GUID order with predicates in vocabulary order.
std::string serialize_turtle(const ProvGraph& graph);

// Reads the subset produced by serialize_turtle (prefixed names, IRI
// references, ';' and ',' continuations, string/integer/decimal literals).
// Throws SyntaxError for malformed input, undeclared prefixes, unknown
// predicates, and documents that violate graph invariants.
ProvGraph parse_turtle(std::string_view text);

ProvGraph read_turtle_file(const std::filesystem::path& path);

// Writes to a temporary sibling and renames it over `path`.
void write_turtle_file(const std::filesystem::path& path, const ProvGraph& graph);

// "prov_<program>_<rank>.ttl"
std::string subgraph_file_name(std::string_view program, unsigned rank);

// Sorted list of per-process sub-graph files in `dir`.
std::vector<std::filesystem::path> list_subgraph_files(
    const std::filesystem::path& dir);

// Parses and merges every sub-graph file found in `dir`.
ProvGraph merge_directory(const std::filesystem::path& dir);

ProvGraph merge_files(std::span<const std::filesystem::path> files);

// Turtle form of a single term: <guid>, prov:Agent, "text", 42, 0.5.
std::string format_term(const Term& term);

}  // namespace provio
