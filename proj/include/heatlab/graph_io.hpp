#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "heatlab/graph.hpp"

namespace heatlab {

// Line format:
//   graph <name>
//   v <id> <mu>
//   e <id> <id> <b>        (undirected, listed once)
// Blank lines and lines starting with '#' are ignored.
//
// Structured alternative:
//   {"name": ..., "vertices": [{"id": .., "mu": ..}], "edges": [{"u": .., "v": .., "b": ..}]}
//
// Parse failures throw InputError with a line number where available. The
// result is unchecked; pass it through validate().
RawGraph parse_graph_text(std::istream& in);
RawGraph parse_graph_json(std::string_view document);
/// Dispatches on the first non-blank character ('{' selects the structured form).
RawGraph read_graph_file(const std::filesystem::path& path);

void write_graph_text(std::ostream& out, const WeightedGraph& g);

}  // namespace heatlab
