#pragma once

#include <string>
#include <vector>

#include "treeflip/search.hpp"

namespace treeflip {

/// Graphviz digraph: nodes named by canonical key, arcs labeled "removed>inserted",
/// perfect arcs solid and bold, non-perfect arcs dashed.
std::string slice_to_dot(const FlipGraphSlice& slice);

/// Structured document; slice_from_json(slice_to_json(s)) reproduces s.
std::string slice_to_json(const FlipGraphSlice& slice);
FlipGraphSlice slice_from_json(const std::string& text);

bool operator==(const SliceNode& x, const SliceNode& y);
bool operator==(const SliceArc& x, const SliceArc& y);
bool operator==(const FlipGraphSlice& x, const FlipGraphSlice& y);

/// Just enough of the DOT grammar to read back what slice_to_dot writes: one digraph with
/// node and edge statements, quoted or bare ids, and bracketed attribute lists.
struct DotGraph {
  std::string name;
  bool directed = false;
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::vector<std::pair<std::string, std::string>>> edge_attrs;
};

DotGraph parse_dot(const std::string& text);

}  // namespace treeflip
