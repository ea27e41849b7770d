#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "optresp/graph.hpp"

namespace optresp {

struct EdgeListFile {
  WeightedGraph graph;
  /// id as written in the file for every loaded node
  std::vector<std::int64_t> original_ids;
  std::size_t self_loops_dropped = 0;
};

/// Reads whitespace separated `i j [w]` lines; `#` starts a comment line and a
/// missing weight means 1.0.
///
/// A leading `# nodes N` directive pins the node count and keeps ids as
/// written (they must lie in [0, N)). Without it, the distinct ids are
/// compacted to 0..n-1 in increasing order.
///
/// Repeated pairs are merged by summing weights. With `directed_input` every
/// line is read as an arc and the two directions of a pair are summed into one
/// undirected edge; without it every line is already an undirected edge, so
/// the merge rule produces the same graph.
EdgeListFile parse_edge_list(std::istream& in, bool directed_input = false);
EdgeListFile load_edge_list(const std::filesystem::path& path, bool directed_input = false);

/// Writes a `# nodes N` header and one `u v w` line per edge with shortest
/// round-trip formatting, so load(save(g)) reproduces g exactly.
void write_edge_list(std::ostream& out, const WeightedGraph& g);
void save_edge_list(const std::filesystem::path& path, const WeightedGraph& g);

struct NodeAttributes {
  std::vector<double> phi;
  std::vector<double> b;
  std::vector<double> a;
};

/// Reads `id phi b [a]` lines (missing a means 0). Every node in [0, n) must
/// appear exactly once.
NodeAttributes parse_attributes(std::istream& in, std::size_t num_nodes);
NodeAttributes load_attributes(const std::filesystem::path& path, std::size_t num_nodes);

void write_attributes(std::ostream& out, const NodeAttributes& attrs);
void save_attributes(const std::filesystem::path& path, const NodeAttributes& attrs);

/// Shortest decimal string that parses back to exactly `v`.
std::string format_double(double v);

}  // namespace optresp
