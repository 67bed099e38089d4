#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qdepth {

struct Edge {
  int u = 0;  ///< smaller endpoint
  int v = 0;  ///< larger endpoint
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Weighted undirected Max-Cut instance with 0-based node labels.
/// Edges are kept with u < v; no self-loops, no duplicate pairs.
struct Graph {
  int n_nodes = 0;
  std::vector<Edge> edges;

  friend bool operator==(const Graph&, const Graph&) = default;
};

/// Error raised for malformed graph text; carries the 1-based line number
/// (0 when the problem is not tied to one line).
class GraphFormatError : public std::runtime_error {
 public:
  GraphFormatError(int line, const std::string& what);
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/// Builds a graph after normalising each edge to u < v. Throws
/// std::invalid_argument on self-loops, duplicate pairs, out-of-range nodes or
/// non-positive weights.
Graph make_graph(int n_nodes, std::vector<Edge> edges);

/// Samples `n_edges` distinct node pairs uniformly, with weights uniform on
/// [weight_min, weight_max]. Same seed, same graph.
Graph random_graph(int n_nodes, int n_edges, std::pair<double, double> weight_range,
                   std::uint64_t seed);

/// Edge-list text: first non-comment line is the node count, then one
/// "i j weight" line per edge. '#' starts a comment line.
Graph parse_graph(std::string_view text);
std::string serialize_graph(const Graph& graph, std::string_view header_comment = {});

Graph load_graph(const std::string& path);
void save_graph(const std::string& path, const Graph& graph, std::string_view header_comment = {});

}  // namespace qdepth
