#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "roundness/metric_space.hpp"

namespace roundness {

/// Simple undirected graph on vertices 0..n-1. Construction rejects
/// self-loops, duplicate edges and out-of-range endpoints; connectivity is
/// checked when converting to a metric.
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t size() const noexcept { return n_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const {
    return adjacency_[v];
  }

  bool connected() const;
  bool is_tree() const { return edges_.size() + 1 == n_ && connected(); }

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// All-pairs shortest-path lengths, one BFS per source. Sources run in
/// parallel (OpenMP); each writes only its own row. `jobs <= 0` uses the
/// OpenMP default.
RealMatrix bfs_distances(const Graph& g, int jobs = 0);

/// Single-threaded reference for bfs_distances.
RealMatrix bfs_distances_serial(const Graph& g);

/// Shortest-path metric. Throws Disconnected naming an unreachable pair.
FiniteMetricSpace path_metric(const Graph& g, int jobs = 0);

// Vertex-transitive families.
Graph cycle_graph(std::size_t n);
Graph complete_graph(std::size_t n);
/// Balanced K_{n,n}: vertices 0..n-1 on one side, n..2n-1 on the other.
Graph complete_bipartite_graph(std::size_t n);
/// Vertex i is the n-bit binary representation of i; edges join words at
/// Hamming distance 1.
Graph hypercube_graph(std::size_t n);
Graph petersen_graph();
/// i ~ i +- s (mod n) for every s in `steps`, 1 <= s <= n/2.
Graph circulant_graph(std::size_t n, const std::vector<std::size_t>& steps);

// Trees, used by the embedding search.
Graph path_graph(std::size_t k);
/// Vertex 0 is the center.
Graph star_graph(std::size_t leaves);

/// Dispatches by family name: cycle, complete, complete_bipartite,
/// hypercube, petersen, circulant (params = n, s_1, s_2, ...), and the
/// bundled solids dodecahedron, icosahedron.
Graph gen_family(std::string_view family, const std::vector<std::size_t>& params);

/// Parses "family[:p1[:p2,p3,...]]", e.g. "cycle:5", "circulant:8:1,3".
Graph parse_graph_spec(std::string_view spec);

/// Edge-list text: first line n, then one "u v" pair per line, 0-indexed.
/// Blank lines and lines starting with '#' are ignored.
Graph parse_edge_list(std::string_view text);
Graph load_edge_list(const std::filesystem::path& path);

/// Directory holding the bundled solid edge lists. ROUNDNESS_DATA_DIR in
/// the environment overrides the compiled-in location.
std::filesystem::path data_dir();

}  // namespace roundness
