#include "roundness/graphs.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <sstream>

#include <omp.h>

#include "roundness/error.hpp"

#ifndef ROUNDNESS_DEFAULT_DATA_DIR
#define ROUNDNESS_DEFAULT_DATA_DIR "data"
#endif

namespace roundness {

Graph::Graph(std::size_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)), adjacency_(n) {
  if (n == 0) throw Error(ErrorKind::BadParams, "graph needs at least one vertex");
  std::set<Edge> seen;
  for (auto& [u, v] : edges_) {
    if (u >= n || v >= n)
      throw Error(ErrorKind::IndexOutOfRange,
                  "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                      ") references a missing vertex");
    if (u == v)
      throw Error(ErrorKind::BadParams, "self-loop at vertex " + std::to_string(u));
    const Edge key{std::min(u, v), std::max(u, v)};
    if (!seen.insert(key).second)
      throw Error(ErrorKind::BadParams,
                  "duplicate edge (" + std::to_string(key.first) + ", " +
                      std::to_string(key.second) + ")");
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nb : adjacency_) std::sort(nb.begin(), nb.end());
}

bool Graph::connected() const {
  std::vector<bool> seen(n_, false);
  std::vector<std::size_t> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adjacency_[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  return count == n_;
}

namespace {

constexpr double kUnreached = -1.0;

void bfs_row(const Graph& g, std::size_t source, std::span<double> row,
             std::vector<std::size_t>& queue) {
  std::fill(row.begin(), row.end(), kUnreached);
  queue.clear();
  queue.push_back(source);
  row[source] = 0.0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto v = queue[head];
    for (auto w : g.neighbors(v))
      if (row[w] == kUnreached) {
        row[w] = row[v] + 1.0;
        queue.push_back(w);
      }
  }
}

}  // namespace

RealMatrix bfs_distances_serial(const Graph& g) {
  const std::size_t n = g.size();
  RealMatrix d(n, n);
  std::vector<std::size_t> queue;
  queue.reserve(n);
  for (std::size_t s = 0; s < n; ++s) bfs_row(g, s, d.row(s), queue);
  return d;
}

RealMatrix bfs_distances(const Graph& g, int jobs) {
  const std::size_t n = g.size();
  RealMatrix d(n, n);
  const long long count = static_cast<long long>(n);
#pragma omp parallel num_threads(jobs > 0 ? jobs : omp_get_max_threads()) if (n > 64)
  {
    std::vector<std::size_t> queue;
    queue.reserve(n);
#pragma omp for schedule(dynamic, 8)
    for (long long s = 0; s < count; ++s)
      bfs_row(g, static_cast<std::size_t>(s), d.row(static_cast<std::size_t>(s)),
              queue);
  }
  return d;
}

FiniteMetricSpace path_metric(const Graph& g, int jobs) {
  RealMatrix d = bfs_distances(g, jobs);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j)
      if (d(i, j) == kUnreached)
        throw Error(ErrorKind::Disconnected,
                    "graph is disconnected: vertex " + std::to_string(j) +
                        " is unreachable from vertex " + std::to_string(i));
  // Integer distances: the triangle inequality holds by construction.
  return build_metric_space(std::move(d), {}, false);
}

Graph cycle_graph(std::size_t n) {
  if (n < 3) throw Error(ErrorKind::BadParams, "cycle needs n >= 3");
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.emplace_back(i, (i + 1) % n);
  return Graph(n, std::move(e));
}

Graph complete_graph(std::size_t n) {
  if (n < 2) throw Error(ErrorKind::BadParams, "complete graph needs n >= 2");
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.emplace_back(i, j);
  return Graph(n, std::move(e));
}

Graph complete_bipartite_graph(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::BadParams, "K_{n,n} needs n >= 1");
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) e.emplace_back(i, n + j);
  return Graph(2 * n, std::move(e));
}

Graph hypercube_graph(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::BadParams, "hypercube needs n >= 1");
  if (n > 12)
    throw Error(ErrorKind::DimensionTooLarge, "hypercube dimension must be <= 12");
  const std::size_t count = std::size_t{1} << n;
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t b = 0; b < n; ++b) {
      const std::size_t j = i ^ (std::size_t{1} << b);
      if (i < j) e.emplace_back(i, j);
    }
  return Graph(count, std::move(e));
}

Graph petersen_graph() {
  // Outer 5-cycle 0..4, inner pentagram 5..9, spokes i -- i+5.
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i < 5; ++i) {
    e.emplace_back(i, (i + 1) % 5);
    e.emplace_back(5 + i, 5 + (i + 2) % 5);
    e.emplace_back(i, 5 + i);
  }
  return Graph(10, std::move(e));
}

Graph circulant_graph(std::size_t n, const std::vector<std::size_t>& steps) {
  if (n < 3) throw Error(ErrorKind::BadParams, "circulant needs n >= 3");
  if (steps.empty())
    throw Error(ErrorKind::BadParams, "circulant needs at least one step");
  std::size_t g = n;
  for (auto s : steps) {
    if (s < 1 || s > n / 2)
      throw Error(ErrorKind::BadParams,
                  "circulant step " + std::to_string(s) + " outside 1.." +
                      std::to_string(n / 2));
    g = std::gcd(g, s);
  }
  if (g > 1)
    throw Error(ErrorKind::BadParams,
                "circulant steps share factor " + std::to_string(g) +
                    " with n; the graph is disconnected");
  std::set<Graph::Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (auto s : steps) {
      const std::size_t j = (i + s) % n;
      e.emplace(std::min(i, j), std::max(i, j));
    }
  return Graph(n, {e.begin(), e.end()});
}

Graph path_graph(std::size_t k) {
  if (k < 1) throw Error(ErrorKind::BadParams, "path needs k >= 1");
  std::vector<Graph::Edge> e;
  for (std::size_t i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
  return Graph(k, std::move(e));
}

Graph star_graph(std::size_t leaves) {
  std::vector<Graph::Edge> e;
  for (std::size_t i = 1; i <= leaves; ++i) e.emplace_back(0, i);
  return Graph(leaves + 1, std::move(e));
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw Error(ErrorKind::ParseError,
                "invalid " + std::string(what) + ": '" + std::string(s) + "'");
  return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

void expect_params(std::string_view family, const std::vector<std::size_t>& p,
                   std::size_t count) {
  if (p.size() != count)
    throw Error(ErrorKind::BadParams,
                std::string(family) + " expects " + std::to_string(count) +
                    " parameter(s), got " + std::to_string(p.size()));
}

}  // namespace

Graph gen_family(std::string_view family, const std::vector<std::size_t>& params) {
  if (family == "cycle") {
    expect_params(family, params, 1);
    return cycle_graph(params[0]);
  }
  if (family == "complete") {
    expect_params(family, params, 1);
    return complete_graph(params[0]);
  }
  if (family == "complete_bipartite") {
    expect_params(family, params, 1);
    return complete_bipartite_graph(params[0]);
  }
  if (family == "hypercube") {
    expect_params(family, params, 1);
    return hypercube_graph(params[0]);
  }
  if (family == "path") {
    expect_params(family, params, 1);
    return path_graph(params[0]);
  }
  if (family == "star") {
    expect_params(family, params, 1);
    return star_graph(params[0]);
  }
  if (family == "petersen") {
    expect_params(family, params, 0);
    return petersen_graph();
  }
  if (family == "circulant") {
    if (params.size() < 2)
      throw Error(ErrorKind::BadParams, "circulant expects n and at least one step");
    return circulant_graph(params[0], {params.begin() + 1, params.end()});
  }
  if (family == "dodecahedron" || family == "icosahedron") {
    expect_params(family, params, 0);
    return load_edge_list(data_dir() / (std::string(family) + ".txt"));
  }
  throw Error(ErrorKind::UnknownFamily, "unknown graph family '" +
                                            std::string(family) + "'");
}

Graph parse_graph_spec(std::string_view spec) {
  const auto parts = split(spec, ':');
  std::vector<std::size_t> params;
  for (std::size_t i = 1; i < parts.size(); ++i)
    for (auto tok : split(parts[i], ','))
      params.push_back(parse_count(tok, "graph parameter"));
  return gen_family(parts[0], params);
}

Graph parse_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::size_t> n;
  std::vector<Graph::Edge> edges;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    if (!n) {
      long long v = -1;
      std::string rest;
      if (!(ls >> v) || v < 1 || (ls >> rest))
        throw Error(ErrorKind::ParseError,
                    "line " + std::to_string(lineno) + ": expected vertex count");
      n = static_cast<std::size_t>(v);
      continue;
    }
    long long u = -1, w = -1;
    std::string rest;
    if (!(ls >> u >> w) || u < 0 || w < 0 || (ls >> rest))
      throw Error(ErrorKind::ParseError,
                  "line " + std::to_string(lineno) + ": expected 'u v'");
    edges.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(w));
  }
  if (!n) throw Error(ErrorKind::ParseError, "edge list is empty");
  return Graph(*n, std::move(edges));
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::ParseError, "cannot open edge list " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_edge_list(ss.str());
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("ROUNDNESS_DATA_DIR"); env && *env)
    return env;
  return ROUNDNESS_DEFAULT_DATA_DIR;
}

}  // namespace roundness
