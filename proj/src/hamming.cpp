#include "roundness/hamming.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include <omp.h>

#include "roundness/error.hpp"
#include "roundness/spectral.hpp"

namespace roundness {

namespace {

void require_dimension(std::size_t n, std::size_t max, std::string_view what) {
  if (n < 1)
    throw Error(ErrorKind::InvalidArgument,
                std::string(what) + ": dimension must be >= 1");
  if (n > max)
    throw Error(ErrorKind::DimensionTooLarge,
                std::string(what) + ": dimension " + std::to_string(n) +
                    " exceeds the limit " + std::to_string(max));
}

std::int64_t pow2(std::size_t e) { return std::int64_t{1} << e; }

}  // namespace

CubeVertex CubeVertex::from_bits(const std::vector<int>& bits) {
  if (bits.empty() || bits.size() > kMaxCubeDimension)
    throw Error(ErrorKind::InvalidArgument, "bit vector has unsupported length");
  CubeVertex v{bits.size(), 0};
  for (int b : bits) {
    if (b != 0 && b != 1)
      throw Error(ErrorKind::InvalidArgument, "bits must be 0 or 1");
    v.index = (v.index << 1) | static_cast<std::uint32_t>(b);
  }
  return v;
}

CubeVertex CubeVertex::parse(std::string_view s) {
  std::vector<int> bits;
  for (char c : s) {
    if (c != '0' && c != '1')
      throw Error(ErrorKind::ParseError,
                  "malformed bitstring '" + std::string(s) + "'");
    bits.push_back(c - '0');
  }
  if (bits.empty()) throw Error(ErrorKind::ParseError, "empty bitstring");
  return from_bits(bits);
}

std::vector<int> CubeVertex::bits() const {
  std::vector<int> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = bit(i);
  return b;
}

std::string CubeVertex::str() const {
  std::string s(n, '0');
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<char>('0' + bit(i));
  return s;
}

std::size_t hamming_distance(const CubeVertex& a, const CubeVertex& b) {
  return static_cast<std::size_t>(std::popcount(a.index ^ b.index));
}

CubeSubset::CubeSubset(std::size_t n, std::vector<std::uint32_t> indices)
    : n_(n), indices_(std::move(indices)) {
  require_dimension(n, kMaxCubeDimension, "cube subset");
  if (indices_.empty())
    throw Error(ErrorKind::InvalidArgument, "cube subset must be nonempty");
  std::set<std::uint32_t> seen;
  for (auto i : indices_) {
    if (i >= (1U << n))
      throw Error(ErrorKind::IndexOutOfRange,
                  "vertex index " + std::to_string(i) + " not in H_" +
                      std::to_string(n));
    if (!seen.insert(i).second)
      throw Error(ErrorKind::InvalidArgument,
                  "vertex " + std::to_string(i) + " listed twice");
  }
}

FiniteMetricSpace CubeSubset::metric() const {
  const std::size_t m = size();
  RealMatrix d(m, m);
  std::vector<std::string> labels;
  for (std::size_t a = 0; a < m; ++a) {
    labels.push_back(vertex(a).str());
    for (std::size_t b = 0; b < m; ++b)
      d(a, b) = static_cast<double>(hamming_distance(vertex(a), vertex(b)));
  }
  return build_metric_space(std::move(d), std::move(labels), false);
}

CubeSubset parse_subset(std::string_view text, std::size_t n) {
  require_dimension(n, kMaxCubeDimension, "subset");
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(',', start);
    auto tok = text.substr(start, pos - start);
    while (!tok.empty() && tok.front() == ' ') tok.remove_prefix(1);
    while (!tok.empty() && tok.back() == ' ') tok.remove_suffix(1);
    if (tok.empty())
      throw Error(ErrorKind::ParseError, "empty entry in subset list");
    tokens.push_back(tok);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  const bool bitstrings = std::all_of(tokens.begin(), tokens.end(), [&](auto t) {
    return t.size() == n && t.find_first_not_of("01") == std::string_view::npos;
  });
  std::vector<std::uint32_t> idx;
  for (auto t : tokens) {
    if (bitstrings) {
      idx.push_back(CubeVertex::parse(t).index);
      continue;
    }
    std::uint32_t v = 0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size())
      throw Error(ErrorKind::ParseError,
                  "subset entry '" + std::string(t) +
                      "' is neither an n-bit string nor an index");
    idx.push_back(v);
  }
  return CubeSubset(n, std::move(idx));
}

IntMatrix cube_distance_matrix(std::size_t n) {
  require_dimension(n, kMaxCubeDimension, "cube_distance_matrix");
  IntMatrix d{{0, 1}, {1, 0}};
  for (std::size_t m = 1; m < n; ++m) {
    const std::size_t s = d.rows();
    IntMatrix next(2 * s, 2 * s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j) {
        next(i, j) = next(s + i, s + j) = d(i, j);
        next(i, s + j) = next(s + i, j) = d(i, j) + 1;
      }
    d = std::move(next);
  }
  return d;
}

FiniteMetricSpace cube_metric_space(std::size_t n) {
  const IntMatrix d = cube_distance_matrix(n);
  std::vector<std::string> labels;
  for (std::uint32_t i = 0; i < d.rows(); ++i) labels.push_back(CubeVertex{n, i}.str());
  return build_metric_space(to_real(d), std::move(labels), false);
}

SignVector sign_vector(std::size_t i, std::size_t j) {
  if (j > i)
    throw Error(ErrorKind::BadBlockExponent,
                "block exponent " + std::to_string(j) + " exceeds size exponent " +
                    std::to_string(i));
  if (i > 2 * kMaxCubeDimension)
    throw Error(ErrorKind::DimensionTooLarge, "sign vector too long");
  SignVector v{i, j, std::vector<std::int64_t>(static_cast<std::size_t>(pow2(i)))};
  for (std::size_t t = 0; t < v.entries.size(); ++t)
    v.entries[t] = ((t >> j) & 1U) ? -1 : 1;
  return v;
}

IdentityReport eigen_identity_check(std::size_t n) {
  require_dimension(n, 10, "eigen_identity_check");
  const IntMatrix d = cube_distance_matrix(n);
  IdentityReport rep;
  for (std::size_t i = 0; i <= n; ++i) {
    const auto v = sign_vector(n, i).entries;
    const std::int64_t lambda =
        i == n ? static_cast<std::int64_t>(n) * pow2(n - 1) : -pow2(n - 1);
    const auto dv = d * v;
    for (std::size_t t = 0; t < dv.size(); ++t)
      if (dv[t] != lambda * v[t]) {
        std::ostringstream os;
        os << "D_" << n << " * 1_{" << n << "," << i << "} differs from "
           << lambda << " * 1_{" << n << "," << i << "} at coordinate " << t;
        rep.failures.push_back(os.str());
        break;
      }
  }
  rep.ok = rep.failures.empty();
  return rep;
}

IntMatrix matrix_A(std::size_t n) {
  require_dimension(n, 10, "matrix_A");
  IntMatrix a(n + 1, static_cast<std::size_t>(pow2(n)));
  for (std::size_t r = 0; r <= n; ++r) {
    const auto v = sign_vector(n, n - r).entries;
    std::copy(v.begin(), v.end(), a.row(r).begin());
  }
  return a;
}

IntMatrix matrix_B(std::size_t n) {
  require_dimension(n, 10, "matrix_B");
  IntMatrix b(n + 1, static_cast<std::size_t>(pow2(n)));
  for (std::uint32_t i = 0; i < b.cols(); ++i) {
    b(0, i) = 1;
    const CubeVertex v{n, i};
    for (std::size_t r = 0; r < n; ++r) b(r + 1, i) = v.bit(r);
  }
  return b;
}

IntMatrix matrix_M(std::size_t n) {
  require_dimension(n, 10, "matrix_M");
  IntMatrix m(n + 1, n + 1);
  m(0, 0) = 1;
  for (std::size_t r = 1; r <= n; ++r) {
    m(r, 0) = 1;
    m(r, r) = -2;
  }
  return m;
}

FactorizationReport factorization_check(std::size_t n) {
  require_dimension(n, 10, "factorization_check");
  const IntMatrix m = matrix_M(n);
  FactorizationReport rep;
  rep.det_M = determinant_exact(m);
  rep.product_matches = (m * matrix_B(n)) == matrix_A(n);
  rep.ok = rep.det_M != 0 && rep.product_matches;
  return rep;
}

NullDimensionReport null_dimension_check(std::size_t n) {
  require_dimension(n, 8, "null_dimension_check");
  const IntMatrix d = cube_distance_matrix(n);
  const IntMatrix a = matrix_A(n);
  NullDimensionReport rep;
  rep.expected = static_cast<std::size_t>(pow2(n)) - n - 1;
  rep.rank_D = rank_exact(d);
  rep.rank_A = rank_exact(a);
  rep.computed = d.rows() - rep.rank_D;

  const auto kernel = null_space_exact(a);
  rep.annihilates = kernel.size() == d.rows() - rep.rank_A;
  for (const auto& v : kernel) {
    const auto dv = d * v;
    if (std::any_of(dv.begin(), dv.end(), [](std::int64_t x) { return x != 0; })) {
      rep.annihilates = false;
      break;
    }
  }
  rep.ok = rep.computed == rep.expected && rep.rank_D == n + 1 &&
           rep.rank_A == n + 1 && rep.annihilates;
  return rep;
}

ClassificationResult classify_subset(const CubeSubset& s) {
  const std::size_t n = s.dimension();
  const std::size_t k = s.size() - 1;
  ClassificationResult res;
  res.k = k;
  if (k == 0) {
    res.strict = true;
    return res;
  }
  // Columns are the difference vectors, so null vectors are dependencies.
  IntMatrix diffs(n, k);
  const CubeVertex x0 = s.vertex(0);
  for (std::size_t i = 1; i <= k; ++i) {
    const CubeVertex xi = s.vertex(i);
    for (std::size_t r = 0; r < n; ++r) diffs(r, i - 1) = xi.bit(r) - x0.bit(r);
  }
  res.rank = rank_exact(diffs);
  res.strict = res.rank == k;
  if (!res.strict) res.dependency = null_space_exact(diffs).front();
  return res;
}

namespace {

// Roundness values of isometric subsets differ by bisection noise, so the
// minimum is taken over q quantized to `quantum`; (key, index set) is a
// total order and the merged result does not depend on the partition.
struct ScanAccumulator {
  explicit ScanAccumulator(double q) : quantum(q) {}

  double quantum;
  std::map<std::size_t, SizeCounts> counts;
  std::size_t evaluated = 0;
  std::size_t unbounded = 0;
  std::optional<double> min_q;
  std::vector<std::uint32_t> argmin;

  void offer(double q, const std::vector<std::uint32_t>& idx) {
    const auto key = [this](double v) { return std::llround(v / quantum); };
    if (!min_q || key(q) < key(*min_q) ||
        (key(q) == key(*min_q) && idx < argmin)) {
      min_q = q;
      argmin = idx;
    }
  }

  void merge(const ScanAccumulator& o) {
    for (const auto& [size, c] : o.counts) {
      counts[size].strict += c.strict;
      counts[size].not_strict += c.not_strict;
    }
    evaluated += o.evaluated;
    unbounded += o.unbounded;
    if (o.min_q) offer(*o.min_q, o.argmin);
  }
};

std::size_t resolve_max_size(std::size_t n, const ScanOptions& opts) {
  require_dimension(n, 4, "scan_subsets");
  const std::size_t vertices = std::size_t{1} << n;
  return std::min(opts.max_size == 0 ? n + 1 : opts.max_size, vertices);
}

void scan_mask(std::size_t n, std::uint64_t mask, std::size_t max_size,
               const ScanOptions& opts, ScanAccumulator& acc) {
  const auto size = static_cast<std::size_t>(std::popcount(mask));
  if (size > max_size) return;
  std::vector<std::uint32_t> idx;
  idx.reserve(size);
  for (std::uint32_t v = 0; v < 64; ++v)
    if (mask >> v & 1U) idx.push_back(v);
  const CubeSubset subset(n, idx);
  const bool strict = classify_subset(subset).strict;
  auto& c = acc.counts[size];
  (strict ? c.strict : c.not_strict) += 1;
  // Two-point spaces have every p-negative type; they would make the
  // minimum vacuous, so only sizes >= 3 enter the roundness statistic.
  if (!strict || size < 3 || !opts.compute_roundness) return;
  const RoundnessResult r = generalized_roundness(subset.metric(), opts.roundness);
  ++acc.evaluated;
  if (!r.finite()) {
    ++acc.unbounded;
    return;
  }
  acc.offer(r.q, idx);
}

ScanSummary finish(std::size_t n, std::size_t max_size, ScanAccumulator acc) {
  ScanSummary s;
  s.n = n;
  s.max_size = max_size;
  s.counts = std::move(acc.counts);
  s.roundness_evaluated = acc.evaluated;
  s.roundness_unbounded = acc.unbounded;
  s.min_q = acc.min_q;
  s.argmin_subset = std::move(acc.argmin);
  return s;
}

}  // namespace

ScanSummary scan_subsets_serial(std::size_t n, const ScanOptions& opts) {
  const std::size_t max_size = resolve_max_size(n, opts);
  const std::uint64_t total = std::uint64_t{1} << (std::size_t{1} << n);
  ScanAccumulator acc{10 * opts.roundness.tol_p};
  for (std::uint64_t mask = 1; mask < total; ++mask)
    scan_mask(n, mask, max_size, opts, acc);
  return finish(n, max_size, std::move(acc));
}

ScanSummary scan_subsets(std::size_t n, const ScanOptions& opts) {
  const std::size_t max_size = resolve_max_size(n, opts);
  const auto total = static_cast<long long>(std::uint64_t{1} << (std::size_t{1} << n));
  const int threads = opts.jobs > 0 ? opts.jobs : omp_get_max_threads();
  std::vector<ScanAccumulator> partial(static_cast<std::size_t>(threads),
                                      ScanAccumulator{10 * opts.roundness.tol_p});
  // Exceptions must not cross the parallel region.
  std::vector<std::string> errors(partial.size());
#pragma omp parallel num_threads(threads)
  {
    const auto t = static_cast<std::size_t>(omp_get_thread_num());
#pragma omp for schedule(dynamic, 256)
    for (long long mask = 1; mask < total; ++mask) {
      if (!errors[t].empty()) continue;
      try {
        scan_mask(n, static_cast<std::uint64_t>(mask), max_size, opts, partial[t]);
      } catch (const std::exception& e) {
        errors[t] = e.what();
      }
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw Error(ErrorKind::NoConvergence, "subset scan failed: " + e);
  ScanAccumulator acc{10 * opts.roundness.tol_p};
  for (const auto& p : partial) acc.merge(p);
  return finish(n, max_size, std::move(acc));
}

bool is_isometric_embedding(const Graph& g, const CubeEmbedding& images) {
  if (images.size() != g.size()) return false;
  const RealMatrix d = bfs_distances_serial(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = i + 1; j < g.size(); ++j)
      if (static_cast<double>(hamming_distance(images[i], images[j])) != d(i, j))
        return false;
  return true;
}

std::optional<CubeEmbedding> tree_embedding_search(const Graph& t, std::size_t n) {
  if (!t.is_tree())
    throw Error(ErrorKind::NotATree, "input graph is not a tree");
  const std::size_t k = t.size();
  if (k > 7 || n > 6)
    throw Error(ErrorKind::SearchSpaceTooLarge,
                "embedding search is limited to trees with <= 7 vertices and "
                "cubes of dimension <= 6");
  require_dimension(n, 6, "tree_embedding_search");
  const RealMatrix dist = bfs_distances_serial(t);

  std::vector<std::size_t> order{0};
  {
    std::vector<bool> seen(k, false);
    seen[0] = true;
    for (std::size_t h = 0; h < order.size(); ++h)
      for (auto w : t.neighbors(order[h]))
        if (!seen[w]) {
          seen[w] = true;
          order.push_back(w);
        }
  }

  const std::uint32_t vertices = 1U << n;
  std::vector<std::uint32_t> image(k, 0);
  std::vector<bool> used(vertices, false);

  auto place = [&](auto&& self, std::size_t pos) -> bool {
    if (pos == k) return true;
    const std::size_t v = order[pos];
    for (std::uint32_t c = 0; c < vertices; ++c) {
      if (used[c]) continue;
      bool fits = true;
      for (std::size_t q = 0; q < pos && fits; ++q) {
        const std::size_t u = order[q];
        fits = static_cast<double>(std::popcount(c ^ image[u])) == dist(v, u);
      }
      if (!fits) continue;
      used[c] = true;
      image[v] = c;
      if (self(self, pos + 1)) return true;
      used[c] = false;
    }
    return false;
  };

  used[0] = true;
  image[0] = 0;
  if (!place(place, 1)) return std::nullopt;
  CubeEmbedding out;
  for (auto i : image) out.push_back({n, i});
  return out;
}

CubeEmbedding path_embedding_witness(std::size_t k) {
  if (k < 2) throw Error(ErrorKind::InvalidArgument, "path witness needs k >= 2");
  require_dimension(k - 1, kMaxCubeDimension, "path_embedding_witness");
  const std::size_t n = k - 1;
  CubeEmbedding out;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<int> bits(n, 0);
    std::fill_n(bits.begin(), j, 1);
    out.push_back(CubeVertex::from_bits(bits));
  }
  return out;
}

}  // namespace roundness
