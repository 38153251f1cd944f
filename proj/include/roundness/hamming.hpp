#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roundness/graphs.hpp"
#include "roundness/matrix.hpp"
#include "roundness/metric_space.hpp"
#include "roundness/roundness.hpp"

namespace roundness {

inline constexpr std::size_t kMaxCubeDimension = 12;

/// Vertex b_{n,i} of the n-cube: the n-digit binary representation of
/// `index`, most significant digit first.
struct CubeVertex {
  std::size_t n = 0;
  std::uint32_t index = 0;

  static CubeVertex from_bits(const std::vector<int>& bits);
  static CubeVertex parse(std::string_view bitstring);

  std::vector<int> bits() const;
  std::string str() const;
  int bit(std::size_t pos) const { return (index >> (n - 1 - pos)) & 1U; }

  friend bool operator==(const CubeVertex&, const CubeVertex&) = default;
};

std::size_t hamming_distance(const CubeVertex& a, const CubeVertex& b);

/// Ordered list of distinct cube vertices x_0, ..., x_k.
class CubeSubset {
 public:
  CubeSubset(std::size_t n, std::vector<std::uint32_t> indices);

  std::size_t dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return indices_.size(); }
  const std::vector<std::uint32_t>& indices() const noexcept { return indices_; }
  CubeVertex vertex(std::size_t i) const { return {n_, indices_[i]}; }

  /// Induced Hamming metric, labels are bitstrings. Needs size() >= 2.
  FiniteMetricSpace metric() const;

 private:
  std::size_t n_;
  std::vector<std::uint32_t> indices_;
};

/// "000,011,101" (bitstrings, when every token is n characters of 0/1) or
/// "0,3,5" (indices).
CubeSubset parse_subset(std::string_view text, std::size_t n);

/// D_n built by the block recursion D_{n+1} = [[D, D+O], [D+O, D]].
IntMatrix cube_distance_matrix(std::size_t n);

FiniteMetricSpace cube_metric_space(std::size_t n);

/// 1_{i,j}: length 2^i, alternating blocks of 2^j ones and minus ones,
/// starting with +1.
struct SignVector {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::int64_t> entries;
};

SignVector sign_vector(std::size_t i, std::size_t j);

struct IdentityReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// D_n 1_{n,n} = n 2^{n-1} 1_{n,n} and D_n 1_{n,i} = -2^{n-1} 1_{n,i},
/// i < n, checked in integer arithmetic.
IdentityReport eigen_identity_check(std::size_t n);

/// Rows 1_{n,n}^T, 1_{n,n-1}^T, ..., 1_{n,0}^T.
IntMatrix matrix_A(std::size_t n);
/// Column i is (1, b_{n,i}).
IntMatrix matrix_B(std::size_t n);
/// First column all ones, -2 on the diagonal below the leading 1.
IntMatrix matrix_M(std::size_t n);

struct FactorizationReport {
  bool ok = false;
  std::int64_t det_M = 0;
  bool product_matches = false;
};

/// M_n is invertible (det = (-2)^n) and M_n B_n = A_n exactly.
FactorizationReport factorization_check(std::size_t n);

struct NullDimensionReport {
  std::size_t expected = 0;
  std::size_t computed = 0;
  std::size_t rank_D = 0;
  std::size_t rank_A = 0;
  /// Every exact null vector of A_n is a null vector of D_n.
  bool annihilates = false;
  bool ok = false;
};

NullDimensionReport null_dimension_check(std::size_t n);

struct ClassificationResult {
  bool strict = false;
  /// Exact rank of the k difference vectors x_i - x_0.
  std::size_t rank = 0;
  std::size_t k = 0;
  /// a_1..a_k with sum a_i (x_i - x_0) = 0; present iff not strict.
  std::optional<std::vector<std::int64_t>> dependency;
};

/// Strict 1-negative type iff the differences x_i - x_0 are linearly
/// independent; decided by exact rank.
ClassificationResult classify_subset(const CubeSubset& s);

struct ScanOptions {
  /// 0 means n + 1.
  std::size_t max_size = 0;
  bool compute_roundness = true;
  RoundnessOptions roundness = {};
  int jobs = 0;
};

struct SizeCounts {
  std::size_t strict = 0;
  std::size_t not_strict = 0;
  friend bool operator==(const SizeCounts&, const SizeCounts&) = default;
};

struct ScanSummary {
  std::size_t n = 0;
  std::size_t max_size = 0;
  std::map<std::size_t, SizeCounts> counts;
  /// Strict subsets of size >= 3 whose roundness was computed.
  std::size_t roundness_evaluated = 0;
  std::size_t roundness_unbounded = 0;
  /// Minimum finite roundness over evaluated subsets and its witness,
  /// ties broken by the lexicographically smallest index set.
  std::optional<double> min_q;
  std::vector<std::uint32_t> argmin_subset;

  friend bool operator==(const ScanSummary&, const ScanSummary&) = default;
};

/// Exhaustive scan of all nonempty subsets of H_n up to max_size, n <= 4.
/// Subsets are split across OpenMP threads and merged deterministically.
ScanSummary scan_subsets(std::size_t n, const ScanOptions& opts = {});

/// Single-threaded reference for scan_subsets.
ScanSummary scan_subsets_serial(std::size_t n, const ScanOptions& opts = {});

using CubeEmbedding = std::vector<CubeVertex>;

/// True iff images[v] realize every path-metric distance of `g` as a
/// Hamming distance.
bool is_isometric_embedding(const Graph& g, const CubeEmbedding& images);

/// Backtracking search for an isometric embedding of the tree `t`
/// (k <= 7 vertices) into H_n (n <= 6). Vertices are placed in BFS order
/// from vertex 0, which is pinned to the origin (the cube is
/// vertex-transitive); candidates must match the distance to every placed
/// vertex.
std::optional<CubeEmbedding> tree_embedding_search(const Graph& t, std::size_t n);

/// Path on k vertices into H_{k-1}: vertex j maps to j leading ones followed
/// by k-1-j zeros.
CubeEmbedding path_embedding_witness(std::size_t k);

}  // namespace roundness
