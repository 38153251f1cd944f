#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "roundness/matrix.hpp"

namespace roundness {

/// A validated finite metric space: symmetric distance matrix, zero
/// diagonal, strictly positive off-diagonal entries and (unless validation
/// was skipped) the triangle inequality.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return dist_.rows(); }
  const RealMatrix& dist() const noexcept { return dist_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  /// Induced sub-metric on the given point indices, in the given order.
  FiniteMetricSpace subspace(std::span<const std::size_t> points) const;

  /// Same metric with points reordered: new point i is old point perm[i].
  FiniteMetricSpace relabeled(std::span<const std::size_t> perm) const;

  /// Uniformly scaled metric c * d, c > 0.
  FiniteMetricSpace scaled(double c) const;

 private:
  friend FiniteMetricSpace build_metric_space(RealMatrix,
                                              std::vector<std::string>, bool);
  FiniteMetricSpace(RealMatrix dist, std::vector<std::string> labels)
      : dist_(std::move(dist)), labels_(std::move(labels)) {}

  RealMatrix dist_;
  std::vector<std::string> labels_;
};

/// Validates `matrix` and wraps it. Empty `labels` get "x0", "x1", ...
/// With `validate_triangle == false` the O(n^3) triangle check is skipped;
/// all other invariants are always enforced.
FiniteMetricSpace build_metric_space(RealMatrix matrix,
                                     std::vector<std::string> labels = {},
                                     bool validate_triangle = true);

/// D_p = [d(x_i, x_j)^p] with 0^p = 0 for every p >= 0.
struct PowerMatrix {
  double p = 0.0;
  RealMatrix entries;

  std::size_t size() const noexcept { return entries.rows(); }
};

PowerMatrix power_matrix(const FiniteMetricSpace& space, double p);

/// True iff every row of the distance matrix is a rearrangement of the first.
/// Sorted rows are compared entrywise with relative tolerance `rel_tol`;
/// the default 0 compares the stored reals exactly.
bool has_row_permutation_property(const FiniteMetricSpace& space,
                                  double rel_tol = 0.0);

/// eta^T D_p eta.
double quadratic_form(const PowerMatrix& pm, std::span<const double> eta);

/// Orthonormal basis of the hyperplane orthogonal to the all-ones vector,
/// stored as the columns of an n x (n-1) matrix. Gram-Schmidt on
/// e_1 - e_2, e_1 - e_3, ..., e_1 - e_n in that order.
struct HyperplaneBasis {
  std::size_t n = 0;
  RealMatrix columns;

  /// B * w for w of length n - 1.
  Vector lift(std::span<const double> w) const;
};

HyperplaneBasis hyperplane_basis(std::size_t n);

/// A zero-sum weight vector together with its quadratic-form value at `p`.
struct NegativeTypeWitness {
  double p = 0.0;
  Vector eta;
  double form_value = 0.0;
};

/// Normalizes to unit length with the first nonzero entry positive.
void canonicalize_direction(Vector& v);

}  // namespace roundness
