#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "roundness/metric_space.hpp"

namespace roundness {

/// M(p) = B^T D_p B, the negative-type form restricted to the zero-sum
/// hyperplane (B = hyperplane_basis(n)). Negative semidefinite iff the space
/// has p-negative type, negative definite iff strict.
RealMatrix negtype_form_matrix(const FiniteMetricSpace& space, double p);

/// Scale that `tol_eig` is measured against: the Perron root of D_p, which
/// for a nonnegative symmetric matrix lies between its smallest and largest
/// row sums. The largest row sum is used (exact on row-permutation spaces),
/// floored at 1.
double form_scale(const PowerMatrix& pm);

struct NegTypeVerdict {
  double p = 0.0;
  bool holds = false;
  bool strict = false;
  double max_form_eigenvalue = 0.0;
  /// Threshold actually applied: tol_eig * form_scale.
  double threshold = 0.0;
  /// Present iff not strict: eta = B w for a unit top eigenvector w of M(p).
  std::optional<NegativeTypeWitness> witness;
};

NegTypeVerdict check_negative_type(const FiniteMetricSpace& space, double p,
                                   double tol_eig = 1e-9);

struct RoundnessOptions {
  double p_max = 64.0;
  double tol_p = 1e-9;
  double tol_eig = 1e-9;
  /// Bound on the lifted certificate residual, relative to max(1, |D_q|_max).
  double certificate_tol = 1e-6;
  /// Normalized |det D_q| bound for the determinant cross-check.
  double det_tol = 1e-6;
  /// Relative tolerance of the row-permutation check (0 = exact).
  double row_tol = 0.0;
};

enum class RoundnessStatus { Finite, Unbounded };
enum class RoundnessMethod { DeterminantFastPath, SpectralBisection };

struct RoundnessResult {
  RoundnessStatus status = RoundnessStatus::Unbounded;
  double q = 0.0;
  double p_lo = 0.0;
  double p_hi = 0.0;
  int iterations = 0;
  RoundnessMethod method = RoundnessMethod::SpectralBisection;
  bool row_permutation = false;
  /// Normalized determinant of D_q (row-permutation inputs with finite q).
  std::optional<double> det_at_q;
  /// Unit u in the zero-sum hyperplane with D_q u ~ 0.
  std::optional<Vector> certificate;
  std::optional<double> certificate_residual;

  bool finite() const noexcept { return status == RoundnessStatus::Finite; }
};

/// Largest p such that the space has p-negative type, found by bisection on
/// "max eigenvalue of M(p) <= tol_eig * scale". Downward closure of
/// p-negative type makes the predicate monotone. Upper bracket by doubling
/// from 1; if the predicate still holds at p_max the result is Unbounded.
/// For row-permutation spaces the result is cross-checked against
/// det(D_q) = 0 and a kernel certificate is attached.
RoundnessResult generalized_roundness(const FiniteMetricSpace& space,
                                      const RoundnessOptions& opts = {});

/// |det A| / prod_i |row_i|_2, in [0, 1] by Hadamard's inequality.
double normalized_determinant(const RealMatrix& a);

struct KernelCoincidenceReport {
  bool holds = false;
  double max_defect = 0.0;
  /// Null dimension of the restricted form M(q) and of D_q.
  std::size_t form_null_dim = 0;
  std::size_t matrix_null_dim = 0;
};

/// At p = q, every zero-sum u with u^T D_q u = 0 satisfies D_q u = 0, and
/// every null vector of D_q is zero-sum. Null spaces are taken with
/// threshold tol * max(1, |D_q|_max); each direction's defect is measured
/// against the same bound. Throws HypothesisViolated without the
/// row-permutation property and InvalidArgument for non-finite q.
KernelCoincidenceReport kernel_coincidence_check(const FiniteMetricSpace& space,
                                                 double q, double tol = 1e-6,
                                                 double row_tol = 0.0);

struct GrInequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

/// sum_{k<l} d(a_k,a_l)^p + d(b_k,b_l)^p  <=  sum_{j,i} d(a_j,b_i)^p.
/// Repeated points are allowed. holds iff lhs <= rhs + tol * max(1, rhs).
GrInequality gr_inequality_check(const FiniteMetricSpace& space, double p,
                                 std::span<const std::size_t> a_idx,
                                 std::span<const std::size_t> b_idx,
                                 double tol = 1e-9);

struct PointConfiguration {
  std::vector<std::size_t> a_idx;
  std::vector<std::size_t> b_idx;
};

/// Rounds a zero-sum weight vector to integer multiplicities: point i
/// appears round(resolution * eta_i^+) times on the a-side and
/// round(resolution * eta_i^-) times on the b-side, with the larger side
/// trimmed so both have equal length. For such a configuration
/// rhs - lhs = -(1/2) m^T D_p m where m is the signed multiplicity vector,
/// so a positive form value yields a violated inequality.
PointConfiguration configuration_from_weights(std::span<const double> eta,
                                              int resolution = 64);

}  // namespace roundness
