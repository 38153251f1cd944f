#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "roundness/matrix.hpp"

namespace roundness {

/// Eigen-decomposition of a symmetric matrix. `eigenvalues` are sorted
/// descending and column i of `eigenvectors` pairs with eigenvalue i.
/// Each eigenvector is oriented so that its first non-negligible entry is
/// positive. `residual` is max|A - V diag(lambda) V^T|.
struct SpectralData {
  Vector eigenvalues;
  RealMatrix eigenvectors;
  double residual = 0.0;
  int sweeps = 0;

  Vector eigenvector(std::size_t i) const { return eigenvectors.column(i); }
};

struct EigenOptions {
  int max_sweeps = 100;
  /// Relative asymmetry accepted on input.
  double symmetry_tol = 1e-12;
};

/// Cyclic Jacobi rotations until the off-diagonal mass reaches rounding
/// level. Throws NotSymmetric or NoConvergence.
SpectralData eigensym(const RealMatrix& a, const EigenOptions& opts = {});

/// LU with partial pivoting.
double determinant(const RealMatrix& a);

/// Orthonormal eigenvectors of `a` whose eigenvalue satisfies
/// |lambda| <= tol * max(1, |lambda_1|).
std::vector<Vector> null_space(const RealMatrix& a, double tol = 1e-9);

// Exact integer linear algebra. Fraction-free (Bareiss) elimination on
// 64-bit integers; intermediate products are formed in 128 bits and an
// Overflow error is raised if a result leaves the 64-bit range.

/// Rank over the rationals. An empty matrix has rank 0.
std::size_t rank_exact(const IntMatrix& a);

std::int64_t determinant_exact(const IntMatrix& a);

/// Integer basis of {x : a x = 0}, one vector per free column, each
/// content-reduced with its first nonzero entry positive.
std::vector<std::vector<std::int64_t>> null_space_exact(const IntMatrix& a);

}  // namespace roundness
