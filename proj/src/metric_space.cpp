#include "roundness/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roundness/error.hpp"

namespace roundness {

RealMatrix to_real(const IntMatrix& m) {
  RealMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      r(i, j) = static_cast<double>(m(i, j));
  return r;
}

namespace {

std::string pair_str(std::size_t i, std::size_t j) {
  std::ostringstream os;
  os << "(" << i << ", " << j << ")";
  return os.str();
}

}  // namespace

FiniteMetricSpace build_metric_space(RealMatrix matrix,
                                     std::vector<std::string> labels,
                                     bool validate_triangle) {
  const std::size_t n = matrix.rows();
  if (!matrix.square())
    throw Error(ErrorKind::DimensionMismatch, "distance matrix is not square");
  if (n < 2)
    throw Error(ErrorKind::DimensionMismatch,
                "a metric space needs at least 2 points");
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  } else if (labels.size() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "label count does not match matrix size");
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (matrix(i, i) != 0.0)
      throw Error(ErrorKind::NonzeroDiagonal,
                  "nonzero diagonal entry at " + pair_str(i, i));
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix(i, j);
      if (!std::isfinite(v))
        throw Error(ErrorKind::NegativeEntry,
                    "non-finite entry at " + pair_str(i, j));
      if (v < 0.0)
        throw Error(ErrorKind::NegativeEntry,
                    "negative entry at " + pair_str(i, j));
      if (v != matrix(j, i))
        throw Error(ErrorKind::NotSymmetric,
                    "asymmetric entries at " + pair_str(i, j));
      if (i != j && v == 0.0)
        throw Error(ErrorKind::ZeroDistance,
                    "zero distance between distinct points " + pair_str(i, j));
    }
  }

  if (validate_triangle) {
    const double scale = max_abs(matrix);
    const double slack = 1e-12 * scale;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (matrix(i, j) > matrix(i, k) + matrix(k, j) + slack) {
            std::ostringstream os;
            os << "triangle inequality fails: d(" << i << "," << j
               << ") = " << matrix(i, j) << " > d(" << i << "," << k
               << ") + d(" << k << "," << j << ") = "
               << matrix(i, k) + matrix(k, j);
            throw Error(ErrorKind::TriangleViolation, os.str());
          }
  }
  return FiniteMetricSpace(std::move(matrix), std::move(labels));
}

FiniteMetricSpace FiniteMetricSpace::subspace(
    std::span<const std::size_t> points) const {
  RealMatrix d(points.size(), points.size());
  std::vector<std::string> labels;
  labels.reserve(points.size());
  for (std::size_t a = 0; a < points.size(); ++a) {
    if (points[a] >= size())
      throw Error(ErrorKind::IndexOutOfRange, "subspace index out of range");
    labels.push_back(labels_[points[a]]);
    for (std::size_t b = 0; b < points.size(); ++b)
      d(a, b) = dist_(points[a], points[b]);
  }
  return build_metric_space(std::move(d), std::move(labels), false);
}

FiniteMetricSpace FiniteMetricSpace::relabeled(
    std::span<const std::size_t> perm) const {
  if (perm.size() != size())
    throw Error(ErrorKind::DimensionMismatch, "permutation has wrong length");
  return subspace(perm);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double c) const {
  if (!(c > 0.0))
    throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
  RealMatrix d = dist_;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = 0; j < size(); ++j) d(i, j) *= c;
  return FiniteMetricSpace(std::move(d), labels_);
}

PowerMatrix power_matrix(const FiniteMetricSpace& space, double p) {
  if (!(p >= 0.0))
    throw Error(ErrorKind::NegativeExponent, "exponent p must be >= 0");
  const std::size_t n = space.size();
  PowerMatrix pm{p, RealMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = p == 1.0 ? space(i, j) : std::pow(space(i, j), p);
      pm.entries(i, j) = v;
      pm.entries(j, i) = v;
    }
  return pm;
}

bool has_row_permutation_property(const FiniteMetricSpace& space,
                                  double rel_tol) {
  const std::size_t n = space.size();
  auto sorted_row = [&](std::size_t i) {
    auto r = space.dist().row(i);
    std::vector<double> v(r.begin(), r.end());
    std::sort(v.begin(), v.end());
    return v;
  };
  const auto first = sorted_row(0);
  for (std::size_t i = 1; i < n; ++i) {
    const auto row = sorted_row(i);
    for (std::size_t j = 0; j < n; ++j) {
      const double a = first[j], b = row[j];
      if (a == b) continue;
      if (std::abs(a - b) > rel_tol * std::max(std::abs(a), std::abs(b)))
        return false;
    }
  }
  return true;
}

double quadratic_form(const PowerMatrix& pm, std::span<const double> eta) {
  const std::size_t n = pm.size();
  if (eta.size() != n)
    throw Error(ErrorKind::DimensionMismatch,
                "weight vector length does not match the space");
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (eta[i] == 0.0) continue;
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j) r += pm.entries(i, j) * eta[j];
    s += eta[i] * r;
  }
  return s;
}

HyperplaneBasis hyperplane_basis(std::size_t n) {
  if (n < 2)
    throw Error(ErrorKind::DimensionMismatch, "hyperplane basis needs n >= 2");
  HyperplaneBasis basis{n, RealMatrix(n, n - 1)};
  std::vector<Vector> done;
  done.reserve(n - 1);
  for (std::size_t k = 1; k < n; ++k) {
    Vector v(n, 0.0);
    v[0] = 1.0;
    v[k] = -1.0;
    for (const auto& q : done) {
      const double c = dot(q, v);
      for (std::size_t i = 0; i < n; ++i) v[i] -= c * q[i];
    }
    const double norm = std::sqrt(dot(v, v));
    for (double& x : v) x /= norm;
    for (std::size_t i = 0; i < n; ++i) basis.columns(i, k - 1) = v[i];
    done.push_back(std::move(v));
  }
  return basis;
}

Vector HyperplaneBasis::lift(std::span<const double> w) const {
  if (w.size() + 1 != n)
    throw Error(ErrorKind::DimensionMismatch,
                "hyperplane coordinates have wrong length");
  return columns * w;
}

void canonicalize_direction(Vector& v) {
  const double norm = std::sqrt(dot(v, v));
  if (norm == 0.0) return;
  const double scale = max_abs(v);
  double sign = 1.0;
  for (double x : v)
    if (std::abs(x) > 1e-12 * scale) {
      sign = x < 0 ? -1.0 : 1.0;
      break;
    }
  for (double& x : v) x *= sign / norm;
}

}  // namespace roundness
