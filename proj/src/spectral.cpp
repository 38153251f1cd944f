#include "roundness/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "roundness/error.hpp"

namespace roundness {

namespace {

void require_symmetric(const RealMatrix& a, double rel_tol) {
  if (!a.square())
    throw Error(ErrorKind::NotSymmetric, "matrix is not square");
  const double scale = std::max(1.0, max_abs(a));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      if (std::abs(a(i, j) - a(j, i)) > rel_tol * scale)
        throw Error(ErrorKind::NotSymmetric,
                    "matrix is not symmetric at (" + std::to_string(i) + ", " +
                        std::to_string(j) + ")");
}

double off_diagonal_norm(const RealMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

double frobenius(const RealMatrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

}  // namespace

SpectralData eigensym(const RealMatrix& input, const EigenOptions& opts) {
  require_symmetric(input, opts.symmetry_tol);
  const std::size_t n = input.rows();

  // Work on the symmetrized copy so tiny input asymmetries do not leak.
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = 0.5 * (input(i, j) + input(j, i));
  RealMatrix v = RealMatrix::identity(n);

  const double target = 1e-15 * frobenius(a);
  int sweep = 0;
  for (; sweep < opts.max_sweeps; ++sweep) {
    const double off = off_diagonal_norm(a);
    if (off <= target || off == 0.0) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Rutishauser's rotation: t = tan(theta) with |theta| <= pi/4.
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p), arq = a(r, q);
          const double np = arp - s * (arq + tau * arp);
          const double nq = arq + s * (arp - tau * arq);
          a(r, p) = a(p, r) = np;
          a(r, q) = a(q, r) = nq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p), vrq = v(r, q);
          v(r, p) = vrp - s * (vrq + tau * vrp);
          v(r, q) = vrq + s * (vrp - tau * vrq);
        }
      }
    }
  }
  if (sweep == opts.max_sweeps && off_diagonal_norm(a) > target) {
    std::ostringstream os;
    os << "Jacobi did not converge within " << opts.max_sweeps
       << " sweeps (off-diagonal norm " << off_diagonal_norm(a) << ")";
    throw Error(ErrorKind::NoConvergence, os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });

  SpectralData out;
  out.sweeps = sweep;
  out.eigenvalues.resize(n);
  out.eigenvectors = RealMatrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    out.eigenvalues[k] = a(src, src);
    Vector col = v.column(src);
    const double scale = max_abs(col);
    for (double x : col)
      if (std::abs(x) > 1e-9 * scale) {
        if (x < 0)
          for (double& y : col) y = -y;
        break;
      }
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = col[r];
  }

  double residual = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += out.eigenvectors(i, k) * out.eigenvalues[k] * out.eigenvectors(j, k);
      residual = std::max(residual, std::abs(input(i, j) - s));
    }
  out.residual = residual;
  return out;
}

double determinant(const RealMatrix& input) {
  if (!input.square())
    throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = input.rows();
  RealMatrix a = input;
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
    }
  }
  return det;
}

std::vector<Vector> null_space(const RealMatrix& a, double tol) {
  const SpectralData sd = eigensym(a);
  const double scale =
      std::max(1.0, sd.eigenvalues.empty() ? 0.0 : std::abs(sd.eigenvalues[0]));
  std::vector<Vector> out;
  for (std::size_t k = 0; k < sd.eigenvalues.size(); ++k)
    if (std::abs(sd.eigenvalues[k]) <= tol * scale)
      out.push_back(sd.eigenvector(k));
  return out;
}

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN)
    throw Error(ErrorKind::Overflow, "exact elimination overflowed 64 bits");
  return static_cast<std::int64_t>(v);
}

// (x * y - z * w) / d, exact.
std::int64_t bareiss_step(std::int64_t x, std::int64_t y, std::int64_t z,
                          std::int64_t w, std::int64_t d) {
  const i128 num = static_cast<i128>(x) * y - static_cast<i128>(z) * w;
  return narrow(num / d);
}

std::int64_t gcd_abs(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

void reduce_content(std::span<std::int64_t> v) {
  std::int64_t g = 0;
  for (auto x : v) g = gcd_abs(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
}

}  // namespace

std::size_t rank_exact(const IntMatrix& input) {
  if (input.empty()) return 0;
  IntMatrix a = input;
  const std::size_t m = a.rows(), n = a.cols();
  std::int64_t prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = r;
    while (piv < m && a(piv, c) == 0) ++piv;
    if (piv == m) continue;
    if (piv != r)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(piv, j));
    for (std::size_t i = r + 1; i < m; ++i) {
      for (std::size_t j = c + 1; j < n; ++j)
        a(i, j) = bareiss_step(a(r, c), a(i, j), a(i, c), a(r, j), prev);
      a(i, c) = 0;
    }
    prev = a(r, c);
    ++r;
  }
  return r;
}

std::int64_t determinant_exact(const IntMatrix& input) {
  if (!input.square())
    throw Error(ErrorKind::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = input.rows();
  if (n == 0) return 1;
  IntMatrix a = input;
  std::int64_t prev = 1;
  int sign = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && a(piv, c) == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(piv, j));
      sign = -sign;
    }
    for (std::size_t i = c + 1; i < n; ++i) {
      for (std::size_t j = c + 1; j < n; ++j)
        a(i, j) = bareiss_step(a(c, c), a(i, j), a(i, c), a(c, j), prev);
      a(i, c) = 0;
    }
    prev = a(c, c);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<std::vector<std::int64_t>> null_space_exact(const IntMatrix& input) {
  const std::size_t m = input.rows(), n = input.cols();
  IntMatrix a = input;

  // Integer Gauss-Jordan; every row is kept content-reduced.
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(n, false);
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < m; ++c) {
    std::size_t piv = r;
    while (piv < m && a(piv, c) == 0) ++piv;
    if (piv == m) continue;
    if (piv != r)
      for (std::size_t j = 0; j < n; ++j) std::swap(a(r, j), a(piv, j));
    reduce_content(a.row(r));
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || a(i, c) == 0) continue;
      const std::int64_t p = a(r, c), f = a(i, c);
      for (std::size_t j = 0; j < n; ++j)
        a(i, j) = narrow(static_cast<i128>(p) * a(i, j) -
                         static_cast<i128>(f) * a(r, j));
      reduce_content(a.row(i));
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++r;
  }

  std::vector<std::vector<std::int64_t>> basis;
  for (std::size_t f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    // x_f = L and x_pc = -a(k, f) * L / a(k, pc) for each pivot row k.
    std::int64_t lcm = 1;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      const std::int64_t p = a(k, pivot_col[k]);
      const std::int64_t need = (p < 0 ? -p : p) / gcd_abs(p, a(k, f));
      lcm = narrow(static_cast<i128>(lcm) / std::gcd(lcm, need) * need);
    }
    std::vector<std::int64_t> x(n, 0);
    x[f] = lcm;
    for (std::size_t k = 0; k < pivot_col.size(); ++k) {
      const std::int64_t p = a(k, pivot_col[k]);
      x[pivot_col[k]] = narrow(-static_cast<i128>(a(k, f)) * lcm / p);
    }
    reduce_content(x);
    for (auto v : x)
      if (v != 0) {
        if (v < 0)
          for (auto& y : x) y = -y;
        break;
      }
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace roundness
