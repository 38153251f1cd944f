#include "roundness/roundness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "roundness/error.hpp"
#include "roundness/spectral.hpp"

namespace roundness {

namespace {

RealMatrix restrict_to_hyperplane(const HyperplaneBasis& basis,
                                  const RealMatrix& d) {
  const RealMatrix bt = basis.columns.transposed();
  RealMatrix m = bt * (d * basis.columns);
  // Exact symmetry so the eigensolver sees a symmetric matrix bit-for-bit.
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const double v = 0.5 * (m(i, j) + m(j, i));
      m(i, j) = m(j, i) = v;
    }
  return m;
}

struct FormSpectrum {
  PowerMatrix pm;
  SpectralData spectrum;
  double threshold;
};

FormSpectrum form_spectrum(const FiniteMetricSpace& space,
                           const HyperplaneBasis& basis, double p,
                           double tol_eig) {
  PowerMatrix pm = power_matrix(space, p);
  SpectralData sd = eigensym(restrict_to_hyperplane(basis, pm.entries));
  const double threshold = tol_eig * form_scale(pm);
  return {std::move(pm), std::move(sd), threshold};
}

}  // namespace

RealMatrix negtype_form_matrix(const FiniteMetricSpace& space, double p) {
  const PowerMatrix pm = power_matrix(space, p);
  return restrict_to_hyperplane(hyperplane_basis(space.size()), pm.entries);
}

double form_scale(const PowerMatrix& pm) {
  double best = 0.0;
  for (std::size_t i = 0; i < pm.size(); ++i) {
    const auto r = pm.entries.row(i);
    best = std::max(best, std::accumulate(r.begin(), r.end(), 0.0));
  }
  return std::max(1.0, best);
}

NegTypeVerdict check_negative_type(const FiniteMetricSpace& space, double p,
                                   double tol_eig) {
  const HyperplaneBasis basis = hyperplane_basis(space.size());
  const FormSpectrum fs = form_spectrum(space, basis, p, tol_eig);
  NegTypeVerdict v;
  v.p = p;
  v.max_form_eigenvalue = fs.spectrum.eigenvalues.front();
  v.threshold = fs.threshold;
  v.holds = v.max_form_eigenvalue <= fs.threshold;
  v.strict = v.max_form_eigenvalue < -fs.threshold;
  if (!v.strict) {
    NegativeTypeWitness w;
    w.p = p;
    w.eta = basis.lift(fs.spectrum.eigenvector(0));
    canonicalize_direction(w.eta);
    w.form_value = quadratic_form(fs.pm, w.eta);
    v.witness = std::move(w);
  }
  return v;
}

double normalized_determinant(const RealMatrix& a) {
  RealMatrix scaled = a;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = scaled.row(i);
    const double norm = std::sqrt(dot(r, r));
    if (norm == 0.0) return 0.0;
    for (double& x : r) x /= norm;
  }
  return std::abs(determinant(scaled));
}

RoundnessResult generalized_roundness(const FiniteMetricSpace& space,
                                      const RoundnessOptions& opts) {
  if (!(opts.p_max >= 1.0) || !(opts.tol_p > 0.0) || !(opts.tol_eig >= 0.0))
    throw Error(ErrorKind::InvalidArgument,
                "roundness options need p_max >= 1, tol_p > 0, tol_eig >= 0");
  const HyperplaneBasis basis = hyperplane_basis(space.size());
  RoundnessResult res;
  res.row_permutation = has_row_permutation_property(space, opts.row_tol);

  auto predicate = [&](double p) {
    ++res.iterations;
    const FormSpectrum fs = form_spectrum(space, basis, p, opts.tol_eig);
    return fs.spectrum.eigenvalues.front() <= fs.threshold;
  };

  if (!predicate(0.0))
    throw Error(ErrorKind::BracketFailure,
                "negative-type predicate fails at p = 0; the input is not a "
                "valid metric or the arithmetic is corrupted");

  double lo = 0.0;
  double hi = 1.0;
  while (true) {
    if (!predicate(hi)) break;
    lo = hi;
    if (hi >= opts.p_max) {
      res.status = RoundnessStatus::Unbounded;
      res.p_lo = lo;
      res.p_hi = std::numeric_limits<double>::infinity();
      return res;
    }
    hi = std::min(2.0 * hi, opts.p_max);
  }
  while (hi - lo > opts.tol_p) {
    const double mid = 0.5 * (lo + hi);
    (predicate(mid) ? lo : hi) = mid;
  }
  res.status = RoundnessStatus::Finite;
  res.p_lo = lo;
  res.p_hi = hi;
  res.q = 0.5 * (lo + hi);

  if (res.row_permutation) {
    const FormSpectrum fs = form_spectrum(space, basis, res.q, opts.tol_eig);
    res.det_at_q = normalized_determinant(fs.pm.entries);
    if (*res.det_at_q <= opts.det_tol)
      res.method = RoundnessMethod::DeterminantFastPath;

    Vector u = basis.lift(fs.spectrum.eigenvector(0));
    canonicalize_direction(u);
    const double residual =
        max_abs(fs.pm.entries * u) / std::max(1.0, max_abs(fs.pm.entries));
    res.certificate_residual = residual;
    if (residual <= opts.certificate_tol) res.certificate = std::move(u);
  }
  return res;
}

KernelCoincidenceReport kernel_coincidence_check(const FiniteMetricSpace& space,
                                                 double q, double tol,
                                                 double row_tol) {
  if (!std::isfinite(q) || q < 0.0)
    throw Error(ErrorKind::InvalidArgument,
                "kernel coincidence needs a finite roundness value");
  if (!has_row_permutation_property(space, row_tol))
    throw Error(ErrorKind::HypothesisViolated,
                "rows of the distance matrix are not permutations of each "
                "other; kernel coincidence is not asserted for this space");

  const HyperplaneBasis basis = hyperplane_basis(space.size());
  const PowerMatrix pm = power_matrix(space, q);
  const double scale = std::max(1.0, max_abs(pm.entries));
  const double threshold = tol * scale;
  KernelCoincidenceReport rep;

  // Zero-sum null directions of the form must be null vectors of D_q.
  const SpectralData form = eigensym(restrict_to_hyperplane(basis, pm.entries));
  for (std::size_t k = 0; k < form.eigenvalues.size(); ++k) {
    if (std::abs(form.eigenvalues[k]) > threshold) continue;
    ++rep.form_null_dim;
    const Vector u = basis.lift(form.eigenvector(k));
    rep.max_defect = std::max(rep.max_defect, max_abs(pm.entries * u) / scale);
  }

  // Null vectors of D_q must be zero-sum.
  const SpectralData full = eigensym(pm.entries);
  const double root_n = std::sqrt(static_cast<double>(space.size()));
  for (std::size_t k = 0; k < full.eigenvalues.size(); ++k) {
    if (std::abs(full.eigenvalues[k]) > threshold) continue;
    ++rep.matrix_null_dim;
    const Vector v = full.eigenvector(k);
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    rep.max_defect = std::max(rep.max_defect, std::abs(s) / root_n);
  }

  rep.holds = rep.form_null_dim > 0 && rep.form_null_dim == rep.matrix_null_dim &&
              rep.max_defect <= tol;
  return rep;
}

GrInequality gr_inequality_check(const FiniteMetricSpace& space, double p,
                                 std::span<const std::size_t> a_idx,
                                 std::span<const std::size_t> b_idx, double tol) {
  if (a_idx.size() != b_idx.size() || a_idx.empty())
    throw Error(ErrorKind::LengthMismatch,
                "point lists must be non-empty and of equal length");
  for (auto idx : {a_idx, b_idx})
    for (auto i : idx)
      if (i >= space.size())
        throw Error(ErrorKind::IndexOutOfRange,
                    "point index " + std::to_string(i) + " out of range");
  if (!(p >= 0.0)) throw Error(ErrorKind::NegativeExponent, "exponent p must be >= 0");

  auto dp = [&](std::size_t i, std::size_t j) {
    return i == j ? 0.0 : std::pow(space(i, j), p);
  };
  const std::size_t n = a_idx.size();
  GrInequality g;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = k + 1; l < n; ++l)
      g.lhs += dp(a_idx[k], a_idx[l]) + dp(b_idx[k], b_idx[l]);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) g.rhs += dp(a_idx[j], b_idx[i]);
  g.holds = g.lhs <= g.rhs + tol * std::max(1.0, g.rhs);
  return g;
}

PointConfiguration configuration_from_weights(std::span<const double> eta,
                                              int resolution) {
  const double scale = max_abs(eta);
  if (scale == 0.0 || resolution < 1)
    throw Error(ErrorKind::InvalidArgument, "weights must be nonzero");
  std::vector<long> plus(eta.size(), 0), minus(eta.size(), 0);
  for (std::size_t i = 0; i < eta.size(); ++i) {
    const long m = std::lround(resolution * eta[i] / scale);
    (m > 0 ? plus[i] : minus[i]) = std::abs(m);
  }
  long sp = std::accumulate(plus.begin(), plus.end(), 0L);
  long sm = std::accumulate(minus.begin(), minus.end(), 0L);
  while (sp != sm) {
    auto& side = sp > sm ? plus : minus;
    auto it = std::max_element(side.begin(), side.end());
    --*it;
    (sp > sm ? sp : sm) -= 1;
  }
  PointConfiguration cfg;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    cfg.a_idx.insert(cfg.a_idx.end(), static_cast<std::size_t>(plus[i]), i);
    cfg.b_idx.insert(cfg.b_idx.end(), static_cast<std::size_t>(minus[i]), i);
  }
  if (cfg.a_idx.empty())
    throw Error(ErrorKind::InvalidArgument,
                "weights round to an empty configuration");
  return cfg;
}

}  // namespace roundness
