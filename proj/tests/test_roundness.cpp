#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "roundness/error.hpp"
#include "roundness/graphs.hpp"
#include "roundness/hamming.hpp"
#include "roundness/roundness.hpp"
#include "roundness/spectral.hpp"

using namespace roundness;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::InvalidArgument;
}

// Frozen output of an independent numpy/scipy computation (QR basis of the
// zero-sum hyperplane, grid scan followed by brentq on the top eigenvalue).
struct OracleQ {
  const char* spec;
  double q;
};
constexpr OracleQ kOracle[] = {
    {"cycle:4", 1.0},
    {"cycle:5", 1.3884838272612343},
    {"cycle:6", 1.0},
    {"petersen", 1.0},
    {"complete_bipartite:3", 0.5849625007211561},
    {"hypercube:2", 1.0},
    {"hypercube:3", 1.0},
    {"dodecahedron", 1.0},
    {"icosahedron", 1.0},
    {"circulant:8:1,3", 0.41503749927884376},
    {"path:3", 2.0},
    {"star:3", 1.584962500721156},
};

}  // namespace

TEST_CASE("negtype_form_matrix") {
  const auto m = negtype_form_matrix(build_metric_space({{0, 1}, {1, 0}}), 1.0);
  REQUIRE(m.rows() == 1);
  CHECK(m(0, 0) == doctest::Approx(-1.0).epsilon(1e-15));

  const auto h2 = negtype_form_matrix(cube_metric_space(2), 1.0);
  const auto sd = eigensym(h2);
  CHECK(std::abs(sd.eigenvalues[0]) <= 1e-12);
  CHECK(sd.eigenvalues[1] == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(sd.eigenvalues[2] == doctest::Approx(-2.0).epsilon(1e-12));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(h2(i, j) == h2(j, i));
}

TEST_CASE("check_negative_type") {
  SUBCASE("H_2 at p = 1 holds but is not strict") {
    const auto v = check_negative_type(cube_metric_space(2), 1.0);
    CHECK(v.holds);
    CHECK_FALSE(v.strict);
    REQUIRE(v.witness);
    const auto& eta = v.witness->eta;
    // Proportional to (1, -1, -1, 1).
    CHECK(std::abs(std::accumulate(eta.begin(), eta.end(), 0.0)) <= 1e-12);
    CHECK(eta[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(eta[1] == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(eta[2] == doctest::Approx(-0.5).epsilon(1e-9));
    CHECK(eta[3] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(std::abs(v.witness->form_value) <= 1e-9);
  }
  SUBCASE("H_2 at p = 1.5 fails") {
    const auto v = check_negative_type(cube_metric_space(2), 1.5);
    CHECK_FALSE(v.holds);
    REQUIRE(v.witness);
    CHECK(v.witness->form_value > 0.0);
  }
  SUBCASE("complete graphs are strict at every p") {
    const auto k3 = path_metric(complete_graph(3));
    for (double p : {0.0, 1.0, 10.0, 50.0}) {
      const auto v = check_negative_type(k3, p);
      CHECK(v.holds);
      CHECK(v.strict);
      CHECK_FALSE(v.witness);
    }
  }
  SUBCASE("p = 0 is strict for every space") {
    for (const char* spec : {"cycle:6", "petersen", "hypercube:3", "path:4"}) {
      CAPTURE(spec);
      CHECK(check_negative_type(path_metric(parse_graph_spec(spec)), 0.0).strict);
    }
  }
  CHECK(kind_of([] { check_negative_type(cube_metric_space(2), -1.0); }) ==
        ErrorKind::NegativeExponent);
}

TEST_CASE("generalized_roundness matches the frozen oracle") {
  for (const auto& [spec, q] : kOracle) {
    CAPTURE(spec);
    const auto r = generalized_roundness(path_metric(parse_graph_spec(spec)));
    REQUIRE(r.finite());
    CHECK(std::abs(r.q - q) <= 1e-6);
    CHECK(r.p_lo <= r.q);
    CHECK(r.q <= r.p_hi);
    CHECK(r.p_hi - r.p_lo <= 2e-9 * std::max(1.0, r.q));
  }
}

TEST_CASE("complete graphs have unbounded roundness") {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto r = generalized_roundness(path_metric(complete_graph(n)));
    CHECK(r.status == RoundnessStatus::Unbounded);
    CHECK(std::isinf(r.p_hi));
    CHECK_FALSE(r.certificate);
  }
}

TEST_CASE("row-permutation spaces carry a determinant certificate") {
  for (const char* spec : {"cycle:4", "cycle:5", "cycle:6", "petersen", "complete_bipartite:3",
                           "hypercube:2", "hypercube:3"}) {
    CAPTURE(spec);
    const auto s = path_metric(parse_graph_spec(spec));
    const auto r = generalized_roundness(s);
    REQUIRE(r.finite());
    CHECK(r.row_permutation);
    CHECK(r.method == RoundnessMethod::DeterminantFastPath);
    REQUIRE(r.det_at_q);
    CHECK(*r.det_at_q <= 1e-6);
    REQUIRE(r.certificate);
    const auto& u = *r.certificate;
    CHECK(std::abs(std::accumulate(u.begin(), u.end(), 0.0)) <= 1e-9);
    CHECK(std::sqrt(dot(u, u)) == doctest::Approx(1.0).epsilon(1e-12));
    const auto dq = power_matrix(s, r.q).entries;
    CHECK(max_abs(dq * u) <= 1e-6 * std::max(1.0, max_abs(dq)));
    // Half the exponent is strictly inside the negative-type range.
    CHECK(normalized_determinant(power_matrix(s, r.q / 2).entries) > 1e-6);
  }
  // Non-row-permutation spaces use the generic path only.
  const auto star = generalized_roundness(path_metric(star_graph(3)));
  CHECK_FALSE(star.row_permutation);
  CHECK(star.method == RoundnessMethod::SpectralBisection);
  CHECK_FALSE(star.det_at_q);
}

TEST_CASE("p-negative type holds exactly on [0, q]") {
  std::mt19937 rng(2);
  for (const char* spec : {"cycle:5", "complete_bipartite:3", "path:3", "circulant:8:1,3"}) {
    CAPTURE(spec);
    const auto s = path_metric(parse_graph_spec(spec));
    const double q = generalized_roundness(s).q;
    std::uniform_real_distribution<double> below(0.0, q * (1 - 1e-4));
    std::uniform_real_distribution<double> above(q * (1 + 1e-4), 3 * q + 1);
    for (int t = 0; t < 10; ++t) {
      CHECK(check_negative_type(s, below(rng)).holds);
      CHECK_FALSE(check_negative_type(s, above(rng)).holds);
    }
  }
}

TEST_CASE("roundness is invariant under relabeling and scaling") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> c(0.1, 10.0);
  for (const char* spec : {"cycle:5", "complete_bipartite:3", "star:3", "hypercube:2"}) {
    CAPTURE(spec);
    const auto s = path_metric(parse_graph_spec(spec));
    const double q = generalized_roundness(s).q;
    std::vector<std::size_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), 0);
    for (int t = 0; t < 5; ++t) {
      std::shuffle(perm.begin(), perm.end(), rng);
      CHECK(std::abs(generalized_roundness(s.relabeled(perm)).q - q) <= 1e-6);
      CHECK(std::abs(generalized_roundness(s.scaled(c(rng))).q - q) <= 1e-6);
    }
  }
}

TEST_CASE("generalized_roundness option validation") {
  const auto s = cube_metric_space(2);
  CHECK(kind_of([&] { generalized_roundness(s, {.p_max = 0.5}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { generalized_roundness(s, {.tol_p = 0.0}); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([&] { generalized_roundness(s, {.tol_eig = -1.0}); }) ==
        ErrorKind::InvalidArgument);
}

TEST_CASE("kernel_coincidence_check") {
  for (const char* spec : {"hypercube:2", "cycle:4", "cycle:5", "petersen", "complete_bipartite:3"}) {
    CAPTURE(spec);
    const auto s = path_metric(parse_graph_spec(spec));
    const auto r = generalized_roundness(s);
    const auto k = kernel_coincidence_check(s, r.q);
    CHECK(k.holds);
    CHECK(k.max_defect <= 1e-6);
    CHECK(k.form_null_dim >= 1);
    CHECK(k.form_null_dim == k.matrix_null_dim);
  }
  // H_2: null space of D_1 is spanned by (1, -1, -1, 1).
  const auto h2 = kernel_coincidence_check(cube_metric_space(2), 1.0);
  CHECK(h2.form_null_dim == 1);

  CHECK(kind_of([] { kernel_coincidence_check(path_metric(path_graph(3)), 2.0); }) ==
        ErrorKind::HypothesisViolated);
  CHECK(kind_of([] {
          kernel_coincidence_check(cube_metric_space(2), std::numeric_limits<double>::infinity());
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("gr_inequality_check examples") {
  const auto h2 = cube_metric_space(2);
  const std::vector<std::size_t> a{0, 3}, b{1, 2};
  const auto at1 = gr_inequality_check(h2, 1.0, a, b);
  CHECK(at1.lhs == 4.0);
  CHECK(at1.rhs == 4.0);
  CHECK(at1.holds);

  const auto at2 = gr_inequality_check(h2, 2.0, a, b);
  CHECK(at2.lhs == 8.0);
  CHECK(at2.rhs == 4.0);
  CHECK_FALSE(at2.holds);

  // Repeated points contribute zero distance.
  const std::vector<std::size_t> rep{0, 0};
  CHECK(gr_inequality_check(h2, 1.0, rep, rep).lhs == 0.0);

  const std::vector<std::size_t> one{0}, bad{9};
  CHECK(kind_of([&] { gr_inequality_check(h2, 1.0, a, one); }) == ErrorKind::LengthMismatch);
  CHECK(kind_of([&] { gr_inequality_check(h2, 1.0, one, bad); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { gr_inequality_check(h2, -1.0, a, b); }) == ErrorKind::NegativeExponent);
}

TEST_CASE("configuration identity rhs - lhs = -1/2 m^T D m") {
  std::mt19937 rng(19);
  std::uniform_int_distribution<int> pick(0, 7);
  const auto h3 = cube_metric_space(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> a(4), b(4);
    for (auto& x : a) x = pick(rng);
    for (auto& x : b) x = pick(rng);
    const double p = 0.25 * (t % 12);
    const auto g = gr_inequality_check(h3, p, a, b);
    Vector m(8, 0.0);
    for (auto x : a) m[x] += 1.0;
    for (auto x : b) m[x] -= 1.0;
    const double form = quadratic_form(power_matrix(h3, p), m);
    CHECK(g.rhs - g.lhs == doctest::Approx(-0.5 * form).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("a failing witness yields a violated inequality") {
  const auto h2 = cube_metric_space(2);
  const auto v = check_negative_type(h2, 1.5);
  REQUIRE_FALSE(v.holds);
  const auto conf = configuration_from_weights(v.witness->eta);
  REQUIRE(conf.a_idx.size() == conf.b_idx.size());
  REQUIRE_FALSE(conf.a_idx.empty());
  const auto g = gr_inequality_check(h2, 1.5, conf.a_idx, conf.b_idx);
  CHECK_FALSE(g.holds);
}

TEST_CASE("normalized_determinant") {
  CHECK(normalized_determinant(RealMatrix::identity(4)) == doctest::Approx(1.0));
  CHECK(normalized_determinant(to_real(cube_distance_matrix(2))) <= 1e-12);
  RealMatrix k3(3, 3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) k3(i, i) = 0.0;
  CHECK(normalized_determinant(k3) == doctest::Approx(2.0 / std::pow(std::sqrt(2.0), 3)));
}
