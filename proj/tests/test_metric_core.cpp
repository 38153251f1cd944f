#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "roundness/error.hpp"
#include "roundness/graphs.hpp"
#include "roundness/hamming.hpp"
#include "roundness/metric_space.hpp"
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

}  // namespace

TEST_CASE("build_metric_space accepts a two-point metric") {
  const auto s = build_metric_space({{0, 1}, {1, 0}});
  CHECK(s.size() == 2);
  CHECK(s.labels() == std::vector<std::string>{"x0", "x1"});
}

TEST_CASE("build_metric_space reports the offending triangle") {
  try {
    build_metric_space({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    FAIL("expected TriangleViolation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TriangleViolation);
    CHECK(std::string(e.what()).find("d(0,2)") != std::string::npos);
  }
  // Skipping validation lets the same matrix through.
  CHECK(build_metric_space({{0, 1, 3}, {1, 0, 1}, {3, 1, 0}}, {}, false).size() == 3);
}

TEST_CASE("build_metric_space rejects malformed matrices") {
  CHECK(kind_of([] { build_metric_space({{0, 1}, {2, 0}}); }) == ErrorKind::NotSymmetric);
  CHECK(kind_of([] { build_metric_space({{1, 1}, {1, 0}}); }) == ErrorKind::NonzeroDiagonal);
  CHECK(kind_of([] { build_metric_space({{0, -1}, {-1, 0}}); }) == ErrorKind::NegativeEntry);
  CHECK(kind_of([] { build_metric_space({{0, 0}, {0, 0}}); }) == ErrorKind::ZeroDistance);
  CHECK(kind_of([] { build_metric_space({{0}}); }) == ErrorKind::DimensionMismatch);
  CHECK(kind_of([] { build_metric_space({{0, 1}, {1, 0}}, {"a"}); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("C_4 path metric is a valid space") {
  const RealMatrix c4{{0, 1, 2, 1}, {1, 0, 1, 2}, {2, 1, 0, 1}, {1, 2, 1, 0}};
  const auto s = build_metric_space(c4);
  CHECK(s.dist() == c4);
  CHECK(path_metric(cycle_graph(4)).dist() == c4);
}

TEST_CASE("power_matrix") {
  const auto two = build_metric_space({{0, 1}, {1, 0}});
  CHECK(power_matrix(two, 1.0).entries == RealMatrix{{0, 1}, {1, 0}});

  SUBCASE("p = 0 gives J - I with spectrum {n-1, -1, ...}") {
    const auto pet = path_metric(petersen_graph());
    const auto d0 = power_matrix(pet, 0.0).entries;
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 10; ++j) CHECK(d0(i, j) + (i == j ? 1.0 : 0.0) == 1.0);
    const auto sd = eigensym(d0);
    CHECK(sd.eigenvalues.front() == doctest::Approx(9.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 10; ++k)
      CHECK(sd.eigenvalues[k] == doctest::Approx(-1.0).epsilon(1e-12));
  }

  SUBCASE("C_4 squared") {
    const auto d2 = power_matrix(path_metric(cycle_graph(4)), 2.0).entries;
    CHECK(d2(0, 1) == 1.0);
    CHECK(d2(0, 2) == 4.0);
    CHECK(d2(0, 3) == 1.0);
  }

  CHECK(kind_of([&] { power_matrix(two, -0.5); }) == ErrorKind::NegativeExponent);
}

TEST_CASE("power_matrix is symmetric with zero diagonal") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> exp(0.0, 6.0);
  for (const char* spec : {"cycle:7", "petersen", "complete_bipartite:3", "hypercube:3"}) {
    const auto s = path_metric(parse_graph_spec(spec));
    for (int t = 0; t < 10; ++t) {
      const auto d = power_matrix(s, exp(rng)).entries;
      for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(d(i, i) == 0.0);
        for (std::size_t j = 0; j < s.size(); ++j) CHECK(d(i, j) == d(j, i));
      }
    }
  }
}

TEST_CASE("row permutation property") {
  CHECK(has_row_permutation_property(path_metric(cycle_graph(5))));
  CHECK_FALSE(has_row_permutation_property(path_metric(path_graph(3))));
  CHECK(has_row_permutation_property(cube_metric_space(3)));

  SUBCASE("exact by default, relative tolerance on request") {
    const auto s = build_metric_space({{0, 1, 1 + 1e-14}, {1, 0, 1}, {1 + 1e-14, 1, 0}});
    CHECK_FALSE(has_row_permutation_property(s));
    CHECK(has_row_permutation_property(s, 1e-12));
  }

  SUBCASE("invariant under relabeling") {
    std::mt19937 rng(11);
    for (const char* spec : {"petersen", "cycle:6", "path:5", "star:4", "hypercube:3"}) {
      const auto s = path_metric(parse_graph_spec(spec));
      const bool base = has_row_permutation_property(s);
      std::vector<std::size_t> perm(s.size());
      std::iota(perm.begin(), perm.end(), 0);
      for (int t = 0; t < 20; ++t) {
        std::shuffle(perm.begin(), perm.end(), rng);
        CHECK(has_row_permutation_property(s.relabeled(perm)) == base);
      }
    }
  }
}

TEST_CASE("quadratic_form") {
  const auto two = power_matrix(build_metric_space({{0, 1}, {1, 0}}), 1.0);
  CHECK(quadratic_form(two, std::vector<double>{0, 0}) == 0.0);
  CHECK(quadratic_form(two, std::vector<double>{1, -1}) == -2.0);

  const auto h2 = power_matrix(cube_metric_space(2), 1.0);
  CHECK(quadratic_form(h2, std::vector<double>{1, -1, -1, 1}) == 0.0);

  CHECK(kind_of([&] { quadratic_form(two, std::vector<double>{1, 0, -1}); }) ==
        ErrorKind::DimensionMismatch);
}

TEST_CASE("two-point spaces have every p-negative type") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0), e(0.0, 20.0), d(0.1, 10.0);
  for (int t = 0; t < 200; ++t) {
    const double dist = d(rng), p = e(rng), a = u(rng);
    const auto pm = power_matrix(build_metric_space({{0, dist}, {dist, 0}}), p);
    const double f = quadratic_form(pm, std::vector<double>{a, -a});
    CHECK(f <= 0.0);
    CHECK(f == doctest::Approx(-2.0 * std::pow(dist, p) * a * a).epsilon(1e-12));
  }
}

TEST_CASE("hyperplane_basis") {
  const auto b2 = hyperplane_basis(2);
  CHECK(b2.columns.cols() == 1);
  CHECK(b2.columns(0, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(b2.columns(1, 0) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-15));

  for (std::size_t n : {3, 5, 16, 40}) {
    const auto b = hyperplane_basis(n);
    const auto gram = b.columns.transposed() * b.columns;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      double colsum = 0.0;
      for (std::size_t r = 0; r < n; ++r) colsum += b.columns(r, i);
      CHECK(std::abs(colsum) <= 1e-12);
      for (std::size_t j = 0; j + 1 < n; ++j)
        CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-12);
    }
  }
  CHECK(kind_of([] { hyperplane_basis(1); }) == ErrorKind::DimensionMismatch);
}

TEST_CASE("subspace and scaling") {
  const auto h3 = cube_metric_space(3);
  const std::vector<std::size_t> pts{0, 3, 5};
  const auto sub = h3.subspace(pts);
  CHECK(sub.labels() == std::vector<std::string>{"000", "011", "101"});
  CHECK(sub(0, 1) == 2.0);
  CHECK(h3.scaled(2.5)(0, 7) == 7.5);
  CHECK(kind_of([&] { h3.scaled(0.0); }) == ErrorKind::InvalidArgument);
}
