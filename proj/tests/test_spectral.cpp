#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "roundness/error.hpp"
#include "roundness/hamming.hpp"
#include "roundness/spectral.hpp"

using namespace roundness;

namespace {

RealMatrix random_symmetric(std::size_t n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  RealMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = g(rng);
  return a;
}

// Rank over GF(p); equals the rational rank unless p divides a nonzero
// maximal minor, which two large primes make vanishingly unlikely.
std::size_t rank_mod(const IntMatrix& in, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> a(in.rows(), std::vector<std::int64_t>(in.cols()));
  for (std::size_t i = 0; i < in.rows(); ++i)
    for (std::size_t j = 0; j < in.cols(); ++j) a[i][j] = ((in(i, j) % p) + p) % p;
  auto inv = [p](std::int64_t x) {
    std::int64_t r = 1, e = p - 2;
    while (e) {
      if (e & 1) r = static_cast<std::int64_t>((__int128)r * x % p);
      x = static_cast<std::int64_t>((__int128)x * x % p);
      e >>= 1;
    }
    return r;
  };
  std::size_t r = 0;
  for (std::size_t c = 0; c < in.cols() && r < in.rows(); ++c) {
    std::size_t piv = r;
    while (piv < in.rows() && a[piv][c] == 0) ++piv;
    if (piv == in.rows()) continue;
    std::swap(a[piv], a[r]);
    const std::int64_t iv = inv(a[r][c]);
    for (std::size_t i = r + 1; i < in.rows(); ++i) {
      const std::int64_t f = static_cast<std::int64_t>((__int128)a[i][c] * iv % p);
      for (std::size_t j = c; j < in.cols(); ++j)
        a[i][j] = ((a[i][j] - static_cast<std::int64_t>((__int128)f * a[r][j] % p)) % p + p) % p;
    }
    ++r;
  }
  return r;
}

IntMatrix random_int(std::size_t m, std::size_t n, int lo, int hi, std::mt19937& rng) {
  std::uniform_int_distribution<int> u(lo, hi);
  IntMatrix a(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng);
  return a;
}

}  // namespace

TEST_CASE("eigensym on known spectra") {
  SUBCASE("J - I, n = 4") {
    RealMatrix a(4, 4, 1.0);
    for (std::size_t i = 0; i < 4; ++i) a(i, i) = 0.0;
    const auto sd = eigensym(a);
    CHECK(sd.eigenvalues[0] == doctest::Approx(3.0).epsilon(1e-13));
    for (std::size_t i = 1; i < 4; ++i)
      CHECK(sd.eigenvalues[i] == doctest::Approx(-1.0).epsilon(1e-13));
  }
  SUBCASE("Hamming cube D_2") {
    const auto sd = eigensym(to_real(cube_distance_matrix(2)));
    CHECK(sd.eigenvalues[0] == doctest::Approx(4.0).epsilon(1e-13));
    CHECK(std::abs(sd.eigenvalues[1]) <= 1e-13);
    CHECK(sd.eigenvalues[2] == doctest::Approx(-2.0).epsilon(1e-13));
    CHECK(sd.eigenvalues[3] == doctest::Approx(-2.0).epsilon(1e-13));
  }
  SUBCASE("identity") {
    const auto sd = eigensym(RealMatrix::identity(3));
    CHECK(sd.eigenvalues == Vector{1, 1, 1});
    CHECK(sd.sweeps == 0);
  }
}

TEST_CASE("eigensym errors") {
  CHECK_THROWS_AS(eigensym(RealMatrix{{0, 1}, {2, 0}}), Error);
  try {
    eigensym(RealMatrix{{0, 1}, {2, 0}});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotSymmetric);
  }
  std::mt19937 rng(5);
  const auto a = random_symmetric(12, rng);
  try {
    eigensym(a, {.max_sweeps = 1});
    FAIL("expected NoConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NoConvergence);
  }
}

TEST_CASE("eigensym reconstruction and orthonormality on random matrices") {
  std::mt19937 rng(42);
  for (std::size_t n : {1, 2, 3, 5, 8, 17, 32, 64}) {
    const auto a = random_symmetric(n, rng);
    const auto sd = eigensym(a);
    CHECK(sd.residual <= 1e-9 * std::max(1.0, max_abs(a)));
    CHECK(std::is_sorted(sd.eigenvalues.rbegin(), sd.eigenvalues.rend()));
    const auto gram = sd.eigenvectors.transposed() * sd.eigenvectors;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        CHECK(std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)) <= 1e-9);
    // Deterministic for identical input.
    const auto again = eigensym(a);
    CHECK(again.eigenvalues == sd.eigenvalues);
    CHECK(again.eigenvectors == sd.eigenvectors);
  }
}

TEST_CASE("determinant") {
  RealMatrix j3(3, 3, 1.0);
  for (std::size_t i = 0; i < 3; ++i) j3(i, i) = 0.0;
  CHECK(determinant(j3) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::abs(determinant(to_real(cube_distance_matrix(2)))) <= 1e-12);
  CHECK(determinant(RealMatrix{{0, 1}, {1, 0}}) == -1.0);
}

TEST_CASE("determinant agrees with the eigenvalue product") {
  std::mt19937 rng(9);
  for (std::size_t n : {2, 4, 7, 12, 20}) {
    for (int t = 0; t < 5; ++t) {
      const auto a = random_symmetric(n, rng);
      const auto sd = eigensym(a);
      double prod = 1.0;
      for (double l : sd.eigenvalues) prod *= l;
      const double det = determinant(a);
      if (std::abs(prod) < 1e-9)
        CHECK(std::abs(det - prod) <= 1e-9);
      else
        CHECK(std::abs(det - prod) <= 1e-6 * std::abs(prod));
    }
  }
  // Singular cube matrices.
  for (std::size_t n : {2, 3, 4}) {
    const auto d = to_real(cube_distance_matrix(n));
    const auto sd = eigensym(d);
    double prod = 1.0;
    for (double l : sd.eigenvalues) prod *= l;
    CHECK(std::abs(determinant(d) - prod) <= 1e-9);
  }
}

TEST_CASE("rank_exact examples") {
  CHECK(rank_exact(IntMatrix{{1, 0}, {0, 1}}) == 2);
  CHECK(rank_exact(IntMatrix{{1, 0}, {0, 1}, {1, 1}}) == 2);
  CHECK(rank_exact(IntMatrix{}) == 0);
  CHECK(rank_exact(IntMatrix(3, 0)) == 0);
  CHECK(rank_exact(IntMatrix(3, 4, 0)) == 0);
  CHECK(rank_exact(IntMatrix{{0, 2, 4}, {0, 1, 2}, {1, 0, 0}}) == 2);
}

TEST_CASE("rank_exact matches rank over two prime fields") {
  std::mt19937 rng(17);
  std::uniform_int_distribution<int> dim(1, 9);
  for (int t = 0; t < 300; ++t) {
    const std::size_t m = dim(rng), n = dim(rng);
    IntMatrix a = random_int(m, n, -1, 1, rng);
    // Force some dependencies.
    if (m >= 3 && t % 2 == 0)
      for (std::size_t j = 0; j < n; ++j) a(m - 1, j) = a(0, j) - 2 * a(1, j);
    const std::size_t r1 = rank_mod(a, 1000000007), r2 = rank_mod(a, 998244353);
    REQUIRE(r1 == r2);
    CHECK(rank_exact(a) == r1);
  }
}

TEST_CASE("rank_exact is invariant under elementary row operations") {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> dim(2, 8);
  std::uniform_int_distribution<int> scale(1, 5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = dim(rng), n = dim(rng);
    IntMatrix a = random_int(m, n, -2, 2, rng);
    const std::size_t r = rank_exact(a);
    std::uniform_int_distribution<std::size_t> row(0, m - 1);
    IntMatrix b = a;
    const std::size_t i = row(rng), j = row(rng);
    switch (t % 3) {
      case 0:
        for (std::size_t c = 0; c < n; ++c) std::swap(b(i, c), b(j, c));
        break;
      case 1: {
        const int s = (t % 2 ? -1 : 1) * scale(rng);
        for (std::size_t c = 0; c < n; ++c) b(i, c) *= s;
        break;
      }
      default:
        if (i != j)
          for (std::size_t c = 0; c < n; ++c) b(i, c) += b(j, c);
    }
    CHECK(rank_exact(b) == r);
  }
}

TEST_CASE("determinant_exact") {
  CHECK(determinant_exact(IntMatrix{{0, 1}, {1, 0}}) == -1);
  CHECK(determinant_exact(IntMatrix{{2, 0, 0}, {1, 3, 0}, {4, 5, 6}}) == 36);
  CHECK(determinant_exact(IntMatrix{{1, 2}, {2, 4}}) == 0);
  std::mt19937 rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto a = random_int(5, 5, -3, 3, rng);
    const double f = determinant(to_real(a));
    CHECK(static_cast<double>(determinant_exact(a)) == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("exact elimination reports overflow instead of wrapping") {
  const std::int64_t big = std::int64_t{1} << 40;
  IntMatrix a{{big, 1, 0}, {1, big, 1}, {0, 1, big}};
  try {
    determinant_exact(a);
    FAIL("expected Overflow");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Overflow);
  }
}

TEST_CASE("null_space_exact") {
  const IntMatrix a{{1, 1, 0}, {0, 1, 1}};
  const auto ns = null_space_exact(a);
  REQUIRE(ns.size() == 1);
  CHECK(ns[0] == std::vector<std::int64_t>{1, -1, 1});

  std::mt19937 rng(37);
  for (int t = 0; t < 200; ++t) {
    const std::size_t m = 1 + t % 6, n = 1 + (t / 6) % 9;
    const auto b = random_int(m, n, -2, 2, rng);
    const auto kernel = null_space_exact(b);
    CHECK(kernel.size() + rank_exact(b) == n);
    for (const auto& v : kernel) {
      CHECK(std::any_of(v.begin(), v.end(), [](auto x) { return x != 0; }));
      for (auto x : b * v) CHECK(x == 0);
    }
  }
}

TEST_CASE("null_space of symmetric matrices") {
  const auto ns2 = null_space(to_real(cube_distance_matrix(2)), 1e-9);
  REQUIRE(ns2.size() == 1);
  const Vector expected{0.5, -0.5, -0.5, 0.5};
  for (std::size_t i = 0; i < 4; ++i) CHECK(ns2[0][i] == doctest::Approx(expected[i]).epsilon(1e-12));

  const auto d3 = to_real(cube_distance_matrix(3));
  const auto ns3 = null_space(d3, 1e-9);
  CHECK(ns3.size() == 4);
  for (const auto& v : ns3) CHECK(max_abs(d3 * v) <= 10 * 1e-9 * std::max(1.0, max_abs(d3)));

  CHECK(null_space(RealMatrix::identity(5), 0.5).empty());
}
