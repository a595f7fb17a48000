#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "jacobi_spectra/csv.hpp"
#include "jacobi_spectra/tridiag.hpp"
#include "oracles.hpp"

using namespace jacobi_spectra;

namespace {

TridiagonalMatrix free_matrix(Index n) { return {std::vector<double>(static_cast<std::size_t>(n), 0.0), 1}; }

PotentialSpec harper(double theta) { return PotentialSpec::cosine_composed({0.0, 2.0}, Angle::radians(theta)); }

}  // namespace

TEST_CASE("build_unilateral") {
  const auto zero = build_unilateral(PotentialSpec::constant(0.0), 3);
  CHECK(zero.diag() == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(zero.origin() == 1);

  const auto quarter = build_unilateral(PotentialSpec::cosine_composed({0.0, 2.0}, Angle::pi_fraction(1, 2)), 4);
  const std::vector<double> expected{0.0, -2.0, 0.0, 2.0};
  for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(quarter.diag()[i] - expected[i]) < 1e-15);

  const auto h = build_unilateral(harper(1.0), 2);
  CHECK(h.diag()[0] == doctest::Approx(1.0806046117362795).epsilon(1e-15));
  CHECK(h.diag()[1] == doctest::Approx(-0.8322936730942848).epsilon(1e-15));

  const auto shifted = build_unilateral(harper(1.0), 3, 17);
  CHECK(shifted.origin() == 18);
  CHECK(shifted.diag()[0] == harper(1.0).at(18));
  CHECK_THROWS_AS(build_unilateral(PotentialSpec::constant(0), 0), std::invalid_argument);
}

TEST_CASE("build_bilateral") {
  CHECK(build_bilateral(PotentialSpec::constant(4.0), 1).diag() == std::vector<double>{4, 4, 4});
  const auto e = build_bilateral(PotentialSpec::explicit_samples({7, 8, 9}, -1), 1);
  CHECK(e.diag() == std::vector<double>{7, 8, 9});
  CHECK(e.origin() == -1);
  const auto h = build_bilateral(harper(1.0), 1);
  CHECK(h.diag()[0] == h.diag()[2]);
  CHECK(h.diag()[1] == 2.0);
  CHECK(build_bilateral(PotentialSpec::constant(1.0), 0).size() == 1);
  CHECK_THROWS_AS(build_bilateral(PotentialSpec::explicit_samples({7, 8, 9}, -1), 2), ExplicitOutOfRange);
}

TEST_CASE("sturm count examples") {
  const auto z3 = free_matrix(3);
  CHECK(sturm_count(z3, -3.0) == 0);
  CHECK(sturm_count(z3, 3.0) == 3);
  CHECK(sturm_count(free_matrix(2), 0.0) == 1);
  // exact eigenvalue hits a zero pivot: 0 is an eigenvalue of the free 3x3
  CHECK(sturm_count(z3, 0.0) == 2);
}

TEST_CASE("sturm count is monotone and bracketed by Gershgorin") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const TridiagonalMatrix a(oracles::random_diagonal(rng, 150, -3.0, 3.0), 1);
    CHECK(sturm_count(a, a.gershgorin_lower() - 1e-9) == 0);
    CHECK(sturm_count(a, a.gershgorin_upper() + 1e-9) == a.size());
    Index previous = 0;
    for (double x = a.gershgorin_lower() - 0.5; x <= a.gershgorin_upper() + 0.5; x += 1e-3) {
      const Index c = sturm_count(a, x);
      REQUIRE(c >= previous);
      previous = c;
    }
  }
}

TEST_CASE("eigenvalue examples") {
  const auto one = eigenvalues(TridiagonalMatrix({5.0}, 1), 1e-12);
  REQUIRE(one.values.size() == 1);
  CHECK(std::abs(one.values[0] - 5.0) <= one.certified_radius);

  const auto two = eigenvalues(free_matrix(2), 1e-12);
  CHECK(std::abs(two.values[0] + 1.0) <= 1e-12);
  CHECK(std::abs(two.values[1] - 1.0) <= 1e-12);

  const double tol = 1e-12;
  const auto ten = eigenvalues(free_matrix(10), tol);
  const auto expected = oracles::free_eigenvalues(10);
  CHECK(ten.certified_radius <= tol);
  CHECK(ten.resolved);
  for (std::size_t i = 0; i < 10; ++i) CHECK(std::abs(ten.values[i] - expected[i]) <= tol);
}

TEST_CASE("closed-form free eigenvalues agree with the characteristic recurrence") {
  // Cross-check the two test oracles against each other before using them.
  for (std::size_t n : {1u, 2u, 5u, 10u}) {
    const auto closed = oracles::free_eigenvalues(static_cast<Index>(n));
    const auto roots = oracles::characteristic_roots(std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(closed[i] - roots[i]) < 1e-12);
  }
}

TEST_CASE("tol below round-off is rejected") {
  CHECK_THROWS_AS(eigenvalues(free_matrix(4), 1e-16), TolTooSmall);
  CHECK_THROWS_AS(eigenvalues(free_matrix(4), 0.0), std::invalid_argument);
  CHECK_NOTHROW(eigenvalues(free_matrix(4), 1e-13));
}

TEST_CASE("eigenvalues match characteristic polynomial roots on small matrices") {
  std::mt19937_64 rng(11);
  const double tol = 1e-11;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 8;
    const auto d = oracles::random_diagonal(rng, n, -2.0, 2.0);
    const auto list = eigenvalues(TridiagonalMatrix(d, 1), tol);
    const auto roots = oracles::characteristic_roots(d);
    REQUIRE(list.values.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(list.values[i] - roots[i]) <= 10 * tol);
  }
}

TEST_CASE("eigenlist is simple and consistent with sturm counts") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const TridiagonalMatrix a(oracles::random_diagonal(rng, 120, -2.0, 2.0), 1);
    const auto list = eigenvalues(a, 1e-10);
    REQUIRE(list.resolved);
    REQUIRE(static_cast<Index>(list.values.size()) == a.size());
    for (std::size_t i = 1; i < list.values.size(); ++i) {
      CHECK(list.values[i] - list.values[i - 1] > 2.0 * list.certified_radius);
    }
    std::uniform_real_distribution<double> u(a.gershgorin_lower() - 0.1, a.gershgorin_upper() + 0.1);
    for (int q = 0; q < 200; ++q) {
      const double x = u(rng);
      const auto it = std::lower_bound(list.values.begin(), list.values.end(), x);
      const bool near = (it != list.values.end() && *it - x <= list.certified_radius) ||
                        (it != list.values.begin() && x - *std::prev(it) <= list.certified_radius);
      if (near) continue;
      const auto below = std::upper_bound(list.values.begin(), list.values.end(), x) - list.values.begin();
      CHECK(below == sturm_count(a, x));
    }
  }
}

TEST_CASE("leading submatrix interlaces") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const TridiagonalMatrix a(oracles::random_diagonal(rng, 60, -2.0, 2.0), 1);
    const auto outer = eigenvalues(a, 1e-10);
    const auto inner = eigenvalues(a.leading_submatrix(), 1e-10);
    CHECK(interlacing_violations(outer, inner, outer.certified_radius + inner.certified_radius) == 0);
  }
  EigenvalueList outer{{0.0, 1.0, 2.0}, 0.0, 1e-10, 3, 1, true};
  EigenvalueList inner{{0.5, 2.5}, 0.0, 1e-10, 2, 1, true};
  CHECK(interlacing_violations(outer, inner, 1e-10) == 1);
}

TEST_CASE("thread count does not change eigenvalues") {
  const auto a = build_unilateral(harper(1.0), 700);
  const auto serial = eigenvalues(a, 1e-11, {1});
  const auto pooled = eigenvalues(a, 1e-11, {8});
  CHECK(serial.values == pooled.values);
  CHECK(serial.certified_radius == pooled.certified_radius);
}

TEST_CASE("matrix and eigenvalue CSV round trip") {
  const auto a = build_bilateral(harper(1.0), 6);
  std::stringstream ms;
  write_matrix_csv(ms, a);
  CHECK(ms.str().rfind("# n=13, origin=-6\n", 0) == 0);
  const auto back = read_matrix_csv(ms);
  CHECK(back.diag() == a.diag());
  CHECK(back.origin() == a.origin());

  const auto list = eigenvalues(a, 1e-10);
  std::stringstream es;
  write_eigenvalues_csv(es, list);
  CHECK(es.str().rfind("# n=13, origin=-6, tol=1e-10\n", 0) == 0);
  const auto lb = read_eigenvalues_csv(es);
  CHECK(lb.values == list.values);
  CHECK(lb.certified_radius == list.certified_radius);
  CHECK(lb.tol == list.tol);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("banded products") {
  BandedMatrix a(4, 1), b(4, 1);
  for (Index i = 0; i < 4; ++i) {
    a.set(i, i, 1.0 + i);
    b.set(i, i, 2.0);
    if (i + 1 < 4) {
      a.set(i, i + 1, 1.0);
      b.set(i + 1, i, -1.0);
    }
  }
  const auto c = multiply(a, b);
  CHECK(c.bandwidth() == 2);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      double s = 0.0;
      for (Index k = 0; k < 4; ++k) s += a(i, k) * b(k, j);
      CHECK(c(i, j) == doctest::Approx(s));
    }
  }
  CHECK_THROWS_AS(a.set(0, 2, 1.0), std::out_of_range);
}

TEST_CASE("filtration degree windows") {
  const Index n = 32;
  SUBCASE("diagonal commutes with every P_k") {
    BandedMatrix d(n, 0);
    for (Index i = 0; i < n; ++i) d.set(i, i, std::sin(1.0 + i));
    const auto r = filtration_degree_window(d, n - 1);
    CHECK(r.degree_window == 0);
    CHECK(r.corner_degree_window == 0);
  }
  SUBCASE("unit tridiagonal: the commutator holds +-1 at (k,k+1),(k+1,k)") {
    const auto t = BandedMatrix::from_tridiagonal(build_unilateral(harper(1.0), n));
    const auto r = filtration_degree_window(t, n - 1);
    // P_k T - T P_k is antisymmetric with two nonzero entries, so rank 2;
    // its corner P_k T (1 - P_k) has rank 1.
    for (Index rank : r.ranks) CHECK(rank == 2);
    for (Index rank : r.corner_ranks) CHECK(rank == 1);
  }
  SUBCASE("ranks agree with elimination oracle and respect bandwidth") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
      BandedMatrix s(n, 1), t(n, 1);
      for (Index i = 0; i < n; ++i) {
        for (Index j = std::max<Index>(0, i - 1); j <= std::min(n - 1, i + 1); ++j) {
          s.set(i, j, u(rng));
          t.set(i, j, u(rng));
        }
      }
      const auto st = multiply(s, t);
      const auto rs = filtration_degree_window(s, n - 1);
      const auto rt = filtration_degree_window(t, n - 1);
      const auto rst = filtration_degree_window(st, n - 1);
      CHECK(rst.degree_window <= rs.degree_window + rt.degree_window);
      CHECK(rst.corner_degree_window <= rs.corner_degree_window + rt.corner_degree_window);
      CHECK(rst.corner_degree_window <= st.bandwidth());
      CHECK(rst.degree_window <= 2 * st.bandwidth());
      for (Index k = 1; k < n; ++k) {
        std::vector<std::vector<double>> c(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
        for (Index i = 0; i < n; ++i) {
          for (Index j = 0; j < n; ++j) {
            c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = st(i, j) * ((i < k) - (j < k));
          }
        }
        CHECK(oracles::dense_rank(c, rst.rank_tol) == rst.ranks[static_cast<std::size_t>(k - 1)]);
      }
    }
  }
  CHECK_THROWS_AS(filtration_degree_window(BandedMatrix(4, 1), 4), std::invalid_argument);
}
