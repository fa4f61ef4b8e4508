#include "anosov/linalg.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace anosov;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Subspace line(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return Subspace::line(x);
}

const double kPhi = 1.6180339887498948482;

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("normalize_lift") {
    const MatrixD a = MatrixD::normalize_lift(mat({{2, 0}, {0, 2}}));
    CHECK(a.matrix().isApprox(Matrix::Identity(2, 2), 1e-15));
    CHECK(a.det_sign() == 1);

    const MatrixD b = MatrixD::normalize_lift(mat({{3, 0}, {0, 1.0 / 3}}));
    CHECK(b(0, 0) == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(b(1, 1) == doctest::Approx(1.0 / 3).epsilon(1e-15));

    const MatrixD c = MatrixD::normalize_lift(mat({{-2, 0}, {0, 1}}));
    CHECK(c.det_sign() == -1);
    CHECK(c(0, 0) == doctest::Approx(-1.4142135623730951).epsilon(1e-15));
    CHECK(c(1, 1) == doctest::Approx(0.70710678118654752).epsilon(1e-15));

    CHECK_THROWS_WITH(MatrixD::normalize_lift(mat({{1, 2}, {2, 4}})), "non-invertible generator");
    CHECK_THROWS(MatrixD::normalize_lift(Matrix(2, 3)));
  }

  TEST_CASE("lift has unit determinant modulus") {
    std::mt19937_64 rng(11);
    for (int d = 2; d <= 7; ++d) {
      const MatrixD m = MatrixD::normalize_lift(5.0 * support::gaussian(rng, d, d));
      CHECK(std::abs(std::abs(m.matrix().determinant()) - 1.0) < 1e-10);
    }
  }

  TEST_CASE("eigen_moduli") {
    const Vector a = eigen_moduli(mat({{2, 0, 0}, {0, 1, 0}, {0, 0, 0.5}}));
    CHECK(a[0] == doctest::Approx(2.0));
    CHECK(a[1] == doctest::Approx(1.0));
    CHECK(a[2] == doctest::Approx(0.5));

    const Vector u = eigen_moduli(mat({{1, 1}, {0, 1}}));
    CHECK(u[0] == doctest::Approx(1.0));
    CHECK(u[1] == doctest::Approx(1.0));

    const Vector r = eigen_moduli(support::rotation(0.7));
    CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("singular_values") {
    const Vector d = singular_values(mat({{3, 0}, {0, 1.0 / 3}}));
    CHECK(d[0] == doctest::Approx(3.0));
    CHECK(d[1] == doctest::Approx(1.0 / 3));

    const Vector u = singular_values(mat({{1, 1}, {0, 1}}));
    CHECK(u[0] == doctest::Approx(kPhi).epsilon(1e-15));
    CHECK(u[1] == doctest::Approx(1 / kPhi).epsilon(1e-15));

    const Vector o = singular_values(support::rotation(1.1));
    CHECK(o[0] == doctest::Approx(1.0));
    CHECK(o[1] == doctest::Approx(1.0));
  }

  TEST_CASE("singular values of the inverse and of products") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; ++trial) {
      const MatrixD a = MatrixD::normalize_lift(support::gaussian(rng, 4, 4));
      const MatrixD b = MatrixD::normalize_lift(support::gaussian(rng, 4, 4));
      const Vector s = singular_values(a);
      const Vector si = singular_values(a.inverse());
      for (int i = 0; i < 4; ++i) CHECK(std::abs(s[i] * si[3 - i] - 1.0) < 1e-8);
      CHECK(singular_values(a * b)[0] <= s[0] * singular_values(b)[0] * (1 + 1e-8));
      // Scaling does not change the normalized lift.
      const MatrixD c = MatrixD::normalize_lift(7.5 * a.matrix());
      CHECK((eigen_moduli(c) - eigen_moduli(a)).norm() < 1e-10);
      CHECK((singular_values(c) - s).norm() < 1e-10);
    }
  }

  TEST_CASE("top_invariant_subspace") {
    const Matrix d = mat({{2, 0, 0}, {0, 1, 0}, {0, 0, 0.5}});
    const Subspace v1 = top_invariant_subspace(d, 1);
    CHECK(proj_distance(v1, line({1, 0, 0})) < 1e-14);
    const int e12[] = {0, 1};
    CHECK(subspace_distance(top_invariant_subspace(d, 2), Subspace::coordinate(3, e12)) < 1e-14);
    CHECK_THROWS_WITH(top_invariant_subspace(mat({{2, 0, 0}, {0, 2, 0}, {0, 0, 0.25}}), 1),
                      "no spectral gap at index 1");
  }

  TEST_CASE("top invariant subspaces are invariant, complex pairs kept together") {
    std::mt19937_64 rng(5);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix m = support::gaussian(rng, 6, 6);
      for (int k = 1; k <= 5; ++k) {
        Subspace v;
        try {
          v = top_invariant_subspace(m, k);
        } catch (const Error&) {
          continue;  // k splits a conjugate pair
        }
        CHECK(subspace_distance(v.image(m), v) < 1e-8);
        ++checked;
      }
    }
    CHECK(checked > 100);
  }

  TEST_CASE("proj_distance") {
    CHECK(proj_distance(line({1, 0}), line({1, 0})) == 0.0);
    CHECK(proj_distance(line({1, 0}), line({0, 1})) == doctest::Approx(1.0));
    CHECK(proj_distance(line({1, 0}), line({1, 1})) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
    CHECK(proj_distance(line({1, 0}), line({-1, 0})) == 0.0);

    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 1000; ++trial) {
      const Matrix g = support::gaussian(rng, 4, 3);
      const Subspace p = Subspace::line(g.col(0)), q = Subspace::line(g.col(1)), r = Subspace::line(g.col(2));
      CHECK(std::abs(proj_distance(p, q) - proj_distance(q, p)) < 1e-12);
      CHECK(proj_distance(p, r) <= proj_distance(p, q) + proj_distance(q, r) + 1e-10);
    }
  }

  TEST_CASE("point_subspace_distance") {
    const int e12[] = {0, 1};
    const Subspace v = Subspace::coordinate(3, e12);
    CHECK(point_subspace_distance(line({1, 0, 0}), v) == 0.0);
    CHECK(point_subspace_distance(line({0, 0, 1}), v) == doctest::Approx(1.0));
    CHECK(point_subspace_distance(line({1, 0, 1}), v) == doctest::Approx(0.70710678118654752).epsilon(1e-15));
  }

  TEST_CASE("direct_sum_margin") {
    const Subspace e1 = line({1, 0, 0}), e2 = line({0, 1, 0}), e3 = line({0, 0, 1});
    {
      const Subspace s[] = {e1, e2, e3};
      CHECK(direct_sum_margin(s) == doctest::Approx(1.0));
    }
    {
      const Subspace s[] = {e1, e1};
      CHECK(direct_sum_margin(s) < 1e-15);
    }
    {
      const Subspace s[] = {e1, line({1, 1, 0})};
      CHECK(direct_sum_margin(s) == doctest::Approx(0.54119610014619698).epsilon(1e-14));
    }
    {
      const int e12[] = {0, 1};
      const int e23[] = {1, 2};
      const Subspace s[] = {Subspace::coordinate(3, e12), Subspace::coordinate(3, e23)};
      CHECK_THROWS_WITH(direct_sum_margin(s), "rank overflow: subspace ranks sum to more than the ambient dimension");
    }
  }

  TEST_CASE("direct_sum_margin is permutation and frame invariant") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix g = support::gaussian(rng, 5, 5);
      const Subspace a = Subspace::span_of(g.leftCols(2)), b = Subspace::span_of(g.middleCols(2, 2)),
                     c = Subspace::line(g.col(4));
      const Subspace abc[] = {a, b, c}, cab[] = {c, a, b};
      CHECK(std::abs(direct_sum_margin(abc) - direct_sum_margin(cab)) < 1e-10);
      Matrix mixed = g.leftCols(2);
      mixed.col(0) += 3.0 * mixed.col(1);
      const Subspace a2[] = {Subspace::span_of(mixed), b, c};
      CHECK(std::abs(direct_sum_margin(abc) - direct_sum_margin(a2)) < 1e-10);
    }
  }

  TEST_CASE("subspace basics") {
    const int e1[] = {0};
    const Subspace s = Subspace::coordinate(3, e1);
    CHECK(s.complement().rank() == 2);
    CHECK(containment_residual(s, Subspace::full(3)) < 1e-15);
    CHECK_THROWS(Subspace::span_of(mat({{1, 2}, {2, 4}})));
    CHECK(numerical_rank(mat({{1, 2}, {2, 4}})) == 1);
    CHECK(smallest_singular_value(mat({{3, 0}, {0, 0.5}})) == doctest::Approx(0.5));
  }
}
