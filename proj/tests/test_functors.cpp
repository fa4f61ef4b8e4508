#include "anosov/functors.hpp"
#include "anosov/spectra.hpp"

#include "support.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

using namespace anosov;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x.asDiagonal();
}

bool same_point(const Subspace& a, const Subspace& b, double tol) { return proj_distance(a, b) < tol; }

// exp of J·K with K anti-Hermitian preserves the antidiagonal form J.
ComplexMatrix random_su21(std::mt19937_64& rng, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  ComplexMatrix k(3, 3);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k(i, j) = {n(rng), n(rng)};
  }
  k = (k - k.adjoint()).eval() * 0.5;
  ComplexMatrix g = (su21_form() * k).exp();
  const std::complex<double> det = g.determinant();
  return g / std::pow(det, 1.0 / 3.0);
}

}  // namespace

TEST_SUITE("functors") {
  TEST_CASE("tau_d ladder and frozen matrix") {
    const Vector l = eigen_moduli(tau_d(diag({2, 0.5}), 3));
    CHECK(l[0] == doctest::Approx(4.0));
    CHECK(l[1] == doctest::Approx(1.0));
    CHECK(l[2] == doctest::Approx(0.25));
    CHECK(tau_d(Matrix::Identity(2, 2), 5).isApprox(Matrix::Identity(5, 5)));
    const Vector l2 = eigen_moduli(tau_d(diag({3, 1.0 / 3}), 2));
    CHECK(l2[0] == doctest::Approx(3.0));

    // Action P(X,Y) -> P(g^{-1}(X,Y)) on X^2, XY, Y^2 for g = [[2,1],[1,1]].
    Matrix g(2, 2);
    g << 2, 1, 1, 1;
    Matrix expected(3, 3);
    expected << 1, -1, 1, -2, 3, -4, 1, -2, 4;
    CHECK((tau_d(g, 3) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("tau_d is a homomorphism") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
      const Matrix g = support::random_hyperbolic_sl2(rng, 1.1, 3.0);
      const Matrix h = support::random_hyperbolic_sl2(rng, 1.1, 3.0);
      const int d = 2 + trial % 6;
      const Matrix lhs = tau_d(g * h, d);
      CHECK((lhs - tau_d(g, d) * tau_d(h, d)).norm() < 1e-8 * lhs.norm());
    }
  }

  TEST_CASE("wedge_power") {
    Matrix a(3, 3);
    a << 1, 2, 0, 0, 1, 3, 4, 0, 1;
    Matrix expected(3, 3);
    expected << 1, 3, 6, -8, 1, 2, -4, -12, 1;
    CHECK((wedge_power(a, 2) - expected).cwiseAbs().maxCoeff() < 1e-14);

    const Vector l = eigen_moduli(wedge_power(diag({3, 2, 1}), 2));
    CHECK(l[0] == doctest::Approx(6.0));
    CHECK(l[1] == doctest::Approx(3.0));
    CHECK(l[2] == doctest::Approx(2.0));
    CHECK(l[0] / l[1] == doctest::Approx(2.0));

    CHECK(wedge_basis(4, 2) == std::vector<std::vector<int>>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  }

  TEST_CASE("wedge_power is multiplicative with product singular values") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 30; ++trial) {
      const Matrix a = support::gaussian(rng, 5, 5), b = support::gaussian(rng, 5, 5);
      for (int k = 1; k <= 4; ++k) {
        const Matrix lhs = wedge_power(a * b, k);
        CHECK((lhs - wedge_power(a, k) * wedge_power(b, k)).norm() < 1e-9 * lhs.norm());
        const Vector s = singular_values(a);
        CHECK(singular_values(wedge_power(a, k))[0] ==
              doctest::Approx(s.head(k).prod()).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("sym_square") {
    const Vector l = eigen_moduli(sym_square(diag({2, 1})));
    CHECK(l[0] == doctest::Approx(4.0));
    CHECK(l[1] == doctest::Approx(2.0));
    CHECK(l[2] == doctest::Approx(1.0));
    CHECK(sym_square(Matrix::Identity(3, 3)).isApprox(Matrix::Identity(6, 6)));

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
      const Matrix g = support::gaussian(rng, 3, 3), h = support::gaussian(rng, 3, 3);
      const Matrix lhs = sym_square(g * h);
      CHECK((lhs - sym_square(g) * sym_square(h)).norm() < 1e-10 * lhs.norm());
      const Subspace v = Subspace::line(support::gaussian(rng, 3, 1));
      CHECK(same_point(veronese_point(v).image(sym_square(g)), veronese_point(v.image(g)), 1e-9));
      // The basis is orthonormal, so singular values square.
      const Vector s = singular_values(g);
      CHECK(singular_values(sym_square(g))[0] == doctest::Approx(s[0] * s[0]).epsilon(1e-10));
    }
  }

  TEST_CASE("veronese") {
    Vector e1(2);
    e1 << 1, 0;
    Vector e(3);
    e << 1, 0, 0;
    CHECK(same_point(veronese_point(Subspace::line(e1)), Subspace::line(e), 1e-15));
    Vector d(2);
    d << 1, 1;
    const Vector p = veronese_point(Subspace::line(d)).frame().col(0);
    const double s = p[0] < 0 ? -1.0 : 1.0;
    CHECK(s * p[0] == doctest::Approx(0.5));
    CHECK(s * p[1] == doctest::Approx(0.70710678118654752));
    CHECK(s * p[2] == doctest::Approx(0.5));
    CHECK((sym_from_coords(sym_coords(diag({1, 2, 3})), 3) - diag({1, 2, 3})).norm() < 1e-15);

    // The tangent hyperplane at Φ(v) contains Φ(v).
    Vector w(3);
    w << 1, 2, -1;
    const Subspace hyper = Subspace::line(w).complement();
    const Subspace phi_hyper = veronese_hyperplane(hyper);
    CHECK(phi_hyper.rank() == 5);
    Vector u(3);
    u << 1, 0, 1;  // u is orthogonal to w
    CHECK(point_subspace_distance(veronese_point(Subspace::line(u)), phi_hyper) < 1e-12);
  }

  TEST_CASE("flag_wedge") {
    const int e12[] = {0, 1};
    const int e21[] = {1, 0};
    Vector target = Vector::Zero(3);
    target[0] = 1;  // e1^e2 is the first lexicographic basis vector of ∧²R³
    CHECK(same_point(flag_wedge(Subspace::coordinate(3, e12)), Subspace::line(target), 1e-15));
    CHECK(same_point(flag_wedge(Subspace::coordinate(3, e21)), Subspace::line(target), 1e-15));
    Matrix f(3, 2);
    f << 1, 1, 0, 1, 0, 0;
    CHECK(same_point(flag_wedge(Subspace::span_of(f)), Subspace::line(target), 1e-15));
  }

  TEST_CASE("flag_wedge of the top invariant subspace is the attracting line of the wedge") {
    std::mt19937_64 rng(24);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
      const Matrix m = support::gaussian(rng, 5, 5);
      for (int k = 2; k <= 3; ++k) {
        try {
          const Subspace v = top_invariant_subspace(m, k);
          const Subspace w = top_invariant_subspace(wedge_power(m, k), 1);
          CHECK(proj_distance(flag_wedge(v), w) < 1e-7);
          ++checked;
        } catch (const Error&) {
        }
      }
    }
    CHECK(checked > 20);
  }

  TEST_CASE("direct sums") {
    const double lam = 1.7;
    const Representation r = support::build(
        support::base({diag({lam, 1 / lam})}),
        {support::direct_sum({support::tau(5)}, {support::tau(2)})});
    CHECK(r.dim() == 7);
    const SpectralData s = cartan_jordan(r.generators().matrix(0));
    const double expected[] = {4, 2, 1, 0, -1, -2, -4};
    for (int i = 0; i < 7; ++i) CHECK(s.lambda[i] == doctest::Approx(expected[i] * std::log(lam)));
    CHECK(alpha_ratio(s, 2) == doctest::Approx(1.5).epsilon(1e-14));

    std::mt19937_64 rng(25);
    for (int trial = 0; trial < 20; ++trial) {
      const Representation q = support::build(
          support::base({support::random_hyperbolic_sl2(rng, 1.1, 5.0)}),
          {support::direct_sum({support::tau(4)}, {support::tau(6)})});
      const SpectralData t = cartan_jordan(q.generators().matrix(0));
      CHECK(std::abs(t.lambda[1] - t.lambda[2]) < 1e-7);
    }

    CHECK_THROWS(direct_sum_rep(support::build(support::schottky_pair()),
                                support::build(support::base({diag({2, 0.5})}))));
  }

  TEST_CASE("build_su21_rep") {
    ComplexMatrix g = ComplexMatrix::Zero(3, 3);
    g(0, 0) = 2;
    g(1, 1) = 1;
    g(2, 2) = 0.5;
    const Vector l = eigen_moduli(build_su21_rep(g));
    const double expected[] = {4, 2, 2, 1, 1, 1, 0.5, 0.5, 0.25};
    for (int i = 0; i < 9; ++i) CHECK(std::abs(l[i] - expected[i]) < 1e-8);
    CHECK(build_su21_rep(ComplexMatrix::Identity(3, 3)).isApprox(Matrix::Identity(9, 9)));
    ComplexMatrix bad = ComplexMatrix::Identity(3, 3);
    bad(0, 1) = 0.3;
    CHECK_THROWS_WITH(build_su21_rep(bad), "not in SU(2,1)");

    std::mt19937_64 rng(26);
    const Matrix f = su21_fixed_basis();
    for (int trial = 0; trial < 10; ++trial) {
      const ComplexMatrix h = random_su21(rng, 0.7);
      const Matrix t = build_su21_rep(h);
      CHECK(std::abs(std::abs(t.determinant()) - 1.0) < 1e-8);
      // ∧²j(h) maps the fixed space E to itself and acts there by t.
      const Matrix lhs = wedge_power(realify(h), 2) * f;
      CHECK((lhs - f * t).norm() < 1e-8 * lhs.norm());
    }
  }

  TEST_CASE("hitchin_zeta") {
    std::vector<Subspace> flag4;
    for (int j = 1; j <= 3; ++j) {
      std::vector<int> idx(static_cast<std::size_t>(j));
      for (int i = 0; i < j; ++i) idx[static_cast<std::size_t>(i)] = i;
      flag4.push_back(Subspace::coordinate(4, idx));
    }
    const Subspace z1 = hitchin_zeta(flag4, 2, ZetaLevel::One);
    Vector e12 = Vector::Zero(6);
    e12[0] = 1;
    CHECK(same_point(z1, Subspace::line(e12), 1e-14));
    const Subspace z2 = hitchin_zeta(flag4, 2, ZetaLevel::Two);
    const int first_two[] = {0, 1};
    CHECK(subspace_distance(z2, Subspace::coordinate(6, first_two)) < 1e-14);
    CHECK(hitchin_zeta(flag4, 2, ZetaLevel::CoTwo).rank() == 4);
    CHECK(hitchin_zeta(flag4, 2, ZetaLevel::CoOne).rank() == 5);

    // k = 1: the ζ-maps are the flags themselves.
    std::vector<Subspace> flag3;
    const int i1[] = {0};
    const int i12[] = {0, 1};
    flag3.push_back(Subspace::coordinate(3, i1));
    flag3.push_back(Subspace::coordinate(3, i12));
    CHECK(subspace_distance(hitchin_zeta(flag3, 1, ZetaLevel::One), flag3[0]) < 1e-14);
    CHECK(subspace_distance(hitchin_zeta(flag3, 1, ZetaLevel::CoOne), flag3[1]) < 1e-14);

    std::vector<Subspace> broken = flag4;
    const int other[] = {3};
    broken[0] = Subspace::coordinate(4, other);
    CHECK_THROWS_WITH(hitchin_zeta(broken, 2, ZetaLevel::One), doctest::Contains("not nested"));
  }

  TEST_CASE("perturb_rep") {
    const Representation r = support::build(support::schottky_pair());
    const Representation same = perturb_rep(r, 0.0, 4);
    for (int i = 0; i < r.generators().size(); ++i) {
      CHECK(same.generators().matrix(i).matrix().isApprox(r.generators().matrix(i).matrix(), 1e-15));
    }
    const Representation p1 = perturb_rep(r, 1e-3, 4), p2 = perturb_rep(r, 1e-3, 4);
    CHECK(p1.generators().matrix(0).matrix() == p2.generators().matrix(0).matrix());
    CHECK_FALSE(p1.generators().matrix(0).matrix() == r.generators().matrix(0).matrix());
    const double before = gap_profile(r, 1, 6).fit.slope;
    const double after = gap_profile(p1, 1, 6).fit.slope;
    CHECK(std::abs(after - before) < 0.1 * before);
    CHECK_THROWS(perturb_rep(r, -1.0, 0));
  }

  TEST_CASE("recipes replay") {
    const Representation r = support::build(support::fuchsian_pair(), {support::tau(4)});
    const Representation again = Representation::from_recipe(r.recipe());
    for (int i = 0; i < r.generators().size(); ++i) {
      CHECK((again.generators().matrix(i).matrix() - r.generators().matrix(i).matrix()).norm() < 1e-8);
    }
    CHECK(describe(r.recipe().chain) == "tau_d(4)");
  }
}
