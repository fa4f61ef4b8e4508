#include "anosov/spectra.hpp"

#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>

using namespace anosov;

namespace {

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

const double kLog4 = 1.3862943611198906188;

}  // namespace

TEST_SUITE("spectra") {
  TEST_CASE("cartan_jordan of single matrices") {
    const SpectralData d = cartan_jordan(MatrixD::normalize_lift(diag2(2, 0.5)));
    CHECK(d.mu[0] == doctest::Approx(std::log(2.0)));
    CHECK(d.lambda[1] == doctest::Approx(-std::log(2.0)));

    Matrix u(2, 2);
    u << 1, 1, 0, 1;
    const SpectralData p = cartan_jordan(MatrixD::normalize_lift(u));
    CHECK(p.mu[0] == doctest::Approx(0.4812118250596034475).epsilon(1e-14));
    CHECK(std::abs(p.lambda[0]) < 1e-12);

    const SpectralData r = cartan_jordan(MatrixD::normalize_lift(support::rotation(0.4)));
    CHECK(std::abs(r.mu[0]) < 1e-14);
    CHECK(std::abs(r.lambda[0]) < 1e-14);
  }

  TEST_CASE("cartan_jordan from words matches the product") {
    const Representation rep = support::build(support::schottky_pair());
    const GeneratorSet& g = rep.generators();
    GroupElement ab;
    ab.word = parse_word(g, "ab");
    ab.matrix = evaluate_word(g, ab.word);
    const SpectralData s = cartan_jordan(g, ab);
    CHECK(s.mu[0] == doctest::Approx(2.4159489283134600025).epsilon(1e-13));
    CHECK(s.mu[1] == doctest::Approx(-2.4159489283134600025).epsilon(1e-13));
    CHECK(s.lambda[0] == doctest::Approx(1.9081389516133058828).epsilon(1e-13));
    CHECK(s.lambda[1] == doctest::Approx(-1.9081389516133058828).epsilon(1e-13));
    const SpectralData direct = cartan_jordan(ab.matrix);
    CHECK((direct.mu - s.mu).norm() < 1e-12);
  }

  TEST_CASE("inverse spectra are reversed negatives") {
    const Representation rep = support::build(support::fuchsian_pair(), {support::tau(4)});
    const Ball ball = compute_ball(rep, 4);
    const GeneratorSet& g = rep.generators();
    for (const auto& e : ball.elements) {
      GroupElement inv;
      inv.word = inverse_word(e.word);
      inv.matrix = evaluate_word(g, inv.word);
      const SpectralData a = cartan_jordan(g, e), b = cartan_jordan(g, inv);
      for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(a.lambda[i] + b.lambda[3 - i]) < 1e-9);
        CHECK(std::abs(a.mu[i] + b.mu[3 - i]) < 1e-9);
      }
    }
  }

  TEST_CASE("gap_profile of a diagonal generator has slope log 4") {
    const Representation rep = support::build(support::base({diag2(2, 0.5)}));
    const GapProfile gp = gap_profile(rep, 1, 8);
    REQUIRE(gp.per_length.size() == 8);
    for (const auto& e : gp.per_length) CHECK(e.min == doctest::Approx(e.length * kLog4));
    CHECK(gp.fit.slope == doctest::Approx(kLog4).epsilon(1e-12));
    CHECK(gp.fit.r2 == doctest::Approx(1.0));
    CHECK(gp.linear_growth);
    CHECK(gp.verdict == kLinearGapVerdict);
  }

  TEST_CASE("gap_profile of rotations is negative") {
    const Representation rep = support::build(support::base({support::rotation(0.7), support::rotation(1.3)}));
    const GapProfile gp = gap_profile(rep, 1, 5);
    CHECK_FALSE(gp.linear_growth);
    CHECK(gp.verdict != kLinearGapVerdict);
  }

  TEST_CASE("gap_profile of a Schottky group grows linearly") {
    const GapProfile gp = gap_profile(support::build(support::schottky_pair()), 1, 6);
    CHECK(gp.linear_growth);
    CHECK(gp.fit.slope > 1.0);
  }

  TEST_CASE("fit_line") {
    const double x[] = {1, 2, 3, 4};
    const double y[] = {3, 5, 7, 9};
    const LinearFit f = fit_line(x, y);
    CHECK(f.valid);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r2 == doctest::Approx(1.0));
    const double one[] = {1};
    CHECK_FALSE(fit_line(one, one).valid);
  }

  TEST_CASE("alpha of tau_d images") {
    for (int d : {3, 4}) {
      const AlphaEstimate a = alpha_m_estimate(support::build(support::fuchsian_pair(), {support::tau(d)}), 2, 5);
      CHECK(a.value == doctest::Approx(2.0).epsilon(1e-9));
      CHECK(a.qualifying > 0);
      CHECK_FALSE(a.witness_word.empty());
    }
    const AlphaEstimate s = alpha_m_estimate(
        support::build(support::fuchsian_pair(), {support::direct_sum({support::tau(5)}, {support::tau(2)})}), 2, 5);
    CHECK(s.value == doctest::Approx(1.5).epsilon(1e-9));
  }

  TEST_CASE("alpha per radius is non-increasing and conjugation invariant") {
    std::mt19937_64 rng(31);
    const Representation rep = support::build(support::schottky_pair(), {support::tau(3)});
    const AlphaEstimate a = alpha_m_estimate(rep, 2, 5);
    for (std::size_t r = 1; r < a.per_radius.size(); ++r) CHECK(a.per_radius[r] <= a.per_radius[r - 1]);
    CHECK(a.per_radius.back() == a.value);

    for (int trial = 0; trial < 3; ++trial) {
      const Matrix c = support::gaussian(rng, 3, 3);
      const Representation conj = support::build(support::schottky_pair(),
                                                 {support::tau(3), FunctorStep{ConjugateStep{c}}});
      CHECK(alpha_m_estimate(conj, 2, 5).value == doctest::Approx(a.value).epsilon(1e-8));
    }
  }

  TEST_CASE("the alpha witness attains the estimate and survives a larger radius") {
    const Representation rep = support::build(support::schottky_pair(), {support::tau(3)});
    const AlphaEstimate a = alpha_m_estimate(rep, 2, 4);
    const SpectralData w = cartan_jordan(rep.generators(), a.witness);
    CHECK(alpha_ratio(w, 2) == a.value);
    const Ball big = compute_ball(rep, 6);
    const auto it = std::find_if(big.elements.begin(), big.elements.end(),
                                 [&](const GroupElement& e) { return e.word == a.witness.word; });
    REQUIRE(it != big.elements.end());
    const double again = alpha_ratio(big.spectra[static_cast<std::size_t>(it - big.elements.begin())], 2);
    CHECK(again == doctest::Approx(a.value).epsilon(1e-12));
    CHECK(alpha_m_estimate(big, 2).value <= a.value);
  }

  TEST_CASE("gap at k equals the top gap of the k-th exterior power") {
    const Representation rep = support::build(support::fuchsian_pair(), {support::tau(4)});
    const Representation wedge = support::build(support::fuchsian_pair(), {support::tau(4), FunctorStep{WedgeStep{2}}});
    const Ball a = compute_ball(rep, 4), b = compute_ball(wedge, 4);
    REQUIRE(a.elements.size() == b.elements.size());
    for (std::size_t i = 0; i < a.elements.size(); ++i) {
      REQUIRE(a.elements[i].word == b.elements[i].word);
      const double ga = a.spectra[i].mu[1] - a.spectra[i].mu[2];
      const double gb = b.spectra[i].mu[0] - b.spectra[i].mu[1];
      CHECK(std::abs(ga - gb) < 1e-8 * (1 + ga));
    }
    const GapProfile pa = gap_profile(a, 2), pb = gap_profile(b, 1);
    REQUIRE(pa.per_length.size() == pb.per_length.size());
    for (std::size_t i = 0; i < pa.per_length.size(); ++i) {
      CHECK(pa.per_length[i].length == pb.per_length[i].length);
      CHECK(pa.per_length[i].count == pb.per_length[i].count);
      CHECK(pa.per_length[i].min == doctest::Approx(pb.per_length[i].min).epsilon(1e-8));
      CHECK(pa.per_length[i].max == doctest::Approx(pb.per_length[i].max).epsilon(1e-8));
    }
  }

  TEST_CASE("compute_ball does not depend on the worker count") {
    const Representation rep = support::build(support::schottky_pair(), {support::tau(5)});
    setenv("ANOSOV_LAB_THREADS", "1", 1);
    const Ball one = compute_ball(rep, 5);
    setenv("ANOSOV_LAB_THREADS", "7", 1);
    const Ball seven = compute_ball(rep, 5);
    unsetenv("ANOSOV_LAB_THREADS");
    REQUIRE(one.elements.size() == seven.elements.size());
    for (std::size_t i = 0; i < one.elements.size(); ++i) {
      CHECK(one.elements[i].word == seven.elements[i].word);
      CHECK(one.spectra[i].mu == seven.spectra[i].mu);
      CHECK(one.spectra[i].lambda == seven.spectra[i].lambda);
    }
    CHECK(alpha_m_estimate(one, 2).value == alpha_m_estimate(seven, 2).value);
  }

  TEST_CASE("gelfand_check") {
    Matrix m(2, 2);
    m << 2, 1, 0, 0.5;
    const GelfandSequence s = gelfand_check(MatrixD::normalize_lift(m), 1, 50);
    REQUIRE(s.errors.size() == 50);
    CHECK(s.errors[49] == doctest::Approx(0.0036772478012531735).epsilon(1e-9));
    CHECK(s.errors[49] < s.errors[9]);

    Matrix u(2, 2);
    u << 1, 1, 0, 1;
    const GelfandSequence p = gelfand_check(MatrixD::normalize_lift(u), 1, 100);
    CHECK(p.growth[99] == doctest::Approx(0.046052701709914238).epsilon(1e-10));

    const Representation rep = support::build(support::fuchsian_pair(), {support::tau(4)});
    const MatrixD g = evaluate_word(rep.generators(), parse_word(rep.generators(), "ab"));
    for (int i = 1; i <= 4; ++i) {
      const GelfandSequence q = gelfand_check(g, i, 60);
      CHECK(q.errors.back() <= std::max(0.3 * q.errors[9], 1e-12));
    }
  }

  TEST_CASE("cone_diagnostic") {
    const ConeReport c = cone_diagnostic(support::build(support::fuchsian_pair(), {support::tau(3)}), 5, 3);
    CHECK(c.count > 0);
    CHECK_FALSE(c.degenerate);
    CHECK(c.max_distance < 0.2);
    CHECK(c.mean_distance <= c.max_distance);
  }
}
