#include "anosov/spectra.hpp"

#include "anosov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace anosov {

SpectralData cartan_jordan(const MatrixD& g) {
  SpectralData out;
  out.mu = singular_values(g).array().log();
  out.lambda = eigen_moduli(g).array().log();
  return out;
}

namespace {

// Combines descending log values of M with those of M^-1, taking each entry
// from whichever side sits closer to it.
Vector two_sided(const Vector& top, const Vector& inv_top) {
  const Eigen::Index d = top.size();
  Vector out(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double from_above = top[0] - top[j];
    const double from_below = top[j] - top[d - 1];
    out[j] = from_above <= from_below ? top[j] : -inv_top[d - 1 - j];
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

LongMatrix long_product(const GeneratorSet& gens, std::span<const int> word, int d) {
  LongMatrix p = LongMatrix::Identity(d, d);
  for (int x : word) p = p * gens.matrix(x).matrix().cast<long double>();
  return p;
}

Vector sorted_log(const LongVector& v) {
  Vector out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = static_cast<double>(std::log(v[i]));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Vector log_singular_values(const LongMatrix& m) {
  return sorted_log(Eigen::JacobiSVD<LongMatrix>(m).singularValues());
}

Vector log_eigen_moduli(const LongMatrix& m) {
  return sorted_log(Eigen::EigenSolver<LongMatrix>(m, false).eigenvalues().cwiseAbs());
}

}  // namespace

SpectralData cartan_jordan(const GeneratorSet& gens, const GroupElement& g) {
  const int d = g.matrix.dim();
  SpectralData out;
  out.mu = two_sided(log_singular_values(long_product(gens, g.word, d)),
                     log_singular_values(long_product(gens, inverse_word(g.word), d)));
  const std::vector<int> core = cyclic_split(g.word).core;
  out.lambda = two_sided(log_eigen_moduli(long_product(gens, core, d)),
                         log_eigen_moduli(long_product(gens, inverse_word(core), d)));
  return out;
}

Ball compute_ball(const Representation& rep, int radius, const BallOptions& options) {
  Ball ball;
  ball.generators = &rep.generators();
  ball.radius = radius;
  ball.elements = enumerate_ball(rep.generators(), radius, options);
  ball.spectra.resize(ball.elements.size());
  parallel_for(ball.elements.size(),
               [&](std::size_t i) {
                 ball.spectra[i] = cartan_jordan(rep.generators(), ball.elements[i]);
               });
  return ball;
}

namespace {

double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) return std::accumulate(v.begin(), v.end(), 0.0);
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace

LinearFit fit_line(std::span<const double> x, std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = x.size();
  if (n != y.size() || n < 2) return fit;
  const double mx = pairwise_sum(x) / static_cast<double>(n);
  const double my = pairwise_sum(y) / static_cast<double>(n);
  std::vector<double> sxx(n), sxy(n), syy(n);
  for (std::size_t i = 0; i < n; ++i) {
    sxx[i] = (x[i] - mx) * (x[i] - mx);
    sxy[i] = (x[i] - mx) * (y[i] - my);
    syy[i] = (y[i] - my) * (y[i] - my);
  }
  const double vxx = pairwise_sum(sxx);
  if (!(vxx > 0)) return fit;
  fit.slope = pairwise_sum(sxy) / vxx;
  fit.intercept = my - fit.slope * mx;
  std::vector<double> res(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    res[i] = r * r;
  }
  const double ss_res = pairwise_sum(res);
  const double ss_tot = pairwise_sum(syy);
  if (ss_tot > 0) {
    fit.r2 = 1.0 - ss_res / ss_tot;
  } else {
    fit.r2 = ss_res == 0.0 ? 1.0 : 0.0;
  }
  fit.valid = true;
  return fit;
}

// ---------------------------------------------------------------------------
// Gap profiles

GapProfile gap_profile(const Ball& ball, int k, const GapOptions& options) {
  if (ball.spectra.empty()) throw Error("empty ball");
  const int d = static_cast<int>(ball.spectra.front().mu.size());
  if (k < 1 || k > d - 1) throw Error("gap index k must lie in [1, d-1]");
  GapProfile profile;
  profile.k = k;
  std::vector<LengthExtrema> by_length(static_cast<std::size_t>(ball.radius) + 1);
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    const int n = ball.elements[i].length();
    if (n == 0) continue;
    const double gap = ball.spectra[i].mu[k - 1] - ball.spectra[i].mu[k];
    auto& e = by_length[n];
    if (e.count == 0) {
      e.length = n;
      e.min = e.max = gap;
    } else {
      e.min = std::min(e.min, gap);
      e.max = std::max(e.max, gap);
    }
    ++e.count;
  }
  for (const auto& e : by_length) {
    if (e.count > 0) profile.per_length.push_back(e);
  }
  if (profile.per_length.size() >= 3) {
    std::vector<double> x, y;
    for (const auto& e : profile.per_length) {
      x.push_back(e.length);
      y.push_back(e.min);
    }
    profile.fit = fit_line(x, y);
  }
  profile.linear_growth = profile.fit.valid && profile.fit.slope > options.slope_min &&
                          profile.fit.r2 > options.r2_min;
  if (profile.linear_growth) {
    profile.verdict = kLinearGapVerdict;
  } else if (!profile.fit.valid) {
    profile.verdict = "too few word lengths for a fit";
  } else {
    profile.verdict = "no linear gap growth";
  }
  return profile;
}

GapProfile gap_profile(const Representation& rep, int k, int radius, const GapOptions& options) {
  if (radius < 1) throw Error("gap profile needs radius >= 1");
  if (k < 1 || k > rep.dim() - 1) throw Error("gap index k must lie in [1, d-1]");
  const Ball ball = compute_ball(rep, radius, options.ball);
  return gap_profile(ball, k, options);
}

// ---------------------------------------------------------------------------
// alpha_m

double alpha_ratio(const SpectralData& s, int m, double tol) {
  const double den = s.lambda[0] - s.lambda[m - 1];
  if (!(den > tol)) return std::numeric_limits<double>::quiet_NaN();
  return (s.lambda[0] - s.lambda[m]) / den;
}

AlphaEstimate alpha_m_estimate(const Ball& ball, int m, double tol) {
  if (ball.spectra.empty()) throw Error("empty ball");
  const int d = static_cast<int>(ball.spectra.front().lambda.size());
  if (m < 2 || m > d - 1) throw Error("alpha_m needs 2 <= m <= d-1");
  AlphaEstimate est;
  est.m = m;
  est.per_radius.assign(static_cast<std::size_t>(ball.radius) + 1,
                        std::numeric_limits<double>::infinity());
  std::size_t best = ball.elements.size();
  // Elements are ordered by (length, word), so strict improvement keeps the
  // lexicographically first witness among ties.
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    const double r = alpha_ratio(ball.spectra[i], m, tol);
    if (std::isnan(r)) continue;
    ++est.qualifying;
    if (r < est.value) {
      est.value = r;
      best = i;
    }
    const auto n = static_cast<std::size_t>(ball.elements[i].length());
    est.per_radius[n] = std::min(est.per_radius[n], r);
  }
  if (best == ball.elements.size()) throw Error("no infinite-order witness");
  for (std::size_t r = 1; r < est.per_radius.size(); ++r) {
    est.per_radius[r] = std::min(est.per_radius[r], est.per_radius[r - 1]);
  }
  est.witness = ball.elements[best];
  if (ball.generators) est.witness_word = format_word(*ball.generators, est.witness.word);
  const std::size_t last = est.per_radius.size() - 1;
  est.converged = last >= 1 && std::isfinite(est.per_radius[last - 1]) &&
                  std::abs(est.per_radius[last] - est.per_radius[last - 1]) <= 1e-6;
  return est;
}

AlphaEstimate alpha_m_estimate(const Representation& rep, int m, int radius, double tol,
                               const BallOptions& options) {
  if (m < 2 || m > rep.dim() - 1) throw Error("alpha_m needs 2 <= m <= d-1");
  const Ball ball = compute_ball(rep, radius, options);
  return alpha_m_estimate(ball, m, tol);
}

// ---------------------------------------------------------------------------
// Gelfand's formula

namespace {

// log sigma_1(A^k) for k = 1..K with per-step renormalization.
std::vector<double> top_growth(const Matrix& a, int max_power) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(max_power));
  Matrix p = Matrix::Identity(a.rows(), a.cols());
  double log_scale = 0.0;
  for (int k = 1; k <= max_power; ++k) {
    p = p * a;
    const double s = p.norm();
    if (!std::isfinite(s) || s == 0.0) {
      throw Error("overflow in matrix powers at k=" + std::to_string(k));
    }
    p /= s;
    log_scale += std::log(s);
    out.push_back(log_scale + std::log(singular_values(p)[0]));
  }
  return out;
}

}  // namespace

GelfandSequence gelfand_check(const MatrixD& m, int i, int max_power) {
  const int d = m.dim();
  if (i < 1 || i > d) throw Error("singular value index must lie in [1, d]");
  if (max_power < 1) throw Error("Gelfand check needs K >= 1");
  GelfandSequence out;
  out.index = i;
  out.log_lambda = std::log(eigen_moduli(m)[i - 1]);
  std::vector<double> top = top_growth(wedge_power(m.matrix(), i), max_power);
  if (i > 1) {
    const std::vector<double> below = top_growth(wedge_power(m.matrix(), i - 1), max_power);
    for (int k = 0; k < max_power; ++k) top[k] -= below[k];
  }
  for (int k = 1; k <= max_power; ++k) {
    const double g = top[k - 1] / k;
    if (!std::isfinite(g)) throw Error("overflow in matrix powers at k=" + std::to_string(k));
    out.growth.push_back(g);
    out.errors.push_back(std::abs(g - out.log_lambda));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cone diagnostic

ConeReport cone_diagnostic(const Ball& ball, int n_min) {
  ConeReport report;
  constexpr double kZero = 1e-9;
  std::vector<Vector> jordan;
  for (const auto& s : ball.spectra) {
    const double n = s.lambda.norm();
    if (n > kZero) jordan.push_back(s.lambda / n);
  }
  std::vector<std::size_t> targets;
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    if (ball.elements[i].length() >= n_min && ball.spectra[i].mu.norm() > kZero) {
      targets.push_back(i);
    }
  }
  if (jordan.empty() || targets.empty()) {
    report.degenerate = true;
    return report;
  }
  std::vector<double> dist(targets.size());
  parallel_for(targets.size(), [&](std::size_t t) {
    const SpectralData& s = ball.spectra[targets[t]];
    const Vector u = s.mu / s.mu.norm();
    double best = 1.0;
    for (const auto& v : jordan) best = std::min(best, 1.0 - std::min(1.0, u.dot(v)));
    // best = 1 - cos(angle); convert back to the angle.
    dist[t] = std::acos(std::clamp(1.0 - best, -1.0, 1.0));
  });
  report.count = dist.size();
  report.max_distance = *std::max_element(dist.begin(), dist.end());
  report.mean_distance = pairwise_sum(dist) / static_cast<double>(dist.size());
  return report;
}

ConeReport cone_diagnostic(const Representation& rep, int radius, int n_min,
                           const BallOptions& options) {
  if (radius <= n_min) throw Error("cone diagnostic needs radius > n_min");
  return cone_diagnostic(compute_ball(rep, radius, options), n_min);
}

}  // namespace anosov
