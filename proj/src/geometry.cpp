#include "anosov/geometry.hpp"

#include "anosov/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace anosov {

namespace {

constexpr double kChartTol = 1e-8;

void require(double margin, const std::string& what) {
  if (!(margin > kChartTol)) {
    throw Error("chart flags fail: " + what + " (margin " + std::to_string(margin) + ")");
  }
}

double chordal(double sine) { return 2.0 * std::sin(0.5 * std::asin(std::min(1.0, sine))); }

}  // namespace

ChartFrame build_chart(const Subspace& xi1_x, const Subspace& xim_x, const Subspace& xi_dm_y,
                       const Subspace& xi_d1_y) {
  const int d = xi1_x.ambient_dim();
  const int m = xim_x.rank();
  if (xi1_x.rank() != 1 || xi_d1_y.rank() != d - 1 || xi_dm_y.rank() != d - m || m < 1 ||
      m > d - 1) {
    throw Error("chart flags have inconsistent ranks");
  }
  {
    const Subspace a[] = {xi1_x, xi_d1_y};
    require(direct_sum_margin(a), "xi1(x) + xi(d-1)(y)");
    const Subspace b[] = {xim_x, xi_dm_y};
    require(direct_sum_margin(b), "xi(m)(x) + xi(d-m)(y)");
  }
  if (containment_residual(xi1_x, xim_x) > kChartTol) throw Error("chart flags fail: xi1(x) not in xi(m)(x)");
  if (containment_residual(xi_dm_y, xi_d1_y) > kChartTol) {
    throw Error("chart flags fail: xi(d-m)(y) not in xi(d-1)(y)");
  }

  Matrix basis(d, d);
  basis.col(0) = xi1_x.frame().col(0);
  if (m > 1) {
    // Null space of the linear form n^T F restricted to coefficient vectors.
    const Vector normal = xi_d1_y.complement().frame().col(0);
    const Vector r = xim_x.frame().transpose() * normal;
    Eigen::Index pivot = 0;
    r.cwiseAbs().maxCoeff(&pivot);
    Matrix null(m, m - 1);
    null.setZero();
    int col = 0;
    for (int j = 0; j < m; ++j) {
      if (j == pivot) continue;
      null(j, col) = 1.0;
      null(pivot, col) = -r[j] / r[pivot];
      ++col;
    }
    basis.middleCols(1, m - 1) = Subspace::span_of(xim_x.frame() * null).frame();
  }
  basis.rightCols(d - m) = xi_dm_y.frame();

  ChartFrame frame;
  frame.xi1_x = xi1_x;
  frame.xim_x = xim_x;
  frame.xi_dm_y = xi_dm_y;
  frame.xi_d1_y = xi_d1_y;
  frame.m = m;
  frame.basis_change = basis;
  return frame;
}

ChartFrame build_chart(const FlagSample& sx, const FlagSample& sy) {
  return build_chart(sx.xi1_plus, sx.xim_plus, sy.xi_dm_minus, sy.xi_d1_minus);
}

ChartPoint chart_coords(const ChartFrame& frame, const Subspace& p) {
  if (p.rank() != 1) throw Error("chart_coords expects a projective point");
  const Vector c = frame.basis_change.partialPivLu().solve(p.frame().col(0));
  if (!(std::abs(c[0]) > 1e-12 * c.norm())) {
    throw Error("point lies on the hyperplane at infinity of the chart");
  }
  const int d = static_cast<int>(c.size());
  ChartPoint out;
  out.u = c.segment(1, frame.m - 1) / c[0];
  out.w = c.tail(d - frame.m) / c[0];
  return out;
}

// ---------------------------------------------------------------------------
// Hölder regression

HoelderFit hoelder_regression(std::span<const Subspace> points, const Subspace& xi1_x,
                              const Subspace& xim_x, const HoelderOptions& options) {
  if (!(options.delta_min > 0) || !(options.delta_max > options.delta_min)) {
    throw Error("regression window must satisfy 0 < delta_min < delta_max");
  }
  std::vector<std::pair<double, double>> raw(points.size(), {-1.0, 0.0});
  parallel_for(points.size(), [&](std::size_t i) {
    double delta = proj_distance(points[i], xi1_x);
    double dist = point_subspace_distance(points[i], xim_x);
    if (options.metric == Metric::Chordal) {
      delta = chordal(delta);
      dist = chordal(dist);
    }
    raw[i] = {delta, dist};
  });

  HoelderFit fit;
  std::vector<double> x, y;
  for (const auto& [delta, dist] : raw) {
    if (delta < options.delta_min || delta > options.delta_max) continue;
    HoelderPoint pt{delta, dist};
    if (pt.distance < options.floor) {
      pt.distance = options.floor;
      ++fit.n_floored;
    }
    fit.scatter.push_back(pt);
    x.push_back(std::log(pt.delta));
    y.push_back(std::log(pt.distance));
  }
  fit.n_points = fit.scatter.size();
  if (fit.n_points < options.min_points) {
    throw Error("too few points in the regression window (" + std::to_string(fit.n_points) +
                " < " + std::to_string(options.min_points) +
                "); increase the radius or widen the window");
  }
  const LinearFit line = fit_line(x, y);
  if (!line.valid) throw Error("regression window has no spread in distance");
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r2 = line.r2;
  return fit;
}

HoelderFit hoelder_regression(const LimitCloud& cloud, const FlagSample& anchor,
                              const HoelderOptions& options) {
  std::vector<Subspace> points;
  points.reserve(cloud.samples.size());
  for (const auto& s : cloud.samples) points.push_back(s.xi1_plus);
  return hoelder_regression(points, anchor.xi1_plus, anchor.xim_plus, options);
}

// ---------------------------------------------------------------------------
// Tangency

TangencyReport tangency_check(std::span<const Subspace> points, const Subspace& xi1_x,
                              const Subspace& xim_x, double delta, std::size_t nearest) {
  TangencyReport report;
  const Vector anchor = xi1_x.frame().col(0);
  for (const auto& p : points) {
    const double dist = proj_distance(p, xi1_x);
    if (dist <= 1e-12 || dist > delta) continue;
    Matrix pair(anchor.size(), 2);
    pair.col(0) = anchor;
    pair.col(1) = p.frame().col(0);
    const double s = containment_residual(Subspace::span_of(pair, 1e-14), xim_x);
    report.secants.emplace_back(dist, std::asin(std::min(1.0, s)));
  }
  if (report.secants.size() < nearest) {
    throw Error("tangency check needs at least " + std::to_string(nearest) +
                " points within delta of the anchor");
  }
  std::sort(report.secants.begin(), report.secants.end());
  for (std::size_t i = 0; i < nearest; ++i) {
    report.max_angle_nearest = std::max(report.max_angle_nearest, report.secants[i].second);
  }
  std::vector<double> x, y;
  for (const auto& [dist, angle] : report.secants) {
    if (angle <= 0.0) continue;
    x.push_back(std::log(dist));
    y.push_back(std::log(angle));
  }
  const LinearFit trend = fit_line(x, y);
  report.trend = trend.valid ? trend.slope : 0.0;
  return report;
}

TangencyReport tangency_check(const LimitCloud& cloud, const FlagSample& anchor, double delta,
                              std::size_t nearest) {
  std::vector<Subspace> points;
  points.reserve(cloud.samples.size());
  for (const auto& s : cloud.samples) points.push_back(s.xi1_plus);
  return tangency_check(points, anchor.xi1_plus, anchor.xim_plus, delta, nearest);
}

// ---------------------------------------------------------------------------
// Hilbert metric

double hilbert_distance_psd(const Matrix& x, const Matrix& y) {
  auto check = [](const Matrix& a, const char* name) {
    if (a.rows() != a.cols()) throw Error(std::string(name) + " must be square");
    if (!a.isApprox(a.transpose(), 1e-12)) throw Error(std::string(name) + " must be symmetric");
    const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(a, Eigen::EigenvaluesOnly).eigenvalues()[0];
    if (!(lo > 1e-10)) throw Error(std::string(name) + " is not positive definite");
  };
  check(x, "X");
  check(y, "Y");
  if (x.rows() != y.rows()) throw Error("X and Y must have the same size");
  const Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(y, x, Eigen::EigenvaluesOnly);
  const Vector& kappa = ges.eigenvalues();
  return std::log(kappa.maxCoeff() / kappa.minCoeff());
}

// ---------------------------------------------------------------------------
// Eigenvalue-gap inequality

GapInequalityReport eigen_gap_inequality_check(const Ball& ball, int m, double alpha) {
  if (!(alpha > 1.0)) throw Error("eigen gap inequality needs alpha > 1");
  if (ball.spectra.empty()) throw Error("empty ball");
  const int d = static_cast<int>(ball.spectra.front().lambda.size());
  if (m < 1 || m > d - 1) throw Error("gap index m must lie in [1, d-1]");
  constexpr double kSlack = 1e-9;
  GapInequalityReport report;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < ball.spectra.size(); ++i) {
    if (ball.elements[i].word.empty()) continue;
    const Vector& l = ball.spectra[i].lambda;
    const double margin = (alpha - 1.0) * (l[1] - l[0]) - (l[m] - l[m - 1]);
    if (report.checked == 0 || margin < report.worst_margin) {
      report.worst_margin = margin;
      worst = i;
    }
    ++report.checked;
  }
  if (report.checked == 0) throw Error("ball has no nontrivial elements");
  report.pass = report.worst_margin >= -kSlack;
  if (ball.generators) report.witness_word = format_word(*ball.generators, ball.elements[worst].word);
  return report;
}

GapInequalityReport eigen_gap_inequality_check(const Representation& rep, int m, double alpha,
                                               int radius) {
  if (!(alpha > 1.0)) throw Error("eigen gap inequality needs alpha > 1");
  return eigen_gap_inequality_check(compute_ball(rep, radius), m, alpha);
}

}  // namespace anosov
