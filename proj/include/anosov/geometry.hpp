#pragma once

// Affine charts adapted to a pair of flags, Hölder-exponent regression of a
// sampled limit set against its tangent flat, tangency of secants, the
// eigenvalue-gap inequality audit and the Hilbert metric on positive-definite
// matrices.

#include "anosov/boundary.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace anosov {

/// Basis adapted to (ξ^(1)(x), ξ^(m)(x)) and (ξ^(d-m)(y), ξ^(d-1)(y)): in the
/// columns b_1..b_d of `basis_change`, ξ^(1)(x) = [b_1],
/// ξ^(m)(x) = span{b_1..b_m}, ξ^(d-m)(y) = span{b_{m+1}..b_d} and
/// ξ^(d-1)(y) = span{b_2..b_d}.
struct ChartFrame {
  Subspace xi1_x;
  Subspace xim_x;
  Subspace xi_dm_y;
  Subspace xi_d1_y;
  int m = 1;
  Matrix basis_change;
};

/// b_1 spans ξ^(1)(x); b_2..b_m are an orthonormal basis of
/// ξ^(m)(x) ∩ ξ^(d-1)(y) obtained from a pivoted null space; b_{m+1}..b_d
/// is the frame of ξ^(d-m)(y). Throws naming the failing pair when the flags
/// are not transverse or not nested (threshold 1e-8).
ChartFrame build_chart(const Subspace& xi1_x, const Subspace& xim_x, const Subspace& xi_dm_y,
                       const Subspace& xi_d1_y);

/// Chart from the plus flags of sx and the minus flags of sy.
ChartFrame build_chart(const FlagSample& sx, const FlagSample& sy);

struct ChartPoint {
  Vector u;  // m-1 coordinates along ξ^(m)(x)
  Vector w;  // d-m coordinates along ξ^(d-m)(y)
};

/// Affine coordinates [1 : u : w] of p. Throws when p lies on the hyperplane
/// at infinity ξ^(d-1)(y).
ChartPoint chart_coords(const ChartFrame& frame, const Subspace& p);

enum class Metric { Sine, Chordal };

struct HoelderOptions {
  double delta_min = 1e-5;
  double delta_max = 1e-1;
  double floor = 1e-14;
  std::size_t min_points = 20;
  Metric metric = Metric::Sine;
};

struct HoelderPoint {
  double delta = 0.0;     // distance to ξ^(1)(x)
  double distance = 0.0;  // distance to ξ^(m)(x), after flooring
};

struct HoelderFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t n_points = 0;
  /// Points whose distance to ξ^(m)(x) was raised to the floor.
  std::size_t n_floored = 0;
  std::vector<HoelderPoint> scatter;
};

inline constexpr const char* kHoelderCaveat =
    "estimates the exponent only where the spanning condition holds at the anchor";

/// Least-squares slope of log dist(p, ξ^(m)(x)) against log dist(p, ξ^(1)(x))
/// over points with dist(p, ξ^(1)(x)) in [delta_min, delta_max]. Throws when
/// fewer than min_points qualify.
HoelderFit hoelder_regression(std::span<const Subspace> points, const Subspace& xi1_x,
                              const Subspace& xim_x, const HoelderOptions& options = {});
HoelderFit hoelder_regression(const LimitCloud& cloud, const FlagSample& anchor,
                              const HoelderOptions& options = {});

struct TangencyReport {
  /// (distance to ξ^(1)(x), secant angle) sorted by distance.
  std::vector<std::pair<double, double>> secants;
  /// Largest angle over the `nearest` closest points.
  double max_angle_nearest = 0.0;
  /// Slope of log angle against log distance; positive when the secants
  /// converge to ξ^(m)(x).
  double trend = 0.0;
};

/// Angle between span(ξ^(1)(x), p) and ξ^(m)(x) for cloud points within
/// delta of the anchor. Throws when fewer than `nearest` points qualify.
TangencyReport tangency_check(const LimitCloud& cloud, const FlagSample& anchor,
                              double delta = 0.1, std::size_t nearest = 5);
TangencyReport tangency_check(std::span<const Subspace> points, const Subspace& xi1_x,
                              const Subspace& xim_x, double delta = 0.1,
                              std::size_t nearest = 5);

/// log(κ_max / κ_min) for the eigenvalues κ of X^{-1} Y. Throws unless both
/// are symmetric with smallest eigenvalue > 1e-10.
double hilbert_distance_psd(const Matrix& x, const Matrix& y);

struct GapInequalityReport {
  bool pass = true;
  /// min over the ball of (α-1)·log(λ2/λ1) - log(λ_{m+1}/λ_m).
  double worst_margin = 0.0;
  std::string witness_word;
  std::size_t checked = 0;
};

/// λ_{m+1}/λ_m ≤ (λ_2/λ_1)^{α-1} on every nontrivial ball element, in log form with
/// slack 1e-9.
GapInequalityReport eigen_gap_inequality_check(const Ball& ball, int m, double alpha);
GapInequalityReport eigen_gap_inequality_check(const Representation& rep, int m, double alpha,
                                               int radius);

}  // namespace anosov
