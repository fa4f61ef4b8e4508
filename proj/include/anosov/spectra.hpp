#pragma once

// Spectral analytics over word balls: Cartan and Jordan projections, singular
// value gap profiles, the alpha_m estimator, Gelfand-limit and cone checks.

#include "anosov/functors.hpp"
#include "anosov/groups.hpp"
#include "anosov/linalg.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace anosov {

/// mu = sorted log singular values, lambda = sorted log eigenvalue moduli.
SpectralData cartan_jordan(const MatrixD& g);

/// Spectral data of a ball element, recomputed from its word in extended
/// precision. Eigenvalues are read off the cyclically reduced conjugate; the
/// lower half of both spectra comes from the product along the inverse word,
/// so small values are not lost below the rounding floor of the largest one.
SpectralData cartan_jordan(const GeneratorSet& gens, const GroupElement& g);

/// A ball of group elements together with their spectral data.
struct Ball {
  const GeneratorSet* generators = nullptr;
  int radius = 0;
  std::vector<GroupElement> elements;
  std::vector<SpectralData> spectra;
};

/// Enumerates the ball and evaluates every element's spectral data (in
/// parallel; the result does not depend on the worker count).
Ball compute_ball(const Representation& rep, int radius, const BallOptions& options = {});

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  bool valid = false;
};

/// Ordinary least squares y ≈ slope·x + intercept. Sums are accumulated
/// pairwise so the result is independent of how the data were produced.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

struct LengthExtrema {
  int length = 0;
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

struct GapOptions {
  double slope_min = 0.05;
  double r2_min = 0.9;
  BallOptions ball;
};

struct GapProfile {
  int k = 1;
  /// log(mu_k / mu_{k+1}) extrema for each word length 1..R present in the ball.
  std::vector<LengthExtrema> per_length;
  /// Fit through the per-length minima (needs at least three lengths).
  LinearFit fit;
  bool linear_growth = false;
  std::string verdict;
};

inline constexpr const char* kLinearGapVerdict = "gap grows linearly";

GapProfile gap_profile(const Ball& ball, int k, const GapOptions& options = {});
GapProfile gap_profile(const Representation& rep, int k, int radius,
                       const GapOptions& options = {});

struct AlphaEstimate {
  int m = 2;
  double value = std::numeric_limits<double>::infinity();
  GroupElement witness;
  std::string witness_word;
  /// per_radius[r] = infimum over qualifying elements of length <= r
  /// (+inf when none qualifies yet). Non-increasing in r.
  std::vector<double> per_radius;
  /// False when the last two radii differ by more than 1e-6.
  bool converged = false;
  std::size_t qualifying = 0;
};

inline constexpr double kDefaultAlphaTol = 1e-9;

/// inf of log(lambda_1/lambda_{m+1}) / log(lambda_1/lambda_m) over ball
/// elements with log(lambda_1/lambda_m) > tol.
AlphaEstimate alpha_m_estimate(const Ball& ball, int m, double tol = kDefaultAlphaTol);
AlphaEstimate alpha_m_estimate(const Representation& rep, int m, int radius,
                               double tol = kDefaultAlphaTol,
                               const BallOptions& options = {});

/// The ratio entering alpha_m for a single element, or NaN if the element
/// fails the log(lambda_1/lambda_m) > tol filter.
double alpha_ratio(const SpectralData& s, int m, double tol = kDefaultAlphaTol);

struct GelfandSequence {
  int index = 1;
  double log_lambda = 0.0;
  /// (1/k) log sigma_i(M^k) for k = 1..K.
  std::vector<double> growth;
  /// |growth_k - log lambda_i(M)|.
  std::vector<double> errors;
};

/// Convergence of (1/k) log sigma_i(M^k) to log lambda_i(M). Powers are
/// renormalized to unit Frobenius norm every step with the log scale kept
/// exactly; for i > 1, sigma_i(M^k) is obtained as the ratio of the top
/// singular values of the i-th and (i-1)-th exterior powers of M^k, which
/// avoids losing sigma_i below the rounding floor of sigma_1.
GelfandSequence gelfand_check(const MatrixD& m, int i, int max_power);

struct ConeReport {
  double max_distance = 0.0;
  double mean_distance = 0.0;
  std::size_t count = 0;
  bool degenerate = false;
};

/// For every element of length >= n_min, the angle between mu/|mu| and the
/// nearest lambda(δ)/|lambda(δ)| over the ball.
ConeReport cone_diagnostic(const Ball& ball, int n_min);
ConeReport cone_diagnostic(const Representation& rep, int radius, int n_min,
                           const BallOptions& options = {});

}  // namespace anosov
