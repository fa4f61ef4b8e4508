#pragma once

// Limit sets sampled from attracting fixed points of ball elements, and the
// boundary conditions on flag maps: transversality, the controlled-set
// condition, m-hyperconvexity and an irreducibility proxy.

#include "anosov/functors.hpp"
#include "anosov/spectra.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace anosov {

/// Flags of a proximal element at its attracting (γ⁺) and repelling (γ⁻)
/// points. The minus flags are the attracting flags of γ⁻¹.
struct FlagSample {
  GroupElement witness;
  std::string word;
  Subspace xi1_plus;     // ξ^(1)(γ⁺)
  Subspace xim_plus;     // ξ^(m)(γ⁺)
  Subspace xi_dm_minus;  // ξ^(d-m)(γ⁻)
  Subspace xi_d1_minus;  // ξ^(d-1)(γ⁻)
  Subspace xi1_minus;    // ξ^(1)(γ⁻)
  SpectralData spectral;
};

struct LimitCloud {
  std::vector<FlagSample> samples;
  int m = 1;
  int dim = 0;
  Recipe recipe;
  std::vector<std::string> warnings;
};

struct SampleOptions {
  double gap_tol = kDefaultGapTol;
  /// Samples whose ξ^(1)(γ⁺) lie within this proj_distance are merged.
  double dedup_tol = 1e-8;
  BallOptions ball;
  GapOptions gaps;
};

/// One sample per ball element with spectral gaps at 1 and m, deduplicated by
/// ξ^(1)(γ⁺) (the shortest witness wins). Warns when the gap profile at 1 or
/// m does not grow linearly. Throws "no proximal elements found".
LimitCloud limit_samples(const Representation& rep, int m, int radius,
                         const SampleOptions& options = {});
LimitCloud limit_samples(const Representation& rep, const Ball& ball, int m,
                         const SampleOptions& options = {});

/// Flags of a single element. Throws when a needed spectral gap is missing.
FlagSample flag_sample(const Representation& rep, const GroupElement& g, int m,
                       double gap_tol = kDefaultGapTol);

struct ScanOptions {
  /// Points closer than this (proj_distance) count as equal.
  double sep_tol = 1e-3;
  /// Above this many candidate pairs, pairs are sampled.
  std::size_t max_pairs = 200'000;
  std::uint64_t seed = 0;
};

struct TransversalityReport {
  /// min of direct_sum_margin(ξ^(m)(x), ξ^(d-m)(y)).
  double min_margin = 1.0;
  /// min of direct_sum_margin(ξ^(1)(x), ξ^(d-1)(y)).
  double min_line_margin = 1.0;
  std::size_t pairs = 0;
  std::size_t worst_x = 0;
  std::size_t worst_y = 0;
};

/// Pairs (x, y) = (γ_i⁺, γ_j⁻) with ξ^(1)(x) and ξ^(1)(y) at least sep_tol
/// apart. All pairs are visited when there are at most max_pairs of them.
TransversalityReport transversality_scan(const LimitCloud& cloud, const ScanOptions& options = {});

struct TripleMargin {
  std::size_t x = 0;
  std::size_t z = 0;
  std::size_t y = 0;
  double margin = 0.0;
};

struct HyperconvexityReport {
  double min_margin = 1.0;
  TripleMargin worst;
  std::vector<TripleMargin> triples;
};

/// direct_sum_margin(ξ^(1)(x), ξ^(1)(z), ξ^(d-m)(y)) over seeded triples
/// x = γ_i⁺, z = γ_k⁺, y = γ_j⁻; triples with two points closer than sep_tol
/// are redrawn. Throws "cannot find distinct triples".
HyperconvexityReport hyperconvexity_scan(const LimitCloud& cloud, int m, std::size_t n_triples,
                                         std::uint64_t seed, double sep_tol = 1e-3);

struct ControlledSetReport {
  double min_margin = 1.0;
  std::size_t pairs = 0;
  /// (point index, hyperplane index) with margin below violation_tol.
  std::vector<std::array<std::size_t, 2>> violations;
};

/// point_subspace_distance(ξ^(1)(γ_i⁺), ξ^(d-1)(γ_j⁻)) for all pairs whose
/// points are at least sep_tol apart.
ControlledSetReport controlled_set_check(const LimitCloud& cloud, double sep_tol = 1e-3,
                                         double violation_tol = 1e-8);

struct IrreducibilityReport {
  bool irreducible = false;
  int dim = 0;
  /// Numerical rank of the stacked ξ^(1) samples.
  int span_rank = 0;
  /// Dimension of the smallest proper invariant subspace found (0 if none).
  int invariant_dim = 0;
};

/// Spans the attracting lines of the ball and spins eigenvectors of random
/// elements of the group algebra (and of its transpose) under the generators;
/// any proper invariant subspace found means reducible.
IrreducibilityReport irreducibility_proxy(const Representation& rep, int radius,
                                          std::uint64_t seed = 0);

}  // namespace anosov
