#pragma once

// Representation constructors: the irreducible representations tau_d of
// SL_2, exterior and symmetric powers, direct sums, the 9-dimensional
// SU(2,1) example, and the flag maps they induce.

#include "anosov/groups.hpp"
#include "anosov/linalg.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace anosov {

using ComplexMatrix = Eigen::MatrixXcd;

// ---------------------------------------------------------------------------
// Recipes

struct TauStep {
  int d = 2;
};
struct WedgeStep {
  int k = 1;
};
struct Sym2Step {};
struct Su21Step {};
struct PerturbStep {
  double eps = 0.0;
  std::uint64_t seed = 0;
};
/// Conjugate every generator: g -> C g C^{-1}.
struct ConjugateStep {
  Matrix by;
};

struct FunctorStep;
using FunctorChain = std::vector<FunctorStep>;

/// Applies each chain to the current representation and takes the
/// block-diagonal sum.
struct DirectSumStep {
  std::vector<FunctorChain> parts;
};

struct FunctorStep {
  std::variant<TauStep, WedgeStep, Sym2Step, Su21Step, DirectSumStep, PerturbStep,
               ConjugateStep>
      op;
};

/// Base generators, given either as real matrices (any invertible d×d) or as
/// complex 3×3 matrices in SU(2,1) (which must be followed by an Su21Step).
struct BaseGenerators {
  std::vector<std::string> labels;
  std::vector<Matrix> real;
  std::vector<ComplexMatrix> complex;
};

struct Recipe {
  BaseGenerators base;
  FunctorChain chain;
};

std::string describe(const FunctorChain& chain);

class Representation {
 public:
  /// Replays the recipe from its base generators.
  static Representation from_recipe(Recipe recipe);

  Representation(GeneratorSet generators, Recipe recipe)
      : generators_(std::move(generators)), recipe_(std::move(recipe)) {}

  int dim() const { return generators_.dim(); }
  const GeneratorSet& generators() const { return generators_; }
  const Recipe& recipe() const { return recipe_; }

 private:
  GeneratorSet generators_;
  Recipe recipe_;
};

/// Representation generated by real matrices, with inverses by inversion.
Representation make_representation(std::vector<std::string> labels,
                                   const std::vector<Matrix>& generators);

/// Applies one functor step to every generator (inverses are mapped directly,
/// not re-inverted).
Representation apply_step(const Representation& rep, const FunctorStep& step);

// ---------------------------------------------------------------------------
// Matrix-level functors

/// Matrix of P(X,Y) -> P(g^{-1}(X,Y)) on homogeneous polynomials of degree
/// d-1 in the monomial basis X^{d-1}, X^{d-2}Y, ..., Y^{d-1}.
Matrix tau_d(const Matrix& g, int d);
inline MatrixD tau_d(const MatrixD& g, int d) {
  return MatrixD::normalize_lift(tau_d(g.matrix(), d), 0.0);
}

/// k-element subsets of {0..d-1} in lexicographic order; the basis of
/// the k-th exterior power used throughout.
std::vector<std::vector<int>> wedge_basis(int d, int k);

/// Matrix of the k-th exterior power (entries are k×k minors).
Matrix wedge_power(const Matrix& m, int k);
inline MatrixD wedge_power(const MatrixD& m, int k) {
  return MatrixD::normalize_lift(wedge_power(m.matrix(), k), 0.0);
}

/// Coordinates of a symmetric matrix in the orthonormal basis
/// {e_i e_i^T} ∪ {(e_i e_j^T + e_j e_i^T)/√2 : i < j}, ordered by (i, j), i <= j.
Vector sym_coords(const Matrix& x);
/// Inverse of sym_coords.
Matrix sym_from_coords(const Vector& c, int d);

/// Matrix of X -> M X M^T on symmetric matrices in the sym_coords basis.
Matrix sym_square(const Matrix& m);
inline MatrixD sym_square(const MatrixD& m) {
  return MatrixD::normalize_lift(sym_square(m.matrix()), 0.0);
}

/// [v] -> [v ⊗ v].
Subspace veronese_point(const Subspace& v);

/// W -> span{v ⊗ w + w ⊗ v : w in W, v in R^d}; a hyperplane when W is.
Subspace veronese_hyperplane(const Subspace& w);

/// Wedge of multivectors given in the wedge_basis coordinates.
Vector wedge(const Vector& a, int deg_a, const Vector& b, int deg_b, int d);

/// [v_1 ∧ ... ∧ v_m] for any frame of V.
Subspace flag_wedge(const Subspace& v);

Representation direct_sum_rep(const Representation& r1, const Representation& r2);

/// The Hermitian form preserved by SU(2,1): the antidiagonal 3×3 matrix.
ComplexMatrix su21_form();

/// Realification C^3 -> R^6, (z_k) -> (Re z_1, Im z_1, ...).
Matrix realify(const ComplexMatrix& g);

/// Columns f_1..f_9 spanning the fixed space of ∧²J inside ∧²R^6.
Matrix su21_fixed_basis();

/// The 9×9 matrix of ∧² j(g) restricted to E = {v : (∧²J) v = v} in the
/// f_1..f_9 basis (not normalized).
Matrix build_su21_rep(const ComplexMatrix& g);

/// Flag maps of ∧^k ρ built from the flags of a Hitchin-type ρ.
enum class ZetaLevel { One, Two, CoTwo, CoOne };

/// `flag` holds ξ^(1), ..., ξ^(d-1) (nested). Returns ζ^(ℓ) as a subspace of
/// ∧^k R^d for ℓ in {1, 2, D-2, D-1}.
Subspace hitchin_zeta(std::span<const Subspace> flag, int k, ZetaLevel level);

/// Adds uniform[-eps, eps] noise to every generator (not the inverses),
/// renormalizes, and recomputes inverses. Deterministic in `seed`.
Representation perturb_rep(const Representation& rep, double eps, std::uint64_t seed);

}  // namespace anosov
