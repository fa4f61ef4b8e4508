#pragma once

// Dense real linear algebra for small matrices (d up to ~64): projective lifts,
// eigenvalue moduli, singular values, dominant invariant subspaces and the
// distances used on projective space and Grassmannians.

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace anosov {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultGapTol = 1e-6;

/// Unit-determinant-modulus lift of an element of PGL_d(R).
///
/// The stored matrix satisfies |det| = 1 (up to rounding) and `det_sign()`
/// records the sign of the determinant, so the lift lives in SL^±_d(R).
class MatrixD {
 public:
  MatrixD() = default;

  /// Scales `raw` by |det raw|^{-1/d}. Throws on non-finite input or when an
  /// LU pivot is at most pivot_tol times the largest entry. Images of
  /// invertible matrices under functors pass pivot_tol = 0: they are
  /// invertible however badly conditioned.
  static MatrixD normalize_lift(const Matrix& raw, double pivot_tol = 1e-14);

  /// Wraps a matrix that is already a lift (products and inverses of lifts).
  static MatrixD from_lift(Matrix m, int det_sign);

  static MatrixD identity(int d);

  int dim() const { return static_cast<int>(m_.rows()); }
  int det_sign() const { return det_sign_; }
  const Matrix& matrix() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  MatrixD operator*(const MatrixD& rhs) const;
  MatrixD inverse() const;
  MatrixD transpose() const;

 private:
  MatrixD(Matrix m, int det_sign) : m_(std::move(m)), det_sign_(det_sign) {}

  Matrix m_;
  int det_sign_ = 1;
};

/// A k-dimensional linear subspace of R^d, stored as an orthonormal d×k frame.
/// Rank-one subspaces are points of projective space.
class Subspace {
 public:
  Subspace() = default;

  /// Orthonormalizes `columns` in order (modified Gram-Schmidt, two passes),
  /// so the first j frame columns span the first j input columns. Throws if
  /// the columns are numerically dependent.
  static Subspace span_of(const Matrix& columns, double rank_tol = 1e-10);

  /// Wraps a frame that is already orthonormal.
  static Subspace from_orthonormal(Matrix frame);

  static Subspace line(const Vector& v) { return span_of(v); }

  /// span{e_i : i in indices} (0-based).
  static Subspace coordinate(int ambient_dim, std::span<const int> indices);

  /// The whole of R^d.
  static Subspace full(int ambient_dim);

  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  int rank() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }

  /// Orthogonal projector onto the subspace.
  Matrix projector() const { return frame_ * frame_.transpose(); }

  /// g·V, re-orthonormalized.
  Subspace image(const Matrix& g) const;
  Subspace image(const MatrixD& g) const { return image(g.matrix()); }

  /// Orthogonal complement (rank d - k).
  Subspace complement() const;

 private:
  explicit Subspace(Matrix frame) : frame_(std::move(frame)) {}

  Matrix frame_;
};

/// Sorted log singular values (Cartan vector) and log eigenvalue moduli
/// (Jordan vector) of a unit-determinant-modulus lift.
struct SpectralData {
  Vector mu;
  Vector lambda;
};

/// Real Schur decomposition A = Q T Q^T in LAPACK canonical form.
struct RealSchur {
  Matrix t;
  Matrix q;  // empty unless vectors were requested
  Vector wr;
  Vector wi;
};

RealSchur real_schur(const Matrix& a, bool with_vectors);

/// Moduli of the complex eigenvalues, sorted descending. Ties keep Schur order.
Vector eigen_moduli(const Matrix& m);
inline Vector eigen_moduli(const MatrixD& m) { return eigen_moduli(m.matrix()); }

/// Singular values, sorted descending.
Vector singular_values(const Matrix& m);
inline Vector singular_values(const MatrixD& m) { return singular_values(m.matrix()); }

/// The invariant subspace spanned by the generalized eigenvectors belonging
/// to the m eigenvalues of largest modulus, via a reordered real Schur form.
/// Requires lambda_m / lambda_{m+1} > 1 + gap_tol.
Subspace top_invariant_subspace(const Matrix& m, int dim, double gap_tol = kDefaultGapTol);
inline Subspace top_invariant_subspace(const MatrixD& m, int dim,
                                       double gap_tol = kDefaultGapTol) {
  return top_invariant_subspace(m.matrix(), dim, gap_tol);
}

/// sin of the angle between two projective points.
double proj_distance(const Subspace& p, const Subspace& q);

/// Length of the component of the unit representative of p orthogonal to V.
double point_subspace_distance(const Subspace& p, const Subspace& v);

/// Smallest singular value of the concatenated frames; zero iff the sum of
/// the subspaces is not direct.
double direct_sum_margin(std::span<const Subspace> subspaces);

/// sin of the largest principal angle between two subspaces of equal rank.
double subspace_distance(const Subspace& a, const Subspace& b);

/// sin of the largest angle between `inner` and its projection to `outer`;
/// zero iff inner ⊂ outer.
double containment_residual(const Subspace& inner, const Subspace& outer);

/// Numerical rank with threshold rel_tol * sigma_max.
int numerical_rank(const Matrix& m, double rel_tol = 1e-8);

/// Orthonormal basis of the column space of `spanning`; columns whose
/// singular values fall below rel_tol * sigma_max are dropped.
Subspace column_space(const Matrix& spanning, double rel_tol = 1e-10);

/// Smallest singular value of m (m may be rectangular).
double smallest_singular_value(const Matrix& m);

}  // namespace anosov
