#include "anosov/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace anosov {

namespace {

bool all_finite(const Matrix& m) { return m.allFinite(); }

std::string shape(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// MatrixD

MatrixD MatrixD::normalize_lift(const Matrix& raw, double pivot_tol) {
  if (raw.rows() != raw.cols() || raw.rows() == 0) {
    throw Error("expected a square matrix, got " + shape(raw));
  }
  if (!all_finite(raw)) throw Error("matrix has non-finite entries");
  const Eigen::PartialPivLU<Matrix> lu(raw);
  // Accumulate log|det| from the LU diagonal so large d does not overflow.
  const Matrix& lum = lu.matrixLU();
  const double scale = raw.cwiseAbs().maxCoeff();
  double log_abs_det = 0.0;
  int sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < lum.rows(); ++i) {
    const double u = lum(i, i);
    if (!(std::abs(u) > pivot_tol * scale)) throw Error("non-invertible generator");
    log_abs_det += std::log(std::abs(u));
    if (u < 0) sign = -sign;
  }
  const double d = static_cast<double>(raw.rows());
  Matrix m = raw * std::exp(-log_abs_det / d);
  return MatrixD(std::move(m), sign);
}

MatrixD MatrixD::from_lift(Matrix m, int det_sign) {
  if (m.rows() != m.cols()) throw Error("expected a square matrix, got " + shape(m));
  return MatrixD(std::move(m), det_sign >= 0 ? 1 : -1);
}

MatrixD MatrixD::identity(int d) { return MatrixD(Matrix::Identity(d, d), 1); }

MatrixD MatrixD::operator*(const MatrixD& rhs) const {
  if (dim() != rhs.dim()) throw Error("dimension mismatch in product");
  return MatrixD(m_ * rhs.m_, det_sign_ * rhs.det_sign_);
}

MatrixD MatrixD::inverse() const { return MatrixD(m_.inverse(), det_sign_); }

MatrixD MatrixD::transpose() const { return MatrixD(m_.transpose(), det_sign_); }

// ---------------------------------------------------------------------------
// Subspace

Subspace Subspace::span_of(const Matrix& columns, double rank_tol) {
  const auto d = columns.rows();
  const auto k = columns.cols();
  if (k < 1 || k > d) throw Error("subspace rank must lie in [1, ambient dimension]");
  if (!all_finite(columns)) throw Error("subspace columns have non-finite entries");
  Matrix q(d, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    Vector v = columns.col(j);
    const double original = v.norm();
    if (!(original > 0)) throw Error("zero column in subspace spanning set");
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) v -= q.col(i).dot(v) * q.col(i);
    }
    const double residual = v.norm();
    if (residual <= rank_tol * original) {
      throw Error("spanning columns are numerically dependent");
    }
    q.col(j) = v / residual;
  }
  return Subspace(std::move(q));
}

Subspace Subspace::from_orthonormal(Matrix frame) {
  if (frame.cols() < 1 || frame.cols() > frame.rows()) {
    throw Error("subspace rank must lie in [1, ambient dimension]");
  }
  return Subspace(std::move(frame));
}

Subspace Subspace::coordinate(int ambient_dim, std::span<const int> indices) {
  Matrix f = Matrix::Zero(ambient_dim, static_cast<Eigen::Index>(indices.size()));
  for (std::size_t j = 0; j < indices.size(); ++j) {
    const int i = indices[j];
    if (i < 0 || i >= ambient_dim) throw Error("coordinate index out of range");
    f(i, static_cast<Eigen::Index>(j)) = 1.0;
  }
  return span_of(f);
}

Subspace Subspace::full(int ambient_dim) {
  return Subspace(Matrix::Identity(ambient_dim, ambient_dim));
}

Subspace Subspace::image(const Matrix& g) const {
  if (g.cols() != frame_.rows()) throw Error("dimension mismatch in subspace image");
  return span_of(g * frame_);
}

Subspace Subspace::complement() const {
  const auto d = frame_.rows();
  const auto k = frame_.cols();
  if (k == d) throw Error("the full space has no proper complement");
  Eigen::JacobiSVD<Matrix> svd(frame_, Eigen::ComputeFullU);
  return Subspace(svd.matrixU().rightCols(d - k));
}

// ---------------------------------------------------------------------------
// Spectra

RealSchur real_schur(const Matrix& a, bool with_vectors) {
  if (a.rows() != a.cols()) throw Error("real Schur form needs a square matrix");
  if (!all_finite(a)) throw Error("matrix has non-finite entries");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  RealSchur out;
  out.t = a;
  out.wr.resize(n);
  out.wi.resize(n);
  if (with_vectors) out.q.resize(n, n);
  lapack_int sdim = 0;
  const lapack_int info = LAPACKE_dgees(
      LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'N', nullptr, n, out.t.data(), n, &sdim,
      out.wr.data(), out.wi.data(), with_vectors ? out.q.data() : nullptr, n);
  if (info != 0) {
    std::ostringstream os;
    os << "eigenvalue iteration failed to converge (dgees info=" << info
       << ", ||A||_F=" << a.norm();
    if (info > 0) {
      // Entries below the converged part of the quasi-triangular iterate.
      double residual = 0.0;
      for (lapack_int j = 0; j < n; ++j) {
        for (lapack_int i = j + 2; i < n; ++i) residual += out.t(i, j) * out.t(i, j);
      }
      os << ", unconverged subdiagonal residual=" << std::sqrt(residual);
    }
    os << ")";
    throw Error(os.str());
  }
  return out;
}

namespace {

std::vector<double> schur_moduli(const RealSchur& s) {
  std::vector<double> mod(static_cast<std::size_t>(s.wr.size()));
  for (Eigen::Index i = 0; i < s.wr.size(); ++i) mod[i] = std::hypot(s.wr[i], s.wi[i]);
  return mod;
}

}  // namespace

Vector eigen_moduli(const Matrix& m) {
  const RealSchur s = real_schur(m, false);
  std::vector<double> mod = schur_moduli(s);
  std::stable_sort(mod.begin(), mod.end(), std::greater<>());
  return Eigen::Map<Vector>(mod.data(), static_cast<Eigen::Index>(mod.size()));
}

Vector singular_values(const Matrix& m) {
  if (!all_finite(m)) throw Error("matrix has non-finite entries");
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues();
}

Subspace top_invariant_subspace(const Matrix& m, int dim, double gap_tol) {
  const int d = static_cast<int>(m.rows());
  if (dim < 1 || dim > d - 1) throw Error("invariant subspace dimension must lie in [1, d-1]");
  RealSchur s = real_schur(m, true);
  const std::vector<double> mod = schur_moduli(s);
  std::vector<double> sorted = mod;
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  const double upper = sorted[dim - 1];
  const double lower = sorted[dim];
  if (!(upper > (1.0 + gap_tol) * lower)) {
    throw Error("no spectral gap at index " + std::to_string(dim));
  }
  const double cut = std::sqrt(upper * lower);
  std::vector<lapack_logical> select(static_cast<std::size_t>(d));
  int count = 0;
  for (int i = 0; i < d; ++i) {
    select[i] = mod[i] > cut ? 1 : 0;
    count += select[i];
  }
  if (count != dim) throw Error("no spectral gap at index " + std::to_string(dim));
  lapack_int selected = 0;
  double cond_s = 0.0;
  double cond_sep = 0.0;
  // dtrsen writes iwork[0] even when job = 'N', which the high-level LAPACKE
  // wrapper leaves unallocated.
  std::vector<double> work(static_cast<std::size_t>(std::max(1, d)));
  lapack_int iwork = 0;
  const lapack_int info = LAPACKE_dtrsen_work(
      LAPACK_COL_MAJOR, 'N', 'V', select.data(), d, s.t.data(), d, s.q.data(), d, s.wr.data(),
      s.wi.data(), &selected, &cond_s, &cond_sep, work.data(),
      static_cast<lapack_int>(work.size()), &iwork, 1);
  if (info != 0 || selected != dim) {
    throw Error("Schur reordering failed (dtrsen info=" + std::to_string(info) + ")");
  }
  return Subspace::from_orthonormal(s.q.leftCols(dim));
}

// ---------------------------------------------------------------------------
// Distances

namespace {

void require_same_ambient(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw Error("ambient dimension mismatch");
}

}  // namespace

double proj_distance(const Subspace& p, const Subspace& q) {
  require_same_ambient(p, q);
  if (p.rank() != 1 || q.rank() != 1) throw Error("proj_distance expects projective points");
  const Vector u = p.frame().col(0);
  const Vector v = q.frame().col(0);
  return std::min(1.0, (v - u.dot(v) * u).norm());
}

double point_subspace_distance(const Subspace& p, const Subspace& v) {
  require_same_ambient(p, v);
  if (p.rank() != 1) throw Error("point_subspace_distance expects a projective point");
  const Vector u = p.frame().col(0);
  const Vector residual = u - v.frame() * (v.frame().transpose() * u);
  return std::min(1.0, residual.norm());
}

double direct_sum_margin(std::span<const Subspace> subspaces) {
  if (subspaces.empty()) return 1.0;
  const int d = subspaces.front().ambient_dim();
  int total = 0;
  for (const auto& s : subspaces) {
    if (s.ambient_dim() != d) throw Error("ambient dimension mismatch");
    total += s.rank();
  }
  if (total > d) throw Error("rank overflow: subspace ranks sum to more than the ambient dimension");
  Matrix stacked(d, total);
  int col = 0;
  for (const auto& s : subspaces) {
    stacked.middleCols(col, s.rank()) = s.frame();
    col += s.rank();
  }
  return std::min(1.0, smallest_singular_value(stacked));
}

double subspace_distance(const Subspace& a, const Subspace& b) {
  require_same_ambient(a, b);
  if (a.rank() != b.rank()) throw Error("subspace_distance expects equal ranks");
  return containment_residual(a, b);
}

double containment_residual(const Subspace& inner, const Subspace& outer) {
  require_same_ambient(inner, outer);
  const Matrix residual =
      inner.frame() - outer.frame() * (outer.frame().transpose() * inner.frame());
  if (residual.cols() == 1) return std::min(1.0, residual.norm());
  return std::min(1.0, singular_values(residual)[0]);
}

int numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  const Vector s = singular_values(m);
  if (s[0] == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++r;
  }
  return r;
}

Subspace column_space(const Matrix& spanning, double rel_tol) {
  if (spanning.cols() == 0) throw Error("empty spanning set");
  Eigen::JacobiSVD<Matrix> svd(spanning, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++r;
  }
  if (r == 0) throw Error("spanning set is numerically zero");
  return Subspace::from_orthonormal(svd.matrixU().leftCols(r));
}

double smallest_singular_value(const Matrix& m) {
  const Vector s = singular_values(m);
  const auto n = std::min(m.rows(), m.cols());
  return n == 0 ? 0.0 : s[n - 1];
}

}  // namespace anosov
