#include "anosov/functors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

namespace anosov {

namespace {

std::uint64_t mask_of(const std::vector<int>& subset) {
  std::uint64_t m = 0;
  for (int i : subset) m |= (std::uint64_t{1} << i);
  return m;
}

struct WedgeIndex {
  std::vector<std::vector<int>> subsets;
  std::unordered_map<std::uint64_t, int> rank;

  WedgeIndex(int d, int k) : subsets(wedge_basis(d, k)) {
    for (std::size_t i = 0; i < subsets.size(); ++i) {
      rank.emplace(mask_of(subsets[i]), static_cast<int>(i));
    }
  }
};

Matrix block_diagonal(const Matrix& a, const Matrix& b) {
  Matrix out = Matrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// Applies a matrix-level map to every generator and inverse of `rep`.
template <class F>
GeneratorSet map_generators(const GeneratorSet& gens, F&& f) {
  std::vector<MatrixD> g;
  std::vector<MatrixD> h;
  for (int i = 0; i < gens.size(); i += 2) {
    g.push_back(MatrixD::normalize_lift(f(gens.matrix(i).matrix()), 0.0));
    h.push_back(MatrixD::normalize_lift(f(gens.matrix(i + 1).matrix()), 0.0));
  }
  return GeneratorSet::from_pairs(gens.base_labels(), std::move(g), std::move(h));
}

Recipe extended(const Recipe& r, FunctorStep step) {
  Recipe out = r;
  out.chain.push_back(std::move(step));
  return out;
}

bool same_base(const BaseGenerators& a, const BaseGenerators& b) {
  if (a.labels != b.labels || a.real.size() != b.real.size() ||
      a.complex.size() != b.complex.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.real.size(); ++i) {
    if (a.real[i].rows() != b.real[i].rows() || a.real[i] != b.real[i]) return false;
  }
  for (std::size_t i = 0; i < a.complex.size(); ++i) {
    if (a.complex[i].rows() != b.complex[i].rows() || a.complex[i] != b.complex[i]) return false;
  }
  return true;
}

Representation direct_sum_generators(const Representation& r1, const Representation& r2,
                                      Recipe recipe) {
  const GeneratorSet& a = r1.generators();
  const GeneratorSet& b = r2.generators();
  if (a.base_labels() != b.base_labels()) {
    throw Error("direct sum needs identical generator labels");
  }
  std::vector<MatrixD> g;
  std::vector<MatrixD> h;
  for (int i = 0; i < a.size(); i += 2) {
    g.push_back(MatrixD::normalize_lift(block_diagonal(a.matrix(i).matrix(), b.matrix(i).matrix()), 0.0));
    h.push_back(MatrixD::normalize_lift(
        block_diagonal(a.matrix(i + 1).matrix(), b.matrix(i + 1).matrix()), 0.0));
  }
  return Representation(GeneratorSet::from_pairs(a.base_labels(), std::move(g), std::move(h)),
                        std::move(recipe));
}

Representation apply_chain(Representation rep, const FunctorChain& chain) {
  for (const auto& step : chain) rep = apply_step(rep, step);
  return rep;
}

GeneratorSet su21_generators(const BaseGenerators& base) {
  const ComplexMatrix j = su21_form();
  std::vector<MatrixD> g;
  std::vector<MatrixD> h;
  for (const auto& c : base.complex) {
    g.push_back(MatrixD::normalize_lift(build_su21_rep(c), 0.0));
    // In SU(2,1), g^{-1} = J g^* J.
    h.push_back(MatrixD::normalize_lift(build_su21_rep(j * c.adjoint() * j), 0.0));
  }
  return GeneratorSet::from_pairs(base.labels, std::move(g), std::move(h));
}

}  // namespace

// ---------------------------------------------------------------------------
// Recipes and representations

std::string describe(const FunctorChain& chain) {
  std::ostringstream os;
  bool first = true;
  for (const auto& step : chain) {
    if (!first) os << " -> ";
    first = false;
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, TauStep>) {
            os << "tau_d(" << s.d << ")";
          } else if constexpr (std::is_same_v<T, WedgeStep>) {
            os << "wedge(" << s.k << ")";
          } else if constexpr (std::is_same_v<T, Sym2Step>) {
            os << "sym2";
          } else if constexpr (std::is_same_v<T, Su21Step>) {
            os << "su21";
          } else if constexpr (std::is_same_v<T, PerturbStep>) {
            os << "perturb(eps=" << s.eps << ", seed=" << s.seed << ")";
          } else if constexpr (std::is_same_v<T, ConjugateStep>) {
            os << "conjugate";
          } else if constexpr (std::is_same_v<T, DirectSumStep>) {
            os << "direct_sum[";
            for (std::size_t i = 0; i < s.parts.size(); ++i) {
              if (i) os << " | ";
              os << (s.parts[i].empty() ? std::string("id") : describe(s.parts[i]));
            }
            os << "]";
          }
        },
        step.op);
  }
  return first ? std::string("id") : os.str();
}

Representation Representation::from_recipe(Recipe recipe) {
  const BaseGenerators& base = recipe.base;
  if (base.real.empty() && base.complex.empty()) throw Error("at least one generator required");
  if (!base.real.empty() && !base.complex.empty()) {
    throw Error("base generators must be all real or all complex");
  }
  const std::size_t n = base.real.empty() ? base.complex.size() : base.real.size();
  if (base.labels.size() != n) throw Error("one label per base generator required");

  FunctorChain rest = recipe.chain;
  Recipe seed{base, {}};
  GeneratorSet gens;
  if (!base.complex.empty()) {
    if (rest.empty() || !std::holds_alternative<Su21Step>(rest.front().op)) {
      throw Error("complex base generators must be followed by the su21 functor");
    }
    gens = su21_generators(base);
    seed.chain.push_back(rest.front());
    rest.erase(rest.begin());
  } else {
    std::vector<MatrixD> g;
    for (const auto& m : base.real) g.push_back(MatrixD::normalize_lift(m));
    gens = GeneratorSet::from_generators(base.labels, std::move(g));
  }
  return apply_chain(Representation(std::move(gens), std::move(seed)), rest);
}

Representation make_representation(std::vector<std::string> labels,
                                   const std::vector<Matrix>& generators) {
  Recipe r;
  r.base.labels = std::move(labels);
  r.base.real = generators;
  return Representation::from_recipe(std::move(r));
}

Representation apply_step(const Representation& rep, const FunctorStep& step) {
  const GeneratorSet& gens = rep.generators();
  Recipe recipe = extended(rep.recipe(), step);
  return std::visit(
      [&](const auto& s) -> Representation {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, TauStep>) {
          if (gens.dim() != 2) throw Error("tau_d expects a 2-dimensional representation");
          return Representation(map_generators(gens, [&](const Matrix& m) { return tau_d(m, s.d); }),
                                std::move(recipe));
        } else if constexpr (std::is_same_v<T, WedgeStep>) {
          if (s.k < 1 || s.k > gens.dim() - 1) throw Error("wedge power k must lie in [1, d-1]");
          return Representation(
              map_generators(gens, [&](const Matrix& m) { return wedge_power(m, s.k); }),
              std::move(recipe));
        } else if constexpr (std::is_same_v<T, Sym2Step>) {
          return Representation(map_generators(gens, [](const Matrix& m) { return sym_square(m); }),
                                std::move(recipe));
        } else if constexpr (std::is_same_v<T, Su21Step>) {
          throw Error("the su21 functor needs complex SU(2,1) base generators");
        } else if constexpr (std::is_same_v<T, PerturbStep>) {
          Representation p = perturb_rep(rep, s.eps, s.seed);
          return Representation(p.generators(), std::move(recipe));
        } else if constexpr (std::is_same_v<T, ConjugateStep>) {
          if (s.by.rows() != gens.dim() || s.by.cols() != gens.dim()) {
            throw Error("conjugating matrix has the wrong dimension");
          }
          const Matrix inv = s.by.inverse();
          return Representation(
              map_generators(gens, [&](const Matrix& m) -> Matrix { return s.by * m * inv; }),
              std::move(recipe));
        } else {
          static_assert(std::is_same_v<T, DirectSumStep>);
          if (s.parts.size() < 2) throw Error("direct sum needs at least two parts");
          Representation acc = apply_chain(rep, s.parts.front());
          for (std::size_t i = 1; i < s.parts.size(); ++i) {
            acc = direct_sum_generators(acc, apply_chain(rep, s.parts[i]), recipe);
          }
          return Representation(acc.generators(), std::move(recipe));
        }
      },
      step.op);
}

Representation direct_sum_rep(const Representation& r1, const Representation& r2) {
  Recipe recipe;
  if (same_base(r1.recipe().base, r2.recipe().base)) {
    recipe.base = r1.recipe().base;
    recipe.chain.push_back({DirectSumStep{{r1.recipe().chain, r2.recipe().chain}}});
  }
  Representation sum = direct_sum_generators(r1, r2, {});
  if (recipe.chain.empty()) {
    // Different bases: record the resulting generators verbatim.
    recipe.base.labels = sum.generators().base_labels();
    for (int i = 0; i < sum.generators().size(); i += 2) {
      recipe.base.real.push_back(sum.generators().matrix(i).matrix());
    }
  }
  return Representation(sum.generators(), std::move(recipe));
}

Representation perturb_rep(const Representation& rep, double eps, std::uint64_t seed) {
  if (!(eps >= 0)) throw Error("perturbation size must be non-negative");
  Recipe recipe = extended(rep.recipe(), {PerturbStep{eps, seed}});
  if (eps == 0.0) return Representation(rep.generators(), std::move(recipe));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-eps, eps);
  const GeneratorSet& gens = rep.generators();
  std::vector<MatrixD> g;
  for (int i = 0; i < gens.size(); i += 2) {
    Matrix m = gens.matrix(i).matrix();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) += noise(rng);
    }
    try {
      g.push_back(MatrixD::normalize_lift(m));
    } catch (const Error&) {
      throw Error("perturbed generator '" + gens.label(i) + "' is singular");
    }
  }
  return Representation(GeneratorSet::from_generators(gens.base_labels(), std::move(g)),
                        std::move(recipe));
}

// ---------------------------------------------------------------------------
// tau_d

Matrix tau_d(const Matrix& g, int d) {
  if (g.rows() != 2 || g.cols() != 2) throw Error("tau_d expects a 2x2 matrix");
  if (d < 2) throw Error("tau_d needs d >= 2");
  const Matrix h = g.inverse();
  // (X, Y) -> h (X, Y): X -> pX + qY, Y -> rX + sY. Polynomials are stored as
  // coefficient vectors indexed by the power of Y.
  const double p = h(0, 0), q = h(0, 1), r = h(1, 0), s = h(1, 1);
  auto multiply = [](const std::vector<double>& a, double c0, double c1) {
    std::vector<double> out(a.size() + 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      out[i] += a[i] * c0;
      out[i + 1] += a[i] * c1;
    }
    return out;
  };
  Matrix out(d, d);
  for (int i = 0; i < d; ++i) {
    // X^{d-1-i} Y^i
    std::vector<double> poly{1.0};
    for (int a = 0; a < d - 1 - i; ++a) poly = multiply(poly, p, q);
    for (int b = 0; b < i; ++b) poly = multiply(poly, r, s);
    for (int j = 0; j < d; ++j) out(j, i) = poly[j];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exterior powers

std::vector<std::vector<int>> wedge_basis(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > d) return out;
  std::vector<int> cur(k);
  for (int i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == d - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Matrix wedge_power(const Matrix& m, int k) {
  const int d = static_cast<int>(m.rows());
  if (m.cols() != d) throw Error("wedge_power expects a square matrix");
  if (k < 1 || k > d) throw Error("wedge power k must lie in [1, d]");
  const auto basis = wedge_basis(d, k);
  const auto n = static_cast<Eigen::Index>(basis.size());
  Matrix out(n, n);
  Matrix minor(k, k);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) minor(i, j) = m(basis[a][i], basis[b][j]);
      }
      out(a, b) = minor.determinant();
    }
  }
  return out;
}

Vector wedge(const Vector& a, int deg_a, const Vector& b, int deg_b, int d) {
  const int deg = deg_a + deg_b;
  if (deg > d) throw Error("wedge degree exceeds the ambient dimension");
  const auto ba = wedge_basis(d, deg_a);
  const auto bb = wedge_basis(d, deg_b);
  if (a.size() != static_cast<Eigen::Index>(ba.size()) ||
      b.size() != static_cast<Eigen::Index>(bb.size())) {
    throw Error("multivector has the wrong number of coordinates");
  }
  const WedgeIndex target(d, deg);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(target.subsets.size()));
  for (std::size_t i = 0; i < ba.size(); ++i) {
    if (a[i] == 0.0) continue;
    const std::uint64_t mi = mask_of(ba[i]);
    for (std::size_t j = 0; j < bb.size(); ++j) {
      if (b[j] == 0.0) continue;
      const std::uint64_t mj = mask_of(bb[j]);
      if (mi & mj) continue;
      // Sign of the shuffle that sorts I followed by J.
      int inversions = 0;
      for (int x : ba[i]) inversions += std::popcount(mj & ((std::uint64_t{1} << x) - 1));
      const double sign = (inversions % 2) ? -1.0 : 1.0;
      out[target.rank.at(mi | mj)] += sign * a[i] * b[j];
    }
  }
  return out;
}

Subspace flag_wedge(const Subspace& v) {
  const int d = v.ambient_dim();
  const int m = v.rank();
  const auto basis = wedge_basis(d, m);
  Vector coords(static_cast<Eigen::Index>(basis.size()));
  Matrix minor(m, m);
  for (std::size_t a = 0; a < basis.size(); ++a) {
    for (int i = 0; i < m; ++i) minor.row(i) = v.frame().row(basis[a][i]);
    coords[static_cast<Eigen::Index>(a)] = minor.determinant();
  }
  return Subspace::line(coords);
}

// ---------------------------------------------------------------------------
// Symmetric square

Vector sym_coords(const Matrix& x) {
  const auto d = x.rows();
  Vector c(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      c[k++] = (i == j) ? x(i, i) : std::sqrt(2.0) * 0.5 * (x(i, j) + x(j, i));
    }
  }
  return c;
}

Matrix sym_from_coords(const Vector& c, int d) {
  if (c.size() != d * (d + 1) / 2) throw Error("wrong number of symmetric coordinates");
  Matrix x(d, d);
  Eigen::Index k = 0;
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      const double v = c[k++];
      if (i == j) {
        x(i, i) = v;
      } else {
        x(i, j) = x(j, i) = v / std::sqrt(2.0);
      }
    }
  }
  return x;
}

Matrix sym_square(const Matrix& m) {
  const auto d = m.rows();
  if (m.cols() != d) throw Error("sym_square expects a square matrix");
  const auto n = d * (d + 1) / 2;
  Matrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i; j < d; ++j) {
      Matrix b = Matrix::Zero(d, d);
      if (i == j) {
        b(i, i) = 1.0;
      } else {
        b(i, j) = b(j, i) = 1.0 / std::sqrt(2.0);
      }
      out.col(k++) = sym_coords(m * b * m.transpose());
    }
  }
  return out;
}

Subspace veronese_point(const Subspace& v) {
  if (v.rank() != 1) throw Error("veronese_point expects a projective point");
  const Vector u = v.frame().col(0);
  return Subspace::line(sym_coords(u * u.transpose()));
}

Subspace veronese_hyperplane(const Subspace& w) {
  const int d = w.ambient_dim();
  Matrix spanning(d * (d + 1) / 2, static_cast<Eigen::Index>(w.rank()) * d);
  Eigen::Index col = 0;
  for (int a = 0; a < w.rank(); ++a) {
    const Vector wa = w.frame().col(a);
    for (int i = 0; i < d; ++i) {
      const Vector e = Vector::Unit(d, i);
      spanning.col(col++) = sym_coords(e * wa.transpose() + wa * e.transpose());
    }
  }
  return column_space(spanning);
}

// ---------------------------------------------------------------------------
// SU(2,1)

ComplexMatrix su21_form() {
  ComplexMatrix j = ComplexMatrix::Zero(3, 3);
  j(0, 2) = j(1, 1) = j(2, 0) = 1.0;
  return j;
}

Matrix realify(const ComplexMatrix& g) {
  const auto n = g.rows();
  Matrix out(2 * n, 2 * g.cols());
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) {
      const double a = g(r, c).real();
      const double b = g(r, c).imag();
      out(2 * r, 2 * c) = a;
      out(2 * r, 2 * c + 1) = -b;
      out(2 * r + 1, 2 * c) = b;
      out(2 * r + 1, 2 * c + 1) = a;
    }
  }
  return out;
}

Matrix su21_fixed_basis() {
  const WedgeIndex idx(6, 2);
  // e_a ∧ e_b with 1-based indices a < b.
  auto e = [&](int a, int b) {
    Vector v = Vector::Zero(15);
    v[idx.rank.at(mask_of({a - 1, b - 1}))] = 1.0;
    return v;
  };
  Matrix f(15, 9);
  f.col(0) = e(1, 2);
  f.col(1) = e(2, 3) - e(1, 4);
  f.col(2) = e(1, 3) + e(2, 4);
  f.col(3) = e(3, 4);
  f.col(4) = e(2, 5) - e(1, 6);
  f.col(5) = e(1, 5) + e(2, 6);
  f.col(6) = e(3, 5) + e(4, 6);
  f.col(7) = e(4, 5) - e(3, 6);
  f.col(8) = e(5, 6);
  return f;
}

Matrix build_su21_rep(const ComplexMatrix& g) {
  if (g.rows() != 3 || g.cols() != 3) throw Error("SU(2,1) elements are 3x3 complex matrices");
  const ComplexMatrix j = su21_form();
  if ((g.adjoint() * j * g - j).cwiseAbs().maxCoeff() > 1e-8) throw Error("not in SU(2,1)");
  const Matrix w = wedge_power(realify(g), 2);
  const Matrix f = su21_fixed_basis();
  // f has orthogonal columns, so the least-squares coordinates are exact.
  return (f.transpose() * f).ldlt().solve(f.transpose() * w * f);
}

// ---------------------------------------------------------------------------
// Hitchin zeta maps

namespace {

// Spanning multivectors of ∧^j V; `v == nullptr` stands for the zero space
// and `full` for R^d.
std::vector<Vector> exterior_span(const Subspace* v, int j, int d) {
  if (j == 0) return {Vector::Ones(1)};
  if (v == nullptr) return {};
  const auto subsets = wedge_basis(v->rank(), j);
  std::vector<Vector> out;
  for (const auto& s : subsets) {
    Vector acc = Vector::Ones(1);
    int deg = 0;
    for (int c : s) {
      acc = wedge(acc, deg, v->frame().col(c), 1, d);
      ++deg;
    }
    out.push_back(std::move(acc));
  }
  return out;
}

std::vector<Vector> wedge_sets(const std::vector<Vector>& a, int deg_a,
                               const std::vector<Vector>& b, int deg_b, int d) {
  std::vector<Vector> out;
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(wedge(x, deg_a, y, deg_b, d));
  }
  return out;
}

}  // namespace

Subspace hitchin_zeta(std::span<const Subspace> flag, int k, ZetaLevel level) {
  if (flag.empty()) throw Error("empty flag");
  const int d = flag.front().ambient_dim();
  if (static_cast<int>(flag.size()) != d - 1) throw Error("a full flag has d-1 subspaces");
  if (k < 1 || k > d - 1) throw Error("wedge index k must lie in [1, d-1]");
  for (int j = 0; j < d - 1; ++j) {
    if (flag[j].ambient_dim() != d || flag[j].rank() != j + 1) {
      throw Error("flag subspace " + std::to_string(j + 1) + " has the wrong rank");
    }
    if (j + 1 < d - 1 && containment_residual(flag[j], flag[j + 1]) > 1e-8) {
      throw Error("flag is not nested at index " + std::to_string(j + 1));
    }
  }
  const Subspace full = Subspace::full(d);
  auto xi = [&](int j) -> const Subspace* {
    if (j <= 0) return nullptr;
    if (j >= d) return &full;
    return &flag[j - 1];
  };
  const int big_d = static_cast<int>(wedge_basis(d, k).size());

  std::vector<Vector> spanning;
  int expected = 0;
  switch (level) {
    case ZetaLevel::One:
      spanning = exterior_span(xi(k), k, d);
      expected = 1;
      break;
    case ZetaLevel::Two:
      spanning = wedge_sets(exterior_span(xi(k - 1), k - 1, d), k - 1,
                            exterior_span(xi(k + 1), 1, d), 1, d);
      expected = 2;
      break;
    case ZetaLevel::CoTwo: {
      spanning = wedge_sets(exterior_span(xi(d - k - 1), 1, d), 1,
                            exterior_span(&full, k - 1, d), k - 1, d);
      if (k >= 2) {
        auto pairs = wedge_sets(exterior_span(xi(d - k), 1, d), 1,
                                exterior_span(xi(d - k + 1), 1, d), 1, d);
        auto more = wedge_sets(pairs, 2, exterior_span(&full, k - 2, d), k - 2, d);
        spanning.insert(spanning.end(), more.begin(), more.end());
      }
      expected = big_d - 2;
      break;
    }
    case ZetaLevel::CoOne:
      spanning = wedge_sets(exterior_span(xi(d - k), 1, d), 1,
                            exterior_span(&full, k - 1, d), k - 1, d);
      expected = big_d - 1;
      break;
  }
  if (spanning.empty()) throw Error("zeta map is degenerate for this (d, k)");
  Matrix cols(big_d, static_cast<Eigen::Index>(spanning.size()));
  for (std::size_t i = 0; i < spanning.size(); ++i) {
    cols.col(static_cast<Eigen::Index>(i)) = spanning[i];
  }
  Subspace out = column_space(cols);
  if (out.rank() != expected) {
    throw Error("zeta map has rank " + std::to_string(out.rank()) + ", expected " +
                std::to_string(expected));
  }
  return out;
}

}  // namespace anosov
