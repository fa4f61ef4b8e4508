#include "anosov/boundary.hpp"

#include "anosov/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

namespace anosov {

namespace {

double log_gap(const SpectralData& s, int k) { return s.lambda[k - 1] - s.lambda[k]; }

// sin of the angle between two unit vectors, accurate for tiny angles.
double line_distance(const Vector& u, const Vector& v) { return (v - u.dot(v) * u).norm(); }

Vector unit_line(const Subspace& s) { return s.frame().col(0); }

}  // namespace

FlagSample flag_sample(const Representation& rep, const GroupElement& g, int m, double gap_tol) {
  const int d = rep.dim();
  if (m < 1 || m > d - 1) throw Error("flag index m must lie in [1, d-1]");
  const GeneratorSet& gens = rep.generators();
  const CyclicSplit split = cyclic_split(g.word);
  if (split.core.empty()) throw Error("no spectral gap at index 1");
  const MatrixD core = evaluate_word(gens, split.core);
  const MatrixD core_inv = evaluate_word(gens, inverse_word(split.core));
  const MatrixD conj = evaluate_word(gens, split.conjugator);

  FlagSample s;
  s.witness = g;
  s.word = format_word(gens, g.word);
  s.xi1_plus = top_invariant_subspace(core, 1, gap_tol).image(conj);
  s.xim_plus = m == 1 ? s.xi1_plus : top_invariant_subspace(core, m, gap_tol).image(conj);
  s.xi_d1_minus = top_invariant_subspace(core_inv, d - 1, gap_tol).image(conj);
  s.xi_dm_minus =
      m == 1 ? s.xi_d1_minus : top_invariant_subspace(core_inv, d - m, gap_tol).image(conj);
  s.xi1_minus = top_invariant_subspace(core_inv, 1, gap_tol).image(conj);
  s.spectral = cartan_jordan(gens, g);
  return s;
}

LimitCloud limit_samples(const Representation& rep, const Ball& ball, int m,
                         const SampleOptions& options) {
  const int d = rep.dim();
  if (m < 1 || m > d - 1) throw Error("flag index m must lie in [1, d-1]");
  LimitCloud cloud;
  cloud.m = m;
  cloud.dim = d;
  cloud.recipe = rep.recipe();

  std::vector<int> gap_indices{1};
  if (m != 1) gap_indices.push_back(m);
  for (int k : gap_indices) {
    const GapProfile profile = gap_profile(ball, k, options.gaps);
    if (!profile.linear_growth) {
      cloud.warnings.push_back("gap profile at k=" + std::to_string(k) + ": " + profile.verdict);
    }
  }

  const double min_gap = std::log1p(options.gap_tol);
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < ball.elements.size(); ++i) {
    const SpectralData& s = ball.spectra[i];
    if (log_gap(s, 1) > min_gap && log_gap(s, m) > min_gap && log_gap(s, d - 1) > min_gap) {
      candidates.push_back(i);
    }
  }

  std::vector<std::optional<FlagSample>> extracted(candidates.size());
  parallel_for(candidates.size(), [&](std::size_t c) {
    try {
      extracted[c] = flag_sample(rep, ball.elements[candidates[c]], m, options.gap_tol);
    } catch (const Error&) {
    }
  });

  std::vector<Vector> kept;
  for (auto& e : extracted) {
    if (!e) continue;
    const Vector u = unit_line(e->xi1_plus);
    const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](const Vector& v) {
      return line_distance(v, u) < options.dedup_tol;
    });
    if (duplicate) continue;
    kept.push_back(u);
    cloud.samples.push_back(std::move(*e));
  }
  if (cloud.samples.empty()) throw Error("no proximal elements found");
  return cloud;
}

LimitCloud limit_samples(const Representation& rep, int m, int radius,
                         const SampleOptions& options) {
  if (m < 1 || m > rep.dim() - 1) throw Error("flag index m must lie in [1, d-1]");
  return limit_samples(rep, compute_ball(rep, radius, options.ball), m, options);
}

// ---------------------------------------------------------------------------
// Scans

TransversalityReport transversality_scan(const LimitCloud& cloud, const ScanOptions& options) {
  const std::size_t n = cloud.samples.size();
  if (n < 2) throw Error("transversality scan needs at least 2 samples");
  std::vector<Vector> plus(n), minus(n);
  for (std::size_t i = 0; i < n; ++i) {
    plus[i] = unit_line(cloud.samples[i].xi1_plus);
    minus[i] = unit_line(cloud.samples[i].xi1_minus);
  }
  auto separated = [&](std::size_t i, std::size_t j) {
    return line_distance(plus[i], minus[j]) >= options.sep_tol;
  };

  std::vector<std::array<std::size_t, 2>> pairs;
  if (n * (n - 1) <= options.max_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && separated(i, j)) pairs.push_back({i, j});
      }
    }
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const std::size_t max_draws = 20 * options.max_pairs;
    for (std::size_t draw = 0; draw < max_draws && pairs.size() < options.max_pairs; ++draw) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i != j && separated(i, j)) pairs.push_back({i, j});
    }
  }

  std::vector<std::array<double, 2>> margins(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t p) {
    const FlagSample& x = cloud.samples[pairs[p][0]];
    const FlagSample& y = cloud.samples[pairs[p][1]];
    const Subspace flags[] = {x.xim_plus, y.xi_dm_minus};
    const Subspace lines[] = {x.xi1_plus, y.xi_d1_minus};
    margins[p] = {direct_sum_margin(flags), direct_sum_margin(lines)};
  });

  TransversalityReport report;
  report.pairs = pairs.size();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (margins[p][0] < report.min_margin) {
      report.min_margin = margins[p][0];
      report.worst_x = pairs[p][0];
      report.worst_y = pairs[p][1];
    }
    report.min_line_margin = std::min(report.min_line_margin, margins[p][1]);
  }
  return report;
}

HyperconvexityReport hyperconvexity_scan(const LimitCloud& cloud, int m, std::size_t n_triples,
                                         std::uint64_t seed, double sep_tol) {
  const std::size_t n = cloud.samples.size();
  if (m != cloud.m) throw Error("hyperconvexity scan needs a cloud sampled at the same m");
  if (m < 2) throw Error("hyperconvexity needs m >= 2");
  if (n < 2) throw Error("cannot find distinct triples");
  std::vector<Vector> plus(n), minus(n);
  for (std::size_t i = 0; i < n; ++i) {
    plus[i] = unit_line(cloud.samples[i].xi1_plus);
    minus[i] = unit_line(cloud.samples[i].xi1_minus);
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<TripleMargin> triples;
  triples.reserve(n_triples);
  const std::size_t max_draws = 1000 * (n_triples + 1);
  for (std::size_t draw = 0; draw < max_draws && triples.size() < n_triples; ++draw) {
    const std::size_t x = pick(rng);
    const std::size_t z = pick(rng);
    const std::size_t y = pick(rng);
    if (x == z) continue;
    if (line_distance(plus[x], plus[z]) < sep_tol || line_distance(plus[x], minus[y]) < sep_tol ||
        line_distance(plus[z], minus[y]) < sep_tol) {
      continue;
    }
    triples.push_back({x, z, y, 0.0});
  }
  if (triples.size() < n_triples) throw Error("cannot find distinct triples");

  parallel_for(triples.size(), [&](std::size_t t) {
    const Subspace parts[] = {cloud.samples[triples[t].x].xi1_plus,
                              cloud.samples[triples[t].z].xi1_plus,
                              cloud.samples[triples[t].y].xi_dm_minus};
    triples[t].margin = direct_sum_margin(parts);
  });

  HyperconvexityReport report;
  for (const auto& t : triples) {
    if (t.margin < report.min_margin || report.triples.empty()) {
      report.min_margin = t.margin;
      report.worst = t;
    }
    report.triples.push_back(t);
  }
  return report;
}

ControlledSetReport controlled_set_check(const LimitCloud& cloud, double sep_tol,
                                         double violation_tol) {
  const std::size_t n = cloud.samples.size();
  if (n < 2) throw Error("controlled set check needs at least 2 samples");
  std::vector<Vector> plus(n), minus(n);
  std::vector<Matrix> normals(n);
  for (std::size_t i = 0; i < n; ++i) {
    plus[i] = unit_line(cloud.samples[i].xi1_plus);
    minus[i] = unit_line(cloud.samples[i].xi1_minus);
    normals[i] = cloud.samples[i].xi_d1_minus.complement().frame();
  }

  struct Row {
    double min = 1.0;
    std::size_t pairs = 0;
    std::vector<std::size_t> violations;
  };
  std::vector<Row> rows(n);
  parallel_for(n, [&](std::size_t i) {
    Row& row = rows[i];
    for (std::size_t j = 0; j < n; ++j) {
      if (line_distance(plus[i], minus[j]) < sep_tol) continue;
      const double margin = (normals[j].transpose() * plus[i]).norm();
      ++row.pairs;
      row.min = std::min(row.min, margin);
      if (margin < violation_tol) row.violations.push_back(j);
    }
  });

  ControlledSetReport report;
  for (std::size_t i = 0; i < n; ++i) {
    report.pairs += rows[i].pairs;
    report.min_margin = std::min(report.min_margin, rows[i].min);
    for (std::size_t j : rows[i].violations) report.violations.push_back({i, j});
  }
  return report;
}

// ---------------------------------------------------------------------------
// Irreducibility

namespace {

// Smallest subspace containing `seed` and invariant under `mats`.
int spin_dimension(const Matrix& seed, const std::vector<Matrix>& mats) {
  const int d = static_cast<int>(seed.rows());
  Matrix q = column_space(seed, 1e-8).frame();
  bool grew = true;
  while (grew && q.cols() < d) {
    grew = false;
    for (const Matrix& g : mats) {
      const double scale = g.norm();
      Matrix r = g * q;
      r -= q * (q.transpose() * r);
      r -= q * (q.transpose() * r);
      for (Eigen::Index c = 0; c < r.cols() && q.cols() < d; ++c) {
        Vector v = r.col(c);
        v -= q * (q.transpose() * v);
        const double len = v.norm();
        if (len <= 1e-8 * scale) continue;
        v /= len;
        v -= q * (q.transpose() * v);
        v.normalize();
        q.conservativeResize(Eigen::NoChange, q.cols() + 1);
        q.col(q.cols() - 1) = v;
        grew = true;
      }
    }
  }
  return static_cast<int>(q.cols());
}

// Proper invariant subspace dimension found by spinning eigenvectors of
// `theta` under `mats` (0 if every spin fills the space).
int smallest_spin(const Matrix& theta, const std::vector<Matrix>& mats) {
  const int d = static_cast<int>(theta.rows());
  Eigen::EigenSolver<Matrix> es(theta, true);
  int best = 0;
  for (int i = 0; i < d; ++i) {
    const auto lambda = es.eigenvalues()[i];
    if (lambda.imag() < 0) continue;
    const Eigen::VectorXcd v = es.eigenvectors().col(i);
    Matrix seed(d, lambda.imag() > 0 ? 2 : 1);
    seed.col(0) = v.real();
    if (lambda.imag() > 0) seed.col(1) = v.imag();
    if (seed.col(0).norm() == 0.0) seed.col(0) = v.imag();
    const int dim = spin_dimension(seed, mats);
    if (dim < d && (best == 0 || dim < best)) best = dim;
  }
  return best;
}

}  // namespace

IrreducibilityReport irreducibility_proxy(const Representation& rep, int radius,
                                          std::uint64_t seed) {
  const int d = rep.dim();
  IrreducibilityReport report;
  report.dim = d;
  const GeneratorSet& gens = rep.generators();
  const std::vector<GroupElement> ball = enumerate_ball(gens, std::max(radius, 1));

  std::vector<Vector> lines;
  for (const auto& g : ball) {
    if (g.length() == 0) continue;
    try {
      lines.push_back(unit_line(top_invariant_subspace(g.matrix, 1)));
    } catch (const Error&) {
    }
  }
  if (!lines.empty()) {
    Matrix stacked(d, static_cast<Eigen::Index>(lines.size()));
    for (std::size_t i = 0; i < lines.size(); ++i) stacked.col(static_cast<Eigen::Index>(i)) = lines[i];
    report.span_rank = numerical_rank(stacked, 1e-8);
  }

  std::vector<Matrix> mats, mats_t;
  for (int i = 0; i < gens.size(); i += 2) {
    mats.push_back(gens.matrix(i).matrix());
    mats_t.push_back(gens.matrix(i).matrix().transpose());
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  constexpr int kTrials = 3;
  for (int trial = 0; trial < kTrials; ++trial) {
    Matrix theta = Matrix::Zero(d, d);
    for (const auto& g : ball) theta += normal(rng) * g.matrix.matrix() / g.matrix.matrix().norm();
    for (int dual = 0; dual < 2; ++dual) {
      const int found = dual ? smallest_spin(theta.transpose(), mats_t) : smallest_spin(theta, mats);
      if (found == 0) continue;
      // An invariant subspace of the transpose has an invariant annihilator.
      const int dim = dual ? d - found : found;
      if (report.invariant_dim == 0 || dim < report.invariant_dim) report.invariant_dim = dim;
    }
  }
  report.irreducible = report.span_rank == d && report.invariant_dim == 0;
  return report;
}

}  // namespace anosov
