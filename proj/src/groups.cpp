#include "anosov/groups.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace anosov {

std::string inverse_label(const std::string& label) {
  if (label.size() == 1 && std::islower(static_cast<unsigned char>(label[0]))) {
    return std::string(1, static_cast<char>(std::toupper(static_cast<unsigned char>(label[0]))));
  }
  return label + "~";
}

GeneratorSet GeneratorSet::from_pairs(std::vector<std::string> labels,
                                      std::vector<MatrixD> generators,
                                      std::vector<MatrixD> inverses) {
  if (generators.empty()) throw Error("at least one generator required");
  if (labels.size() != generators.size() || inverses.size() != generators.size()) {
    throw Error("generator labels, matrices and inverses must have equal length");
  }
  GeneratorSet out;
  out.dim_ = generators.front().dim();
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const MatrixD& g = generators[i];
    const MatrixD& h = inverses[i];
    if (g.dim() != out.dim_ || h.dim() != out.dim_) {
      throw Error("generator '" + labels[i] + "' has inconsistent dimension");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (labels[j] == labels[i]) throw Error("duplicate generator label '" + labels[i] + "'");
    }
    const double scale = std::max(1.0, g.matrix().cwiseAbs().maxCoeff() *
                                           h.matrix().cwiseAbs().maxCoeff());
    const double err = (g.matrix() * h.matrix() - Matrix::Identity(out.dim_, out.dim_))
                           .cwiseAbs()
                           .maxCoeff();
    if (err > 1e-8 * scale) {
      throw Error("inverse of generator '" + labels[i] + "' does not match");
    }
    out.labels_.push_back(labels[i]);
    out.labels_.push_back(inverse_label(labels[i]));
    out.matrices_.push_back(g);
    out.matrices_.push_back(h);
  }
  return out;
}

GeneratorSet GeneratorSet::from_generators(std::vector<std::string> labels,
                                           std::vector<MatrixD> generators) {
  std::vector<MatrixD> inverses;
  inverses.reserve(generators.size());
  for (const auto& g : generators) inverses.push_back(g.inverse());
  return from_pairs(std::move(labels), std::move(generators), std::move(inverses));
}

std::vector<std::string> GeneratorSet::base_labels() const {
  std::vector<std::string> out;
  for (int i = 0; i < size(); i += 2) out.push_back(labels_[i]);
  return out;
}

std::string format_word(const GeneratorSet& gens, std::span<const int> word) {
  if (word.empty()) return "e";
  std::string out;
  for (int i : word) out += gens.label(i);
  return out;
}

std::vector<int> parse_word(const GeneratorSet& gens, std::string_view text) {
  std::vector<int> word;
  if (text == "e") {
    bool e_is_label = false;
    for (int i = 0; i < gens.size(); ++i) e_is_label = e_is_label || gens.label(i) == "e";
    if (!e_is_label) return word;
  }
  std::size_t pos = 0;
  while (pos < text.size()) {
    int best = -1;
    std::size_t best_len = 0;
    for (int i = 0; i < gens.size(); ++i) {
      const std::string& l = gens.label(i);
      if (l.size() > best_len && text.substr(pos, l.size()) == l) {
        best = i;
        best_len = l.size();
      }
    }
    if (best < 0) {
      throw Error("cannot parse word '" + std::string(text) + "' at position " + std::to_string(pos));
    }
    word.push_back(best);
    pos += best_len;
  }
  return word;
}

std::vector<int> inverse_word(std::span<const int> word) {
  std::vector<int> out(word.rbegin(), word.rend());
  for (int& i : out) i = GeneratorSet::inverse_index(i);
  return out;
}

CyclicSplit cyclic_split(std::span<const int> word) {
  std::vector<int> w;
  for (int x : word) {
    if (!w.empty() && w.back() == GeneratorSet::inverse_index(x)) {
      w.pop_back();
    } else {
      w.push_back(x);
    }
  }
  std::size_t p = 0;
  while (w.size() - 2 * p >= 2 && w[p] == GeneratorSet::inverse_index(w[w.size() - 1 - p])) ++p;
  CyclicSplit out;
  out.conjugator.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(p));
  out.core.assign(w.begin() + static_cast<std::ptrdiff_t>(p),
                  w.end() - static_cast<std::ptrdiff_t>(p));
  return out;
}

MatrixD evaluate_word(const GeneratorSet& gens, std::span<const int> word) {
  MatrixD m = MatrixD::identity(gens.dim());
  for (int i : word) m = m * gens.matrix(i);
  return m;
}

std::size_t free_ball_size(int num_generators, int radius) {
  const std::size_t k2 = 2 * static_cast<std::size_t>(num_generators);
  std::size_t total = 1;
  std::size_t level = k2;
  for (int n = 1; n <= radius; ++n) {
    total += level;
    level *= (k2 - 1);
  }
  return total;
}

namespace {

// Matrix with its overall sign fixed by the first entry that is not
// negligible relative to the largest one.
Matrix sign_normalized(const Matrix& m) {
  const double big = m.cwiseAbs().maxCoeff();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (std::abs(m(i, j)) > 1e-6 * big) return m(i, j) < 0 ? Matrix(-m) : m;
    }
  }
  return m;
}

// Tolerance-exact duplicate detection: candidates are located through a
// scalar key that is 1-Lipschitz (up to the weight sum) in the max norm.
class DedupIndex {
 public:
  DedupIndex(int d, double tol) : tol_(tol), weights_(d * d) {
    for (int i = 0; i < d * d; ++i) {
      weights_[i] = 0.5 + std::fmod(0.6180339887498949 * (i + 1), 1.0);
    }
    weight_sum_ = weights_.sum();
  }

  // Returns true if an equal matrix is already present; otherwise inserts it.
  bool seen_or_insert(const Matrix& m) {
    Matrix n = sign_normalized(m);
    const double scale = std::max(1.0, n.cwiseAbs().maxCoeff());
    const double key = weights_.dot(n.reshaped());
    const double slack = tol_ * scale * weight_sum_;
    auto lo = index_.lower_bound(key - slack);
    const auto hi = index_.upper_bound(key + slack);
    for (; lo != hi; ++lo) {
      const Matrix& other = stored_[lo->second];
      const double s = std::max(scale, std::max(1.0, other.cwiseAbs().maxCoeff()));
      if ((other - n).cwiseAbs().maxCoeff() <= tol_ * s) return true;
    }
    index_.emplace(key, stored_.size());
    stored_.push_back(std::move(n));
    return false;
  }

 private:
  double tol_;
  Vector weights_;
  double weight_sum_ = 0.0;
  std::multimap<double, std::size_t> index_;
  std::vector<Matrix> stored_;
};

}  // namespace

std::vector<GroupElement> enumerate_ball(const GeneratorSet& gens, int radius,
                                         const BallOptions& options) {
  if (radius < 0) throw Error("ball radius must be non-negative");
  if (gens.size() == 0) throw Error("at least one generator required");
  const bool dedup = options.dedup_tol >= 0;
  DedupIndex index(gens.dim(), std::max(0.0, options.dedup_tol));

  std::vector<GroupElement> ball;
  ball.push_back({{}, MatrixD::identity(gens.dim())});
  if (dedup) index.seen_or_insert(ball.front().matrix.matrix());

  std::size_t level_begin = 0;
  std::size_t level_end = 1;
  for (int n = 1; n <= radius; ++n) {
    for (std::size_t e = level_begin; e < level_end; ++e) {
      for (int g = 0; g < gens.size(); ++g) {
        const GroupElement& parent = ball[e];
        if (!parent.word.empty() && parent.word.back() == GeneratorSet::inverse_index(g)) continue;
        GroupElement child{parent.word, parent.matrix * gens.matrix(g)};
        child.word.push_back(g);
        if (dedup && index.seen_or_insert(child.matrix.matrix())) continue;
        if (ball.size() >= options.cap) {
          throw Error("ball too large (cap " + std::to_string(options.cap) + " elements)");
        }
        ball.push_back(std::move(child));
      }
    }
    level_begin = level_end;
    level_end = ball.size();
  }
  return ball;
}

bool is_infinite_order_proxy(const MatrixD& g, double tol) {
  const Vector lam = eigen_moduli(g);
  return lam[0] > (1.0 + tol) * lam[lam.size() - 1];
}

}  // namespace anosov
