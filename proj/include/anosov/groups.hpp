#pragma once

// Finitely generated groups given by matrices: symmetric generating sets,
// reduced words, and enumeration of word-metric balls.

#include "anosov/linalg.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace anosov {

/// A symmetric generating set. Generators are stored in the order
/// g_0, g_0^{-1}, g_1, g_1^{-1}, ... so the inverse of index i is i ^ 1.
class GeneratorSet {
 public:
  GeneratorSet() = default;

  /// Builds the symmetric set from generators and their inverses. The
  /// inverses are checked against the generators (product within 1e-8 of the
  /// identity, relative to the matrix scale). Labels of inverses are derived:
  /// a single lowercase letter maps to its uppercase form, anything else gets
  /// a trailing '~'.
  static GeneratorSet from_pairs(std::vector<std::string> labels,
                                 std::vector<MatrixD> generators,
                                 std::vector<MatrixD> inverses);

  /// Same, with inverses computed by matrix inversion.
  static GeneratorSet from_generators(std::vector<std::string> labels,
                                      std::vector<MatrixD> generators);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(matrices_.size()); }
  int num_generators() const { return size() / 2; }
  static int inverse_index(int i) { return i ^ 1; }

  const std::string& label(int i) const { return labels_.at(i); }
  const MatrixD& matrix(int i) const { return matrices_.at(i); }
  const std::vector<MatrixD>& matrices() const { return matrices_; }

  /// Labels of g_0, g_1, ... (without inverses).
  std::vector<std::string> base_labels() const;

 private:
  int dim_ = 0;
  std::vector<std::string> labels_;
  std::vector<MatrixD> matrices_;
};

std::string inverse_label(const std::string& label);

struct GroupElement {
  std::vector<int> word;  // indices into the GeneratorSet
  MatrixD matrix;

  int length() const { return static_cast<int>(word.size()); }
};

std::string format_word(const GeneratorSet& gens, std::span<const int> word);
std::vector<int> inverse_word(std::span<const int> word);

/// Inverse of format_word: greedy longest-label match; "e" is the identity
/// unless it is a label.
std::vector<int> parse_word(const GeneratorSet& gens, std::string_view text);

/// word = conjugator · core · conjugator^{-1} after free reduction, with the
/// core cyclically reduced.
struct CyclicSplit {
  std::vector<int> conjugator;
  std::vector<int> core;
};
CyclicSplit cyclic_split(std::span<const int> word);

/// Ordered product of generator matrices along the word.
MatrixD evaluate_word(const GeneratorSet& gens, std::span<const int> word);

struct BallOptions {
  /// Relative max-entry tolerance for merging equal group elements (after
  /// fixing the overall sign, since lifts live in PGL). Negative disables
  /// deduplication.
  double dedup_tol = 1e-8;
  std::size_t cap = 5'000'000;
};

/// All freely reduced words of length <= radius with their matrices, ordered
/// by (length, lexicographic word). Elements whose matrices agree are merged
/// onto the first (shortest, lexicographically smallest) word; only
/// surviving elements are extended to the next length.
std::vector<GroupElement> enumerate_ball(const GeneratorSet& gens, int radius,
                                         const BallOptions& options = {});

/// Number of freely reduced words of length <= radius on `num_generators`
/// free generators: 1 + sum_{n=1}^{R} 2k (2k-1)^{n-1}.
std::size_t free_ball_size(int num_generators, int radius);

/// True iff lambda_1 / lambda_d > 1 + tol.
bool is_infinite_order_proxy(const MatrixD& g, double tol);
inline bool is_infinite_order_proxy(const GroupElement& g, double tol) {
  return is_infinite_order_proxy(g.matrix, tol);
}

}  // namespace anosov
