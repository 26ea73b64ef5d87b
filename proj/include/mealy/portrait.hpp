#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Permutation of an alphabet in image form: letter i maps to image[i].
class Perm {
 public:
  Perm() = default;
  /// Throws PreconditionError unless `image` is a bijection of 0..n-1.
  explicit Perm(std::vector<Letter> image);

  static Perm identity(std::size_t n);
  /// Transposition of the two letters of a two-letter alphabet.
  static Perm swap2() { return Perm(std::vector<Letter>{1, 0}); }

  std::size_t size() const noexcept { return image_.size(); }
  Letter operator()(Letter i) const noexcept { return image_[i]; }
  const std::vector<Letter>& image() const noexcept { return image_; }
  bool is_identity() const noexcept;

  /// Applies *this first, then `after`.
  Perm then(const Perm& after) const;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<Letter> image_;
};

/// "id" / "σ" on two letters, cycle notation otherwise.
std::string to_string(const Perm& p, const std::vector<std::string>& letter_names = {});

/// Depth-k labelling of the complete |Σ|-ary tree by permutations, stored in
/// level order: the vertex of the word s = s_1..s_l sits at
/// offset(l) + (s_1..s_l read in base |Σ|).
class Portrait {
 public:
  Portrait(std::size_t depth, std::size_t alphabet, std::vector<Perm> labels);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t alphabet() const noexcept { return alphabet_; }
  const std::vector<Perm>& labels() const noexcept { return labels_; }

  std::size_t level_offset(std::size_t level) const noexcept { return offsets_[level]; }
  std::size_t level_width(std::size_t level) const noexcept {
    return offsets_[level + 1] - offsets_[level];
  }
  const Perm& at(std::size_t level, std::size_t rank) const {
    return labels_[offsets_[level] + rank];
  }
  const Perm& root() const { return labels_.front(); }

  /// Number of labels of a portrait of the given shape.
  static std::size_t label_count(std::size_t depth, std::size_t alphabet);

  friend bool operator==(const Portrait& a, const Portrait& b) {
    return a.depth_ == b.depth_ && a.alphabet_ == b.alphabet_ && a.labels_ == b.labels_;
  }

 private:
  std::size_t depth_;
  std::size_t alphabet_;
  std::vector<Perm> labels_;
  std::vector<std::size_t> offsets_;
};

struct PortraitBudget {
  std::size_t max_labels = std::size_t{1} << 17;
};

/// k-portrait of the state word u: vertex s carries ρ restricted to Σ at the
/// section δ_s(u). Requires an invertible machine.
Portrait portrait_of(const Machine& m, std::span<const State> u, std::size_t k,
                     PortraitBudget budget = {});

/// Product in the portrait monoid: the portrait of "apply p, then q".
Portrait portrait_product(const Portrait& p, const Portrait& q);

Portrait identity_portrait(std::size_t k, std::size_t alphabet);

enum class Homogeneity { homogeneous, almost_homogeneous, neither };

struct HomogeneityReport {
  Homogeneity kind;
  /// Common label of each level, when that level is label-constant.
  std::vector<std::optional<Perm>> level_labels;
};

HomogeneityReport classify_homogeneity(const Portrait& p);

/// Depth k+1 portrait whose first k levels are the homogeneous `j` and whose
/// leaves below root child i are all labelled tau[i].
Portrait build_J_tau(const Portrait& j, const std::vector<Perm>& tau);

/// The unbounded portrait of a word, queried one vertex at a time.
class PortraitGenerator {
 public:
  PortraitGenerator(Machine m, StateWord u);

  /// Label of vertex s.
  Perm label_at(std::span<const Letter> s) const;
  /// k-portrait prefix.
  Portrait truncate(std::size_t k) const { return portrait_of(machine_, word_, k); }

 private:
  Machine machine_;
  StateWord word_;
};

/// Indented tree rendering, one vertex per line.
std::string portrait_tree(const Portrait& p, const std::vector<std::string>& letter_names);
/// Graphviz rendering.
std::string portrait_dot(const Portrait& p, const std::vector<std::string>& letter_names);

}  // namespace mealy
