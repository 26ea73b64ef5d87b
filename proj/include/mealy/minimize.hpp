#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Partition of a stateset. Blocks are numbered 0..num_blocks-1 in order of
/// their smallest member.
struct Partition {
  std::vector<std::uint32_t> block;
  std::uint32_t num_blocks = 0;
  /// Refinement depth k for a k-class partition; empty for the Nerode
  /// fixed point.
  std::optional<std::size_t> depth;

  bool all_singletons() const noexcept { return num_blocks == block.size(); }
  friend bool operator==(const Partition&, const Partition&) = default;
};

/// Renumbers arbitrary block labels canonically (by smallest member).
Partition canonical_partition(std::span<const std::uint32_t> labels);

/// x ≡_0 y iff equal output rows; ≡_{k+1} additionally requires every
/// successor pair to be ≡_k.
Partition k_classes(const Machine& m, std::size_t k);

/// Nerode equivalence, by Hopcroft-style worklist refinement seeded with the
/// output-row partition.
Partition nerode_partition(const Machine& m);

bool is_minimal(const Machine& m);

/// Quotient by the Nerode equivalence. Each block is named after its
/// smallest member. Throws InternalError if a block is not a congruence.
Machine minimize(const Machine& m);

/// Quotient of `m` by an arbitrary congruence `p`.
Machine quotient(const Machine& m, const Partition& p);

struct EquivalenceVerdict {
  bool equivalent = false;
  /// Shared block of the minimized disjoint union, when equivalent.
  std::optional<std::uint32_t> block;
  /// Shortest input word on which the two productions differ, otherwise.
  LetterWord separating;
};

/// Exact test of ρ_u = ρ_v for non-empty state words of any lengths.
EquivalenceVerdict words_equivalent(const Machine& m, std::span<const State> u,
                                    std::span<const State> v,
                                    PowerBudget budget = {});

/// Breadth-first search for a shortest input word separating states p and q
/// of `m`; empty when they are equivalent.
std::optional<LetterWord> separating_word(const Machine& m, State p, State q);

}  // namespace mealy
