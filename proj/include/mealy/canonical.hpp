#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Renaming-invariant byte string of a machine.
struct CanonicalKey {
  std::string bytes;

  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;

  /// Lowercase hexadecimal rendering.
  std::string hex() const;
};

enum class Symmetry {
  states_only,        ///< renaming of states
  states_and_letters  ///< simultaneous renaming of states and letters
};

/// Unnamed tables, as produced by family enumeration.
struct TableView {
  std::size_t states;
  std::size_t letters;
  std::span<const State> delta;  ///< delta[i * states + x]
  std::span<const Letter> rho;   ///< rho[x * letters + i]
};

/// Renaming that brings a machine to canonical form.
struct CanonicalLabelling {
  std::vector<State> state_perm;    ///< old state -> new state
  std::vector<Letter> letter_perm;  ///< old letter -> new letter
  CanonicalKey key;
};

/// Letter orders are tried exhaustively; within a letter order, every weak
/// component that has a state reaching all of it is numbered by the best
/// breadth-first traversal, and components are sorted. Machines with a
/// component lacking such a state fall back to trying every state
/// permutation. Throws BudgetExceeded beyond 8 states (fallback) or 8 letters.
CanonicalLabelling canonical_labelling(const TableView& t,
                                       Symmetry symmetry = Symmetry::states_and_letters);

TableView view(const Machine& m);

/// Key of the table in its given labelling; a table is in canonical form
/// exactly when this equals its canonical key.
CanonicalKey identity_key(const TableView& t);

CanonicalKey canonical_form(const Machine& m,
                            Symmetry symmetry = Symmetry::states_and_letters);

/// The machine renamed into canonical order (names travel with their
/// states and letters).
Machine canonical_machine(const Machine& m,
                          Symmetry symmetry = Symmetry::states_and_letters);

bool isomorphic(const Machine& a, const Machine& b,
                Symmetry symmetry = Symmetry::states_and_letters);

}  // namespace mealy
