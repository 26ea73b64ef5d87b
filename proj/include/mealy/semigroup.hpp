#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mealy/error.hpp"
#include "mealy/machine.hpp"

namespace mealy {

struct SemigroupLimits {
  std::size_t max_elements = 10'000;
  std::size_t max_depth = 12;
};

/// The dual semigroup could not be shown finite within the limits.
class FinitenessUnknown : public BudgetExceeded {
 public:
  using BudgetExceeded::BudgetExceeded;
};

namespace detail {
class SignatureEngine;
}

enum class EnumerationStatus { finite, budget_exceeded };

struct SemigroupElement {
  /// Shortest word realizing the element (ties broken by generator order).
  StateWord witness;
  /// Structural hash of the action on Σ^d at the certified depth d.
  std::uint64_t signature = 0;
};

/// Elements of the semigroup generated by the states, found breadth-first.
///
/// Two words are identified when their actions on Σ^d agree. The depth d is
/// certified once that identification is stable under sections: for every
/// element e, generator x and letter i, the section of e·x at i is the
/// product of the section of e at i with the generator δ_{ρ_e(i)}(x). By
/// induction on word length, agreement on Σ^d then implies agreement on all
/// of Σ*, so the table is exact.
class SemigroupTable {
 public:
  EnumerationStatus status() const noexcept { return status_; }
  bool finite() const noexcept { return status_ == EnumerationStatus::finite; }
  std::size_t order() const noexcept { return elements_.size(); }
  std::size_t certified_depth() const noexcept { return depth_; }
  std::size_t num_generators() const noexcept { return generators_; }

  const std::vector<SemigroupElement>& elements() const noexcept { return elements_; }
  /// Element of witness(e)·x.
  std::uint32_t product(std::uint32_t e, State x) const {
    return right_mult_[e * generators_ + x];
  }
  /// Element of the one-letter word x.
  std::uint32_t generator(State x) const { return generator_[x]; }

  /// Element represented by a non-empty word; exact when finite().
  std::optional<std::uint32_t> element_of(std::span<const State> word) const;

  /// JSON: status, certified depth, elements (signature hash, witness).
  std::string to_json(const std::vector<std::string>& state_names) const;

 private:
  friend SemigroupTable enumerate_semigroup(const Machine&, SemigroupLimits);

  EnumerationStatus status_ = EnumerationStatus::budget_exceeded;
  std::size_t depth_ = 0;
  std::size_t generators_ = 0;
  std::vector<SemigroupElement> elements_;
  std::vector<std::uint32_t> right_mult_;
  std::vector<std::uint32_t> generator_;
  std::unordered_map<std::uint32_t, std::uint32_t> by_id_;
  std::shared_ptr<detail::SignatureEngine> engine_;
};

SemigroupTable enumerate_semigroup(const Machine& m, SemigroupLimits limits = {});

/// Either the exact order or a lower bound.
struct SemigroupOrder {
  bool finite = false;
  std::size_t value = 0;
  friend bool operator==(const SemigroupOrder&, const SemigroupOrder&) = default;
};

std::string to_string(const SemigroupOrder& o);

SemigroupOrder semigroup_order(const Machine& m, SemigroupLimits limits = {});

/// Letters of a tensor closure: the elements of the dual semigroup.
struct ClosureAlphabet {
  /// Witness letter word of each new letter, in discovery order.
  std::vector<LetterWord> letters;
  /// Enumeration of the dual semigroup backing the class map.
  SemigroupTable dual_table;

  /// New letter of a non-empty letter word.
  std::uint32_t class_of(std::span<const Letter> s) const;
};

struct TensorClosure {
  Machine machine;
  ClosureAlphabet alphabet;
};

/// Re-alphabetizes the machine over its dual semigroup. Throws
/// FinitenessUnknown when the dual semigroup is not shown finite.
TensorClosure tensor_closure(const Machine& m, SemigroupLimits limits = {});

bool is_tensor_closed(const Machine& m, SemigroupLimits limits = {});

struct CompletenessReport {
  std::size_t exponent = 0;
  /// A state word of a component together with a member it has no edge to.
  std::optional<std::pair<StateWord, StateWord>> missing;
  bool ok() const noexcept { return !missing.has_value(); }
};

/// Checks that every component of the given power is a complete graph
/// (self-loops included). Requires a two-state, invertible, reversible,
/// tensor-closed machine.
CompletenessReport verify_complete_components(const Machine& m, std::size_t exponent,
                                              SemigroupLimits limits = {});

}  // namespace mealy
