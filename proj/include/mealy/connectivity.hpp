#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// Weak connected components of a power of a machine.
struct ComponentReport {
  std::size_t exponent = 1;
  /// Component of each packed state word (power states in lexicographic
  /// order), numbered by smallest member.
  std::vector<std::uint32_t> component;
  /// Sizes, indexed by component number.
  std::vector<std::uint64_t> sizes;
  /// Smallest state word of each component.
  std::vector<StateWord> representatives;

  std::size_t num_components() const noexcept { return sizes.size(); }
  bool connected() const noexcept { return sizes.size() == 1; }
};

struct TraversalBudget {
  /// Largest power (number of state words) that may be traversed.
  std::uint64_t max_words = std::uint64_t{1} << 24;
};

/// Components of the machine's own transition graph.
ComponentReport components(const Machine& m);

/// Components of the m-th power, traversed on packed state words without
/// materializing the power. Throws BudgetExceeded above the budget.
ComponentReport power_components(const Machine& m, std::size_t exponent,
                                 TraversalBudget budget = {});

/// Either an exact connection degree or a lower bound.
struct ConnectionDegree {
  bool finite = false;
  /// The degree when finite, otherwise the largest exponent shown connected.
  std::size_t value = 0;

  static ConnectionDegree exactly(std::size_t n) { return {true, n}; }
  static ConnectionDegree at_least(std::size_t n) { return {false, n}; }
  friend bool operator==(const ConnectionDegree&, const ConnectionDegree&) = default;
};

std::string to_string(const ConnectionDegree& d);

/// Scans exponents 1..max_power upward. The first disconnected power k gives
/// the degree k-1; if every tested power is connected, the result is
/// at_least(max_power).
ConnectionDegree connection_degree(const Machine& m, std::size_t max_power = 16,
                                   TraversalBudget budget = {});

struct GrowthReport {
  std::size_t degree = 0;
  std::size_t exponent = 0;
  /// Observed component sizes of the power (as a sorted multiset).
  std::vector<std::uint64_t> sizes;
  /// Representatives of components whose size is not 2^degree.
  std::vector<StateWord> offending;

  bool ok() const noexcept { return offending.empty(); }
};

/// Checks that every component of the given power has size exactly 2^n for a
/// reversible two-state machine of finite connection degree n <= exponent.
/// Throws PreconditionError otherwise.
GrowthReport verify_component_growth(const Machine& m, std::size_t exponent,
                                     TraversalBudget budget = {});

}  // namespace mealy
