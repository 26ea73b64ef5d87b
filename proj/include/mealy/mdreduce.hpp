#pragma once

#include <cstddef>
#include <vector>

#include "mealy/machine.hpp"

namespace mealy {

/// One productive step of md-reduction.
struct ReductionStep {
  enum class Side {
    primal,  ///< the machine itself was minimized
    dual,    ///< the dual was minimized (dualize, minimize, dualize back)
  };
  Side side;
  std::size_t states_before;
  std::size_t letters_before;
  std::size_t states_after;
  std::size_t letters_after;
};

struct ReductionTrace {
  std::vector<ReductionStep> steps;
  /// Reduced machine, in the orientation of the input.
  Machine result = trivial_machine();

  bool trivial() const noexcept {
    return result.num_states() == 1 && result.num_letters() == 1;
  }
};

enum class ReductionOrder { primal_first, dual_first };

/// Minimizes the machine or its dual until both are minimal.
ReductionTrace md_reduce(const Machine& m,
                         ReductionOrder order = ReductionOrder::primal_first);

/// md-reduction ends at the one-state one-letter machine.
bool is_md_trivial(const Machine& m);

/// Shortcut for two-state machines: at most two rounds of primal then dual
/// minimization. Throws PreconditionError unless |A| = 2.
ReductionTrace md_reduce_two_state(const Machine& m);

/// Minimizes the dual side and returns the result in the original
/// orientation.
Machine minimize_dual(const Machine& m);

}  // namespace mealy
