#include "mealy/mdreduce.hpp"

#include "mealy/error.hpp"
#include "mealy/minimize.hpp"

namespace mealy {

namespace {

// Attempts one minimization on `side`; records it when it shrinks anything.
bool try_step(Machine& current, ReductionStep::Side side,
              std::vector<ReductionStep>& steps) {
  const auto states = current.num_states();
  const auto letters = current.num_letters();
  Machine next = side == ReductionStep::Side::primal ? minimize(current)
                                                     : minimize_dual(current);
  if (next.num_states() == states && next.num_letters() == letters) return false;
  steps.push_back({side, states, letters, next.num_states(), next.num_letters()});
  current = std::move(next);
  return true;
}

}  // namespace

Machine minimize_dual(const Machine& m) { return dual(minimize(dual(m))); }

ReductionTrace md_reduce(const Machine& m, ReductionOrder order) {
  using Side = ReductionStep::Side;
  const Side first = order == ReductionOrder::primal_first ? Side::primal : Side::dual;
  const Side second = first == Side::primal ? Side::dual : Side::primal;
  ReductionTrace trace;
  Machine current = m;
  // Each productive step strictly decreases |A|·|Σ|.
  while (try_step(current, first, trace.steps) || try_step(current, second, trace.steps)) {
  }
  trace.result = std::move(current);
  return trace;
}

bool is_md_trivial(const Machine& m) { return md_reduce(m).trivial(); }

ReductionTrace md_reduce_two_state(const Machine& m) {
  if (m.num_states() != 2)
    throw PreconditionError("md_reduce_two_state: machine has " +
                            std::to_string(m.num_states()) + " states, expected 2");
  ReductionTrace trace;
  Machine current = m;
  // A productive primal step leaves one state, after which one dual step
  // finishes; otherwise the dual step may enable a single primal one.
  for (int round = 0; round < 2; ++round) {
    try_step(current, ReductionStep::Side::primal, trace.steps);
    try_step(current, ReductionStep::Side::dual, trace.steps);
  }
  trace.result = std::move(current);
  return trace;
}

}  // namespace mealy
