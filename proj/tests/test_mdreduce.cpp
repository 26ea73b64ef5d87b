#include <catch2/catch_amalgamated.hpp>

#include "mealy/canonical.hpp"
#include "mealy/error.hpp"
#include "mealy/mdreduce.hpp"
#include "mealy/minimize.hpp"
#include "support.hpp"

using namespace mealy;
using testing::fixture;

TEST_CASE("md-reduction of the fixtures") {
  CHECK(is_md_trivial(fixture("triv")));
  CHECK(is_md_trivial(fixture("swap")));
  CHECK_FALSE(is_md_trivial(fixture("aleshin")));
  CHECK_FALSE(is_md_trivial(fixture("dual_aleshin")));
  CHECK_FALSE(is_md_trivial(fixture("six")));

  const auto swap = md_reduce(fixture("swap"));
  CHECK(swap.trivial());
  REQUIRE(swap.steps.size() == 2);
  CHECK(swap.steps[0].side == ReductionStep::Side::primal);
  CHECK(swap.steps[0].states_after == 1);
  CHECK(swap.steps[1].side == ReductionStep::Side::dual);
  CHECK(swap.steps[1].letters_after == 1);

  const auto aleshin = md_reduce(fixture("aleshin"));
  CHECK(aleshin.steps.empty());
  CHECK(aleshin.result == fixture("aleshin"));
}

TEST_CASE("dual minimization") {
  const auto swap = fixture("swap");
  const auto d = minimize_dual(swap);
  CHECK(d.num_letters() == 1);
  CHECK(d.num_states() == 2);
  CHECK(minimize_dual(fixture("aleshin")) == fixture("aleshin"));
}

TEST_CASE("md-reduction is confluent") {
  testing::Rng rng(testing::seed() + 20);
  for (int trial = 0; trial < 500; ++trial) {
    const auto m = testing::random_sized(rng, 5, 4, static_cast<testing::Shape>(trial % 4));
    const auto a = md_reduce(m, ReductionOrder::primal_first);
    const auto b = md_reduce(m, ReductionOrder::dual_first);
    REQUIRE(a.result.num_states() == b.result.num_states());
    REQUIRE(a.result.num_letters() == b.result.num_letters());
    REQUIRE(isomorphic(a.result, b.result));
    REQUIRE(is_minimal(a.result));
    REQUIRE(is_minimal(dual(a.result)));
    CHECK(a.trivial() == is_md_trivial(m));
  }
}

TEST_CASE("each reduction step strictly shrinks one side") {
  testing::Rng rng(testing::seed() + 21);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = testing::random_sized(rng, 5, 4);
    const auto t = md_reduce(m);
    std::size_t n = m.num_states(), k = m.num_letters();
    for (const auto& step : t.steps) {
      REQUIRE(step.states_before == n);
      REQUIRE(step.letters_before == k);
      if (step.side == ReductionStep::Side::primal) {
        REQUIRE(step.states_after < n);
        REQUIRE(step.letters_after == k);
      } else {
        REQUIRE(step.letters_after < k);
        REQUIRE(step.states_after == n);
      }
      n = step.states_after;
      k = step.letters_after;
    }
    REQUIRE(t.result.num_states() == n);
    REQUIRE(t.result.num_letters() == k);
    if (t.steps.size() > 1)
      for (std::size_t s = 1; s < t.steps.size(); ++s)
        REQUIRE(t.steps[s].side != t.steps[s - 1].side);
  }
}

TEST_CASE("md-triviality is invariant under dualization and renaming") {
  testing::Rng rng(testing::seed() + 22);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = testing::random_sized(rng, 5, 4);
    CHECK(is_md_trivial(m) == is_md_trivial(dual(m)));
    auto sp = testing::random_map(rng, m.num_states(), true);
    auto lp = testing::random_map(rng, m.num_letters(), true);
    CHECK(is_md_trivial(m) == is_md_trivial(rename(m, sp, lp)));
  }
}

TEST_CASE("two-state shortcut agrees with full md-reduction") {
  testing::Rng rng(testing::seed() + 23);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<std::size_t> k(1, 5);
    const auto m = testing::random_machine(rng, 2, k(rng), static_cast<testing::Shape>(trial % 4));
    const auto fast = md_reduce_two_state(m);
    const auto full = md_reduce(m);
    REQUIRE(fast.trivial() == full.trivial());
    REQUIRE(isomorphic(fast.result, full.result));
  }
  for (const auto& m : testing::two_state_census(3))
    REQUIRE(md_reduce_two_state(m).trivial() == is_md_trivial(m));
  CHECK_THROWS_AS(md_reduce_two_state(fixture("aleshin")), PreconditionError);
}
