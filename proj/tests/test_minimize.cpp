#include <catch2/catch_amalgamated.hpp>

#include "mealy/minimize.hpp"
#include "support.hpp"

using namespace mealy;
using testing::fixture;

namespace {

/// Moore refinement until stable, straight from the definition.
std::vector<std::uint32_t> naive_nerode(const Machine& m) {
  const auto n = m.num_states(), k = m.num_letters();
  std::vector<std::uint32_t> cls(n);
  std::map<std::vector<Letter>, std::uint32_t> rows;
  for (State x = 0; x < n; ++x) {
    const auto r = m.rho_row(x);
    cls[x] = rows.emplace(std::vector<Letter>(r.begin(), r.end()), rows.size()).first->second;
  }
  std::size_t count = rows.size();
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> sig;
    std::vector<std::uint32_t> next(n);
    for (State x = 0; x < n; ++x) {
      std::vector<std::uint32_t> s{cls[x]};
      for (Letter i = 0; i < k; ++i) s.push_back(cls[m.delta(i, x)]);
      next[x] = sig.emplace(s, sig.size()).first->second;
    }
    cls = next;
    if (sig.size() == count) return canonical_partition(cls).block;
    count = sig.size();
  }
}

}  // namespace

TEST_CASE("canonical numbering of partitions") {
  const std::vector<std::uint32_t> labels{7, 3, 7, 9, 3};
  const auto p = canonical_partition(labels);
  CHECK(p.block == std::vector<std::uint32_t>{0, 1, 0, 2, 1});
  CHECK(p.num_blocks == 3);
}

TEST_CASE("k-classes of the Aleshin automaton") {
  const auto m = fixture("aleshin");
  const auto p0 = k_classes(m, 0);
  // x and y both swap; z is the identity
  CHECK(p0.block == std::vector<std::uint32_t>{0, 0, 1});
  CHECK(p0.depth == 0u);
  const auto p1 = k_classes(m, 1);
  CHECK(p1.all_singletons());
  CHECK(nerode_partition(m).all_singletons());
  CHECK(is_minimal(m));
  CHECK_FALSE(nerode_partition(m).depth);
}

TEST_CASE("k-classes stabilize at the Nerode partition") {
  testing::Rng rng(testing::seed());
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_sized(rng, 8, 3);
    const auto nerode = nerode_partition(m);
    const auto last = k_classes(m, m.num_states());
    CHECK(last.block == nerode.block);
    for (std::size_t k = 0; k + 1 < m.num_states(); ++k) {
      const auto a = k_classes(m, k), b = k_classes(m, k + 1);
      CHECK(a.num_blocks <= b.num_blocks);
      for (State x = 0; x < m.num_states(); ++x)
        for (State y = 0; y < m.num_states(); ++y)
          if (b.block[x] == b.block[y]) CHECK(a.block[x] == a.block[y]);
    }
  }
}

TEST_CASE("Hopcroft refinement matches Moore refinement") {
  testing::Rng rng(testing::seed() + 10);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto shape = static_cast<testing::Shape>(trial % 4);
    const auto m = testing::random_sized(rng, 12, 4, shape);
    REQUIRE(nerode_partition(m).block == naive_nerode(m));
  }
}

TEST_CASE("minimization yields a minimal equivalent machine") {
  testing::Rng rng(testing::seed() + 11);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = testing::random_sized(rng, 8, 3);
    const auto q = minimize(m);
    const auto p = nerode_partition(m);
    CHECK(q.num_states() == p.num_blocks);
    CHECK(is_minimal(q));
    CHECK(q.num_letters() == m.num_letters());
    for (State x = 0; x < m.num_states(); ++x)
      for (const auto& s : testing::words(m.num_letters(), 3)) {
        const StateWord u{x}, v{p.block[x]};
        REQUIRE(rho_apply(m, u, s) == rho_apply(q, v, s));
      }
  }
}

TEST_CASE("blocks are named after their smallest member") {
  const auto m = testing::build(
      "states: p q r; letters: a b\n"
      "p a -> q b; p b -> p a\n"
      "q a -> p b; q b -> q a\n"
      "r a -> r a; r b -> r b");
  const auto q = minimize(m);
  CHECK(q.state_names() == std::vector<std::string>{"p", "r"});
  CHECK(quotient(m, nerode_partition(m)) == q);
}

TEST_CASE("equivalence of state words") {
  const auto aleshin = fixture("aleshin");
  const StateWord x{0}, y{1};
  const auto v = words_equivalent(aleshin, x, y);
  CHECK_FALSE(v.equivalent);
  REQUIRE(v.separating.size() == 2);
  CHECK(rho_apply(aleshin, x, v.separating) != rho_apply(aleshin, y, v.separating));
  CHECK(rho_apply(aleshin, x, LetterWord{0}) == rho_apply(aleshin, y, LetterWord{0}));
  CHECK(rho_apply(aleshin, x, LetterWord{1}) == rho_apply(aleshin, y, LetterWord{1}));

  const auto swap = fixture("swap");
  const auto xy = words_equivalent(swap, StateWord{0, 1}, StateWord{1, 0});
  CHECK(xy.equivalent);
  CHECK(xy.block);
  CHECK(words_equivalent(swap, StateWord{0}, StateWord{1}).equivalent);

  const auto triv = fixture("triv");
  CHECK(words_equivalent(triv, StateWord{0}, StateWord{0, 0, 0}).equivalent);
}

TEST_CASE("separating words are shortest") {
  testing::Rng rng(testing::seed() + 12);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_sized(rng, 6, 3);
    const auto p = nerode_partition(m);
    for (State a = 0; a < m.num_states(); ++a)
      for (State b = 0; b < m.num_states(); ++b) {
        const auto w = separating_word(m, a, b);
        REQUIRE(w.has_value() == (p.block[a] != p.block[b]));
        if (!w) continue;
        const StateWord ua{a}, ub{b};
        REQUIRE(rho_apply(m, ua, *w) != rho_apply(m, ub, *w));
        for (std::size_t len = 1; len < w->size(); ++len)
          for (const auto& s : testing::words(m.num_letters(), len))
            REQUIRE(rho_apply(m, ua, s) == rho_apply(m, ub, s));
      }
  }
}

TEST_CASE("word equivalence agrees with the definition") {
  testing::Rng rng(testing::seed() + 13);
  for (int trial = 0; trial < 150; ++trial) {
    const auto m = testing::random_sized(rng, 2, 2);
    std::uniform_int_distribution<std::size_t> len(1, 2);
    std::uniform_int_distribution<std::uint32_t> st(0, static_cast<std::uint32_t>(m.num_states() - 1));
    StateWord u(len(rng)), v(len(rng));
    for (auto& c : u) c = st(rng);
    for (auto& c : v) c = st(rng);
    const auto r = words_equivalent(m, u, v);
    // the union of the two powers has at most 8 states
    const bool brute = testing::oracle_table(m, u, 8) == testing::oracle_table(m, v, 8);
    REQUIRE(r.equivalent == brute);
    if (!r.equivalent) REQUIRE(rho_apply(m, u, r.separating) != rho_apply(m, v, r.separating));
  }
}
