#include <catch2/catch_amalgamated.hpp>

#include "mealy/connectivity.hpp"
#include "mealy/error.hpp"
#include "mealy/portrait.hpp"
#include "mealy/semigroup.hpp"
#include "support.hpp"

using namespace mealy;
using testing::fixture;

namespace {

const Perm id2 = Perm::identity(2);
const Perm sigma = Perm::swap2();

Perm random_perm(testing::Rng& rng, std::size_t n) {
  return Perm(testing::random_map(rng, n, true));
}

Portrait random_homogeneous(testing::Rng& rng, std::size_t depth, std::size_t a) {
  std::vector<Perm> labels;
  std::size_t width = 1;
  for (std::size_t l = 0; l < depth; ++l, width *= a)
    labels.insert(labels.end(), width, random_perm(rng, a));
  return Portrait(depth, a, std::move(labels));
}

Portrait random_portrait(testing::Rng& rng, std::size_t depth, std::size_t a) {
  std::vector<Perm> labels;
  for (std::size_t v = 0; v < Portrait::label_count(depth, a); ++v)
    labels.push_back(random_perm(rng, a));
  return Portrait(depth, a, std::move(labels));
}

/// Applies a portrait to a word, letter by letter, descending the tree.
LetterWord act(const Portrait& p, const LetterWord& s) {
  LetterWord out;
  std::size_t rank = 0;
  for (std::size_t l = 0; l < s.size(); ++l) {
    out.push_back(p.at(l, rank)(s[l]));
    rank = rank * p.alphabet() + s[l];
  }
  return out;
}

}  // namespace

TEST_CASE("portrait of state 1 of the six-state automaton") {
  const auto m = fixture("six");
  const StateWord one{*m.find_state("1")};
  const auto p = portrait_of(m, one, 3);
  CHECK(p.depth() == 3);
  CHECK(p.root() == sigma);
  CHECK(p.at(1, 0) == id2);
  CHECK(p.at(1, 1) == sigma);
  for (std::size_t r = 0; r < 4; ++r) CHECK(p.at(2, r) == sigma);

  const auto h = classify_homogeneity(p);
  CHECK(h.kind == Homogeneity::neither);
  CHECK(h.level_labels[0] == sigma);
  CHECK_FALSE(h.level_labels[1]);
  CHECK(h.level_labels[2] == sigma);
}

TEST_CASE("portraits of trivial actions") {
  const auto t = portrait_of(fixture("triv"), StateWord{0}, 2);
  CHECK(t.labels().size() == 2);
  CHECK(t == identity_portrait(2, 1));
  const auto z = portrait_of(fixture("aleshin"), StateWord{2}, 1);
  CHECK(z.root() == id2);
  CHECK(identity_portrait(1, 2).labels() == std::vector<Perm>{id2});
  CHECK(identity_portrait(3, 2).labels().size() == 7);
  CHECK(classify_homogeneity(identity_portrait(4, 3)).kind == Homogeneity::homogeneous);
  CHECK_THROWS_AS(portrait_of(testing::build("states: x; letters: a b; x a -> x a; x b -> x a"),
                              StateWord{0}, 2),
                  PreconditionError);
  CHECK_THROWS_AS(portrait_of(fixture("six"), StateWord{0}, 20), BudgetExceeded);
}

TEST_CASE("permutation rendering") {
  CHECK(to_string(id2) == "id");
  CHECK(to_string(sigma) == "σ");
  const Perm c(std::vector<Letter>{1, 2, 0});
  CHECK(to_string(c, {"a", "b", "c"}) == "(a b c)");
  CHECK(to_string(Perm::identity(3)) == "id");
  CHECK(c.then(c).then(c).is_identity());
  CHECK_THROWS_AS(Perm(std::vector<Letter>{0, 0}), PreconditionError);
}

TEST_CASE("portrait products") {
  const auto m = fixture("six");
  const StateWord one{0};
  const auto p = portrait_of(m, one, 2);
  CHECK(portrait_product(p, identity_portrait(2, 2)) == p);
  CHECK(portrait_product(identity_portrait(2, 2), p) == p);
  CHECK(portrait_product(p, p) == portrait_of(m, StateWord{0, 0}, 2));

  const Portrait all_sigma(3, 2, std::vector<Perm>(7, sigma));
  CHECK(portrait_product(all_sigma, all_sigma) == identity_portrait(3, 2));
  CHECK_THROWS_AS(portrait_product(p, identity_portrait(3, 2)), PreconditionError);
}

TEST_CASE("J tau construction") {
  const auto j = build_J_tau(identity_portrait(1, 2), {sigma, sigma});
  CHECK(j.depth() == 2);
  CHECK(j.root() == id2);
  CHECK(j.at(1, 0) == sigma);
  CHECK(j.at(1, 1) == sigma);
  const auto mixed = build_J_tau(identity_portrait(2, 2), {id2, sigma});
  CHECK(classify_homogeneity(mixed).kind == Homogeneity::almost_homogeneous);
  CHECK_THROWS_AS(build_J_tau(portrait_of(fixture("six"), StateWord{0}, 3), {id2, id2}),
                  PreconditionError);
}

TEST_CASE("square identities for two-letter portraits") {
  testing::Rng rng(testing::seed() + 40);
  std::uniform_int_distribution<std::size_t> depth(1, 6);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto k = depth(rng);
    const auto h = random_homogeneous(rng, k, 2);
    const auto g = random_homogeneous(rng, k, 2);
    REQUIRE(classify_homogeneity(h).kind == Homogeneity::homogeneous);
    REQUIRE(classify_homogeneity(portrait_product(h, g)).kind == Homogeneity::homogeneous);
    REQUIRE(portrait_product(h, h) == identity_portrait(k, 2));

    const auto tau = std::vector<Perm>{random_perm(rng, 2), random_perm(rng, 2)};
    const auto j = build_J_tau(h, tau);
    REQUIRE(classify_homogeneity(j).kind != Homogeneity::neither);
    const bool identity = portrait_product(j, j) == identity_portrait(k + 1, 2);
    if (j.root() == id2)
      REQUIRE(identity);
    else
      REQUIRE(identity == (tau[0] == tau[1]));
  }
}

TEST_CASE("products of homogeneous portraits over larger alphabets") {
  testing::Rng rng(testing::seed() + 41);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = 3 + trial % 2;
    const auto h = random_homogeneous(rng, 3, a);
    const auto g = random_homogeneous(rng, 3, a);
    REQUIRE(classify_homogeneity(portrait_product(h, g)).kind == Homogeneity::homogeneous);
  }
}

TEST_CASE("portraits compose like the words they come from") {
  testing::Rng rng(testing::seed() + 42);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = testing::random_sized(rng, 4, 3, testing::Shape::invertible);
    std::uniform_int_distribution<std::uint32_t> st(0, static_cast<std::uint32_t>(m.num_states() - 1));
    std::uniform_int_distribution<std::size_t> len(1, 3), depth(1, 4);
    StateWord u(len(rng)), v(len(rng));
    for (auto& x : u) x = st(rng);
    for (auto& x : v) x = st(rng);
    const auto k = depth(rng);
    StateWord uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    const auto pu = portrait_of(m, u, k);
    REQUIRE(portrait_product(pu, portrait_of(m, v, k)) == portrait_of(m, uv, k));
    for (std::size_t l = 1; l <= k; ++l)
      for (const auto& s : testing::words(m.num_letters(), l))
        REQUIRE(act(pu, s) == rho_apply(m, u, s));
    const PortraitGenerator gen(m, u);
    REQUIRE(gen.truncate(k) == pu);
    for (const auto& s : testing::words(m.num_letters(), k - 1))
      REQUIRE(gen.label_at(s) == pu.at(k - 1, [&] {
        std::size_t r = 0;
        for (auto c : s) r = r * m.num_letters() + c;
        return r;
      }()));
  }
}

TEST_CASE("random portraits: identity is neutral and products associate") {
  testing::Rng rng(testing::seed() + 43);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = random_portrait(rng, 3, 3);
    const auto q = random_portrait(rng, 3, 3);
    const auto r = random_portrait(rng, 3, 3);
    REQUIRE(portrait_product(identity_portrait(3, 3), p) == p);
    REQUIRE(portrait_product(portrait_product(p, q), r) ==
            portrait_product(p, portrait_product(q, r)));
    for (const auto& s : testing::words(3, 3))
      REQUIRE(act(portrait_product(p, q), s) == act(q, act(p, s)));
  }
}

TEST_CASE("portraits of the dual of a tensor-closed finite-degree machine are homogeneous") {
  std::size_t checked = 0;
  for (std::size_t k = 2; k <= 3; ++k)
    for (const auto& m : testing::two_state_census(k)) {
      if (!connection_degree(m, 16).finite) continue;
      const auto closure = tensor_closure(m).machine;
      const auto d = dual(closure);
      for (State s = 0; s < d.num_states(); ++s)
        for (std::size_t depth = 1; depth <= 4; ++depth)
          REQUIRE(classify_homogeneity(portrait_of(d, StateWord{s}, depth)).kind ==
                  Homogeneity::homogeneous);
      ++checked;
    }
  CHECK(checked > 0);
}

TEST_CASE("rendering") {
  const auto p = portrait_of(fixture("six"), StateWord{0}, 2);
  const auto tree = portrait_tree(p, {"i", "j"});
  CHECK(tree.find("σ") != std::string::npos);
  CHECK(std::count(tree.begin(), tree.end(), '\n') == 3);
  const auto dot = portrait_dot(p, {"i", "j"});
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("v0 -> v1 [label=\"i\"]") != std::string::npos);
  CHECK(dot.find("v0 -> v2 [label=\"j\"]") != std::string::npos);
}
