#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mealy/io.hpp"
#include "mealy/machine.hpp"

namespace testing {

using mealy::Letter;
using mealy::Machine;
using mealy::MachineTables;
using mealy::State;

inline Machine fixture(const std::string& name) {
  return mealy::load_document(std::string(MEALY_FIXTURES_DIR) + "/" + name + ".mealy").machine;
}

inline std::uint64_t seed() {
  if (const char* s = std::getenv("MEALY_TEST_SEED")) return std::strtoull(s, nullptr, 0);
  return 0x5eed1234;
}

using Rng = std::mt19937_64;

enum class Shape { any, invertible, reversible, invertible_reversible };

inline std::vector<std::uint32_t> random_map(Rng& rng, std::size_t n, bool bijective) {
  std::vector<std::uint32_t> f(n);
  if (bijective) {
    for (std::uint32_t i = 0; i < n; ++i) f[i] = i;
    std::shuffle(f.begin(), f.end(), rng);
  } else {
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (auto& v : f) v = pick(rng);
  }
  return f;
}

inline std::vector<std::string> names(std::size_t n, char first) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, first) + std::to_string(i));
  return out;
}

inline Machine random_machine(Rng& rng, std::size_t n, std::size_t k, Shape shape = Shape::any) {
  const bool rev = shape == Shape::reversible || shape == Shape::invertible_reversible;
  const bool inv = shape == Shape::invertible || shape == Shape::invertible_reversible;
  MachineTables t{names(n, 'q'), names(k, 'l'), {}, {}};
  for (std::size_t i = 0; i < k; ++i) {
    const auto col = random_map(rng, n, rev);
    t.delta.insert(t.delta.end(), col.begin(), col.end());
  }
  for (std::size_t x = 0; x < n; ++x) {
    const auto row = random_map(rng, k, inv);
    t.rho.insert(t.rho.end(), row.begin(), row.end());
  }
  return Machine(std::move(t));
}

inline Machine random_sized(Rng& rng, std::size_t max_n, std::size_t max_k,
                            Shape shape = Shape::any) {
  std::uniform_int_distribution<std::size_t> n(1, max_n), k(1, max_k);
  const auto a = n(rng);
  const auto b = k(rng);
  return random_machine(rng, a, b, shape);
}

/// Builds a machine from "x a -> y b" lines.
inline Machine build(const std::string& text) { return mealy::parse_machine(text); }

/// All words of a given length over {0..base-1}, lexicographic.
inline std::vector<std::vector<std::uint32_t>> words(std::size_t base, std::size_t len) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> w(len, 0);
  while (true) {
    out.push_back(w);
    std::size_t p = len;
    while (p > 0 && w[p - 1] + 1 == base) w[--p] = 0;
    if (p == 0) break;
    ++w[p - 1];
  }
  return out;
}

/// ρ_x(i·s) = ρ_x(i)·ρ_{δ_i(x)}(s), applied state by state, first state first.
inline std::vector<std::uint32_t> oracle_rho(const Machine& m, const std::vector<std::uint32_t>& u,
                                             std::vector<std::uint32_t> s) {
  for (auto x : u) {
    std::vector<std::uint32_t> out;
    State cur = x;
    for (auto i : s) {
      out.push_back(m.tables().rho[cur * m.num_letters() + i]);
      cur = m.tables().delta[i * m.num_states() + cur];
    }
    s = std::move(out);
  }
  return s;
}

/// Full output table of a state word on every input of length `depth`.
inline std::vector<std::uint32_t> oracle_table(const Machine& m, const std::vector<std::uint32_t>& u,
                                               std::size_t depth) {
  std::vector<std::uint32_t> out;
  for (const auto& s : words(m.num_letters(), depth)) {
    const auto r = oracle_rho(m, u, s);
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

/// Weak components of the e-th power by explicit word traversal; returns the
/// sorted component sizes.
inline std::vector<std::size_t> oracle_power_sizes(const Machine& m, std::size_t e) {
  const auto ws = words(m.num_states(), e);
  std::map<std::vector<std::uint32_t>, std::size_t> id;
  for (const auto& w : ws) id.emplace(w, id.size());
  std::vector<std::size_t> parent(ws.size());
  for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const auto& w : ws)
    for (Letter i0 = 0; i0 < m.num_letters(); ++i0) {
      std::vector<std::uint32_t> next;
      Letter i = i0;
      for (auto x : w) {
        next.push_back(m.tables().delta[i * m.num_states() + x]);
        i = m.tables().rho[x * m.num_letters() + i];
      }
      const auto a = find(id[w]), b = find(id[next]);
      if (a != b) parent[a] = b;
    }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t i = 0; i < ws.size(); ++i) ++sizes[find(i)];
  std::vector<std::size_t> out;
  for (auto& [r, c] : sizes) out.push_back(c);
  std::sort(out.begin(), out.end());
  return out;
}

/// Connection degree by explicit traversal, capped at `max`; returns max+1
/// when every power up to max is connected.
inline std::size_t oracle_degree(const Machine& m, std::size_t max) {
  for (std::size_t e = 1; e <= max; ++e)
    if (oracle_power_sizes(m, e).size() > 1) return e - 1;
  return max + 1;
}

/// Number of distinct actions on Σ^depth among all non-empty state words,
/// found by closing the set of action tables under right multiplication by
/// the generators. A lower bound on the semigroup order that is exact for
/// large enough depth. Returns 0 above `cap` elements.
inline std::size_t oracle_order(const Machine& m, std::size_t depth, std::size_t cap = 5000) {
  std::set<std::vector<std::uint32_t>> seen;
  std::vector<std::vector<std::uint32_t>> frontier;
  for (State x = 0; x < m.num_states(); ++x) {
    const std::vector<std::uint32_t> w{x};
    if (seen.insert(oracle_table(m, w, depth)).second) frontier.push_back(w);
  }
  while (!frontier.empty()) {
    std::vector<std::vector<std::uint32_t>> next;
    for (const auto& w : frontier)
      for (State x = 0; x < m.num_states(); ++x) {
        auto v = w;
        v.push_back(x);
        if (seen.insert(oracle_table(m, v, depth)).second) {
          next.push_back(v);
          if (seen.size() > cap) return 0;
        }
      }
    frontier = std::move(next);
  }
  return seen.size();
}

/// Isomorphism by trying every pair of state and letter permutations.
inline bool oracle_isomorphic(const Machine& a, const Machine& b) {
  const auto n = a.num_states(), k = a.num_letters();
  if (n != b.num_states() || k != b.num_letters()) return false;
  std::vector<std::uint32_t> sp(n), lp(k);
  for (std::uint32_t i = 0; i < n; ++i) sp[i] = i;
  do {
    for (std::uint32_t i = 0; i < k; ++i) lp[i] = i;
    do {
      bool ok = true;
      for (State x = 0; x < n && ok; ++x)
        for (Letter i = 0; i < k && ok; ++i)
          ok = sp[a.delta(i, x)] == b.delta(lp[i], sp[x]) && lp[a.rho(x, i)] == b.rho(sp[x], lp[i]);
      if (ok) return true;
    } while (std::next_permutation(lp.begin(), lp.end()));
  } while (std::next_permutation(sp.begin(), sp.end()));
  return false;
}

/// All two-state invertible-reversible machines over k letters, in a fixed
/// order: δ choices (identity or swap per letter), then ρ rows.
inline std::vector<Machine> two_state_census(std::size_t k) {
  std::vector<std::vector<std::uint32_t>> perms;
  std::vector<std::uint32_t> p(k);
  for (std::uint32_t i = 0; i < k; ++i) p[i] = i;
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  std::vector<Machine> out;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask)
    for (const auto& r0 : perms)
      for (const auto& r1 : perms) {
        MachineTables t{{"x", "y"}, {}, {}, {}};
        for (std::size_t i = 0; i < k; ++i) {
          t.letters.push_back(std::string(1, static_cast<char>('a' + i)));
          const bool swap = (mask >> i) & 1u;
          t.delta.push_back(swap ? 1 : 0);
          t.delta.push_back(swap ? 0 : 1);
        }
        t.rho.insert(t.rho.end(), r0.begin(), r0.end());
        t.rho.insert(t.rho.end(), r1.begin(), r1.end());
        out.emplace_back(std::move(t));
      }
  return out;
}

}  // namespace testing
