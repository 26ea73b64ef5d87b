#include "mealy/canonical.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

#include "mealy/error.hpp"

namespace mealy {

std::string CanonicalKey::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

TableView view(const Machine& m) {
  return {m.num_states(), m.num_letters(), m.tables().delta, m.tables().rho};
}

namespace {

using Code = std::vector<std::uint32_t>;

struct Renaming {
  std::vector<State> old_state;   // new -> old
  std::vector<State> new_state;   // old -> new
  std::vector<Letter> old_letter;
  std::vector<Letter> new_letter;
};

void append_rows(const TableView& t, std::span<const State> old_states,
                 std::span<const std::uint32_t> new_state, const Renaming& letters,
                 Code& out) {
  for (State x : old_states) {
    for (Letter j = 0; j < t.letters; ++j) {
      const Letter i = letters.old_letter[j];
      out.push_back(new_state[t.delta[i * t.states + x]]);
      out.push_back(letters.new_letter[t.rho[x * t.letters + i]]);
    }
  }
}

std::vector<std::vector<State>> weak_components(const TableView& t) {
  std::vector<State> parent(t.states);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](State x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (Letter i = 0; i < t.letters; ++i)
    for (State x = 0; x < t.states; ++x) {
      auto a = find(x), b = find(t.delta[i * t.states + x]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  std::vector<std::vector<State>> comps;
  std::vector<std::int64_t> number(t.states, -1);
  for (State x = 0; x < t.states; ++x) {
    const auto r = find(x);
    if (number[r] < 0) {
      number[r] = static_cast<std::int64_t>(comps.size());
      comps.emplace_back();
    }
    comps[number[r]].push_back(x);
  }
  return comps;
}

// Forward breadth-first order from `start`, letters visited in `letters` order.
std::vector<State> bfs_order(const TableView& t, State start, const Renaming& letters,
                             std::vector<std::uint32_t>& local) {
  std::vector<State> order{start};
  local[start] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    const State x = order[head];
    for (Letter j = 0; j < t.letters; ++j) {
      const State y = t.delta[letters.old_letter[j] * t.states + x];
      if (local[y] == UINT32_MAX) {
        local[y] = static_cast<std::uint32_t>(order.size());
        order.push_back(y);
      }
    }
  }
  return order;
}

struct ComponentCode {
  Code code;
  std::vector<State> order;
  friend bool operator<(const ComponentCode& a, const ComponentCode& b) {
    if (a.order.size() != b.order.size()) return a.order.size() < b.order.size();
    return a.code < b.code;
  }
};

CanonicalKey to_key(const TableView& t, const Code& code) {
  CanonicalKey key;
  const bool narrow = t.states <= 255 && t.letters <= 255;
  auto put32 = [&](std::uint32_t v) {
    for (int b = 0; b < 4; ++b) key.bytes += static_cast<char>((v >> (8 * b)) & 0xff);
  };
  put32(static_cast<std::uint32_t>(t.states));
  put32(static_cast<std::uint32_t>(t.letters));
  for (auto v : code) {
    if (narrow) {
      key.bytes += static_cast<char>(v);
    } else {
      put32(v);
    }
  }
  return key;
}

}  // namespace

CanonicalLabelling canonical_labelling(const TableView& t, Symmetry symmetry) {
  const auto n = t.states;
  const auto k = t.letters;
  if (k > 8 && symmetry == Symmetry::states_and_letters)
    throw BudgetExceeded("canonical_form: more than 8 letters", k);

  const auto comps = weak_components(t);
  // Starting states that reach their whole component.
  std::vector<std::vector<State>> roots(comps.size());
  bool rooted = true;
  {
    Renaming identity_letters;
    identity_letters.old_letter.resize(k);
    std::iota(identity_letters.old_letter.begin(), identity_letters.old_letter.end(), 0);
    std::vector<std::uint32_t> local(n, UINT32_MAX);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (State s : comps[c]) {
        const auto order = bfs_order(t, s, identity_letters, local);
        if (order.size() == comps[c].size()) roots[c].push_back(s);
        for (State x : order) local[x] = UINT32_MAX;
      }
      if (roots[c].empty()) rooted = false;
    }
  }
  if (!rooted && n > 8) throw BudgetExceeded("canonical_form: more than 8 states", n);

  Renaming letters;
  letters.old_letter.resize(k);
  letters.new_letter.resize(k);
  std::iota(letters.old_letter.begin(), letters.old_letter.end(), 0);

  Code best;
  CanonicalLabelling result;
  std::vector<std::uint32_t> local(n, UINT32_MAX);
  do {
    for (Letter j = 0; j < k; ++j) letters.new_letter[letters.old_letter[j]] = j;
    Code code;
    std::vector<State> old_state;
    std::vector<std::uint32_t> new_state(n);
    if (rooted) {
      std::vector<ComponentCode> chosen;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        ComponentCode best_c;
        bool have = false;
        for (State s : roots[c]) {
          ComponentCode cand;
          cand.order = bfs_order(t, s, letters, local);
          append_rows(t, cand.order, local, letters, cand.code);
          for (State x : cand.order) local[x] = UINT32_MAX;
          if (!have || cand.code < best_c.code) {
            best_c = std::move(cand);
            have = true;
          }
        }
        chosen.push_back(std::move(best_c));
      }
      std::sort(chosen.begin(), chosen.end());
      for (const auto& c : chosen) old_state.insert(old_state.end(), c.order.begin(), c.order.end());
      for (State s = 0; s < n; ++s) new_state[old_state[s]] = s;
      append_rows(t, old_state, new_state, letters, code);
    } else {
      std::vector<State> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      Code cand;
      do {
        for (State s = 0; s < n; ++s) new_state[perm[s]] = s;
        cand.clear();
        append_rows(t, perm, new_state, letters, cand);
        if (old_state.empty() || cand < code) {
          code = cand;
          old_state = perm;
        }
      } while (std::next_permutation(perm.begin(), perm.end()));
      for (State s = 0; s < n; ++s) new_state[old_state[s]] = s;
    }
    if (best.empty() || code < best) {
      best = std::move(code);
      result.state_perm.assign(new_state.begin(), new_state.end());
      result.letter_perm = letters.new_letter;
    }
  } while (symmetry == Symmetry::states_and_letters &&
           std::next_permutation(letters.old_letter.begin(), letters.old_letter.end()));
  result.key = to_key(t, best);
  return result;
}

CanonicalKey identity_key(const TableView& t) {
  Code code;
  code.reserve(2 * t.states * t.letters);
  for (State x = 0; x < t.states; ++x)
    for (Letter i = 0; i < t.letters; ++i) {
      code.push_back(t.delta[i * t.states + x]);
      code.push_back(t.rho[x * t.letters + i]);
    }
  return to_key(t, code);
}

CanonicalKey canonical_form(const Machine& m, Symmetry symmetry) {
  return canonical_labelling(view(m), symmetry).key;
}

Machine canonical_machine(const Machine& m, Symmetry symmetry) {
  const auto l = canonical_labelling(view(m), symmetry);
  return rename(m, l.state_perm, l.letter_perm);
}

bool isomorphic(const Machine& a, const Machine& b, Symmetry symmetry) {
  if (a.num_states() != b.num_states() || a.num_letters() != b.num_letters()) return false;
  return canonical_form(a, symmetry) == canonical_form(b, symmetry);
}

}  // namespace mealy
