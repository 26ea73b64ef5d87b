#include "mealy/machine.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <unordered_set>

#include "mealy/error.hpp"

namespace mealy {

namespace {

std::optional<std::string> first_duplicate(const std::vector<std::string>& names) {
  std::unordered_set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) return n;
  }
  return std::nullopt;
}

bool is_permutation_map(std::span<const std::uint32_t> map) {
  std::vector<bool> hit(map.size(), false);
  for (auto v : map) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

}  // namespace

std::optional<ValidationIssue> validate(const MachineTables& t) {
  using Kind = ValidationIssue::Kind;
  const std::size_t n = t.states.size();
  const std::size_t m = t.letters.size();
  if (n == 0) return ValidationIssue{Kind::no_states, "machine has no states"};
  if (m == 0) return ValidationIssue{Kind::no_letters, "machine has no letters"};
  if (auto d = first_duplicate(t.states))
    return ValidationIssue{Kind::duplicate_state, "duplicate state '" + *d + "'"};
  if (auto d = first_duplicate(t.letters))
    return ValidationIssue{Kind::duplicate_letter, "duplicate letter '" + *d + "'"};
  if (t.delta.size() != n * m)
    return ValidationIssue{Kind::delta_size,
                           "delta has " + std::to_string(t.delta.size()) +
                               " entries, expected " + std::to_string(n * m)};
  if (t.rho.size() != n * m)
    return ValidationIssue{Kind::rho_size,
                           "rho has " + std::to_string(t.rho.size()) +
                               " entries, expected " + std::to_string(n * m)};
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t x = 0; x < n; ++x) {
      if (t.delta[i * n + x] >= n)
        return ValidationIssue{
            Kind::delta_out_of_range,
            "delta(letter " + t.letters[i] + ", state " + t.states[x] +
                ") = " + std::to_string(t.delta[i * n + x]) +
                " is out of range (" + std::to_string(n) + " states)"};
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t i = 0; i < m; ++i) {
      if (t.rho[x * m + i] >= m)
        return ValidationIssue{
            Kind::rho_out_of_range,
            "rho(state " + t.states[x] + ", letter " + t.letters[i] +
                ") = " + std::to_string(t.rho[x * m + i]) +
                " is out of range (" + std::to_string(m) + " letters)"};
    }
  }
  return std::nullopt;
}

Machine::Machine(MachineTables tables) {
  if (auto issue = validate(tables)) throw InvalidMachine(issue->message);
  data_ = std::make_shared<const MachineTables>(std::move(tables));
}

Machine::Machine(MachineTables tables, TrustedTag)
    : data_(std::make_shared<const MachineTables>(std::move(tables))) {}

Machine Machine::trusted(MachineTables tables) {
  return Machine(std::move(tables), TrustedTag{});
}

std::optional<State> Machine::find_state(const std::string& name) const {
  auto it = std::find(data_->states.begin(), data_->states.end(), name);
  if (it == data_->states.end()) return std::nullopt;
  return static_cast<State>(it - data_->states.begin());
}

std::optional<Letter> Machine::find_letter(const std::string& name) const {
  auto it = std::find(data_->letters.begin(), data_->letters.end(), name);
  if (it == data_->letters.end()) return std::nullopt;
  return static_cast<Letter>(it - data_->letters.begin());
}

Machine trivial_machine() {
  return Machine::trusted({{"x"}, {"a"}, {0}, {0}});
}

bool is_invertible(const Machine& m) {
  for (State x = 0; x < m.num_states(); ++x) {
    if (!is_permutation_map(m.rho_row(x))) return false;
  }
  return true;
}

bool is_reversible(const Machine& m) {
  for (Letter i = 0; i < m.num_letters(); ++i) {
    if (!is_permutation_map(m.delta_column(i))) return false;
  }
  return true;
}

bool is_bireversible(const Machine& m) {
  return is_invertible(m) && is_reversible(m) && is_reversible(inverse(m));
}

Machine inverse(const Machine& m) {
  if (!is_invertible(m)) throw PreconditionError("inverse: machine is not invertible");
  const auto n = m.num_states();
  const auto k = m.num_letters();
  MachineTables t{m.state_names(), m.letter_names(), std::vector<State>(n * k),
                  std::vector<Letter>(n * k)};
  for (State x = 0; x < n; ++x) {
    for (Letter i = 0; i < k; ++i) {
      const Letter o = m.rho(x, i);
      t.delta[o * n + x] = m.delta(i, x);
      t.rho[x * k + o] = i;
    }
  }
  return Machine::trusted(std::move(t));
}

Machine dual(const Machine& m) {
  const auto n = m.num_states();
  const auto k = m.num_letters();
  // New stateset = letters (k), new alphabet = states (n).
  MachineTables t{m.letter_names(), m.state_names(), std::vector<State>(n * k),
                  std::vector<Letter>(n * k)};
  for (State x = 0; x < n; ++x) {
    for (Letter i = 0; i < k; ++i) {
      t.delta[x * k + i] = m.rho(x, i);
      t.rho[i * n + x] = m.delta(i, x);
    }
  }
  return Machine::trusted(std::move(t));
}

Machine disjoint_union(const Machine& a, const Machine& b) {
  if (a.letter_names() != b.letter_names())
    throw PreconditionError("disjoint_union: alphabets differ");
  const auto na = a.num_states();
  const auto nb = b.num_states();
  const auto n = na + nb;
  const auto k = a.num_letters();
  MachineTables t;
  t.letters = a.letter_names();
  t.states.reserve(n);
  std::unordered_set<std::string> used(a.state_names().begin(), a.state_names().end());
  for (const auto& s : a.state_names()) t.states.push_back(s);
  for (const auto& s : b.state_names()) {
    std::string name = s;
    while (!used.insert(name).second) name += "'";
    t.states.push_back(std::move(name));
  }
  t.delta.resize(n * k);
  t.rho.resize(n * k);
  for (Letter i = 0; i < k; ++i) {
    for (State x = 0; x < na; ++x) t.delta[i * n + x] = a.delta(i, x);
    for (State x = 0; x < nb; ++x)
      t.delta[i * n + na + x] = static_cast<State>(na + b.delta(i, x));
  }
  for (State x = 0; x < na; ++x)
    for (Letter i = 0; i < k; ++i) t.rho[x * k + i] = a.rho(x, i);
  for (State x = 0; x < nb; ++x)
    for (Letter i = 0; i < k; ++i) t.rho[(na + x) * k + i] = b.rho(x, i);
  return Machine::trusted(std::move(t));
}

Machine rename(const Machine& m, std::span<const State> state_perm,
               std::span<const Letter> letter_perm) {
  const auto n = m.num_states();
  const auto k = m.num_letters();
  if (state_perm.size() != n || letter_perm.size() != k ||
      !is_permutation_map(state_perm) || !is_permutation_map(letter_perm))
    throw PreconditionError("rename: arguments are not permutations");
  MachineTables t{std::vector<std::string>(n), std::vector<std::string>(k),
                  std::vector<State>(n * k), std::vector<Letter>(n * k)};
  for (State x = 0; x < n; ++x) t.states[state_perm[x]] = m.state_name(x);
  for (Letter i = 0; i < k; ++i) t.letters[letter_perm[i]] = m.letter_name(i);
  for (State x = 0; x < n; ++x) {
    for (Letter i = 0; i < k; ++i) {
      t.delta[letter_perm[i] * n + state_perm[x]] = state_perm[m.delta(i, x)];
      t.rho[state_perm[x] * k + letter_perm[i]] = letter_perm[m.rho(x, i)];
    }
  }
  return Machine::trusted(std::move(t));
}

LetterWord rho_apply(const Machine& m, std::span<const State> u,
                     std::span<const Letter> s) {
  LetterWord word(s.begin(), s.end());
  for (State x : u) {
    State cur = x;
    for (auto& letter : word) {
      const Letter in = letter;
      letter = m.rho(cur, in);
      cur = m.delta(in, cur);
    }
  }
  return word;
}

StateWord delta_apply(const Machine& m, std::span<const Letter> s,
                      std::span<const State> u) {
  StateWord word(u.begin(), u.end());
  for (Letter i : s) {
    Letter cur = i;
    for (auto& state : word) {
      const State in = state;
      state = m.delta(cur, in);
      cur = m.rho(in, cur);
    }
  }
  return word;
}

WordIndex::WordIndex(std::size_t base, std::size_t length)
    : base_(base), length_(length), size_(1), weight_(length) {
  constexpr std::uint64_t limit = std::uint64_t{1} << 62;
  for (std::size_t k = 0; k < length; ++k) {
    if (size_ > limit / std::max<std::size_t>(base, 1))
      throw BudgetExceeded("word index: " + std::to_string(base) + "^" +
                               std::to_string(length) + " overflows",
                           std::numeric_limits<std::uint64_t>::max());
    size_ *= base;
  }
  std::uint64_t w = 1;
  for (std::size_t k = length; k-- > 0;) {
    weight_[k] = w;
    w *= base;
  }
}

std::uint64_t WordIndex::encode(std::span<const std::uint32_t> word) const {
  std::uint64_t code = 0;
  for (auto d : word) code = code * base_ + d;
  return code;
}

std::vector<std::uint32_t> WordIndex::decode(std::uint64_t code) const {
  std::vector<std::uint32_t> word(length_);
  for (std::size_t k = length_; k-- > 0;) {
    word[k] = static_cast<std::uint32_t>(code % base_);
    code /= base_;
  }
  return word;
}

std::uint64_t power_step(const Machine& m, const WordIndex& index,
                         std::uint64_t word, Letter i, Letter* output) {
  std::uint64_t next = 0;
  Letter cur = i;
  for (std::size_t k = 0; k < index.length(); ++k) {
    const State x = index.digit(word, k);
    next = next * index.base() + m.delta(cur, x);
    cur = m.rho(x, cur);
  }
  if (output) *output = cur;
  return next;
}

std::string word_name(const std::vector<std::string>& names,
                      std::span<const std::uint32_t> word) {
  if (word.empty()) return "()";
  const bool short_names = std::all_of(names.begin(), names.end(),
                                       [](const auto& s) { return s.size() == 1; });
  std::string out;
  for (std::size_t k = 0; k < word.size(); ++k) {
    if (k > 0 && !short_names) out += '.';
    out += names[word[k]];
  }
  return out;
}

Machine power(const Machine& m, std::size_t n, PowerBudget budget) {
  if (n == 0) throw PreconditionError("power: exponent must be positive");
  if (n == 1) return m;
  std::uint64_t required = 0;
  std::optional<WordIndex> index;
  try {
    index.emplace(m.num_states(), n);
    required = index->size();
  } catch (const BudgetExceeded&) {
    required = std::numeric_limits<std::uint64_t>::max();
  }
  if (!index || required > budget.max_states)
    throw BudgetExceeded("power: " + std::to_string(m.num_states()) + "^" +
                             std::to_string(n) + " states exceed the budget of " +
                             std::to_string(budget.max_states),
                         required);
  const auto size = static_cast<std::size_t>(index->size());
  const auto k = m.num_letters();
  MachineTables t{{}, m.letter_names(), std::vector<State>(size * k),
                  std::vector<Letter>(size * k)};
  t.states.reserve(size);
  for (std::uint64_t w = 0; w < size; ++w) {
    const auto word = index->decode(w);
    t.states.push_back(word_name(m.state_names(), word));
    for (Letter i = 0; i < k; ++i) {
      Letter out = 0;
      t.delta[i * size + w] = static_cast<State>(power_step(m, *index, w, i, &out));
      t.rho[w * k + i] = out;
    }
  }
  return Machine::trusted(std::move(t));
}

}  // namespace mealy
