#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mealy {

using State = std::uint32_t;
using Letter = std::uint32_t;

/// Word over the stateset; the first entry acts first.
using StateWord = std::vector<State>;
/// Word over the alphabet.
using LetterWord = std::vector<Letter>;

/// Raw tables of a Mealy machine, before validation.
///
/// `delta[i * |states| + x]` is the target of state x on input letter i and
/// `rho[x * |letters| + i]` is the letter state x outputs on input i.
struct MachineTables {
  std::vector<std::string> states;
  std::vector<std::string> letters;
  std::vector<State> delta;
  std::vector<Letter> rho;

  friend bool operator==(const MachineTables&, const MachineTables&) = default;
};

struct ValidationIssue {
  enum class Kind {
    no_states,
    no_letters,
    duplicate_state,
    duplicate_letter,
    delta_size,
    rho_size,
    delta_out_of_range,
    rho_out_of_range,
  };
  Kind kind;
  std::string message;
};

/// Returns the first violated invariant, or nothing when the tables describe
/// a complete deterministic Mealy machine.
std::optional<ValidationIssue> validate(const MachineTables& tables);

/// Immutable, validated Mealy machine. Copies share the underlying tables.
class Machine {
 public:
  /// Throws InvalidMachine when `validate` reports an issue.
  explicit Machine(MachineTables tables);

  /// Skips validation; the caller guarantees the invariants hold.
  static Machine trusted(MachineTables tables);

  std::size_t num_states() const noexcept { return data_->states.size(); }
  std::size_t num_letters() const noexcept { return data_->letters.size(); }

  State delta(Letter i, State x) const noexcept {
    return data_->delta[i * num_states() + x];
  }
  Letter rho(State x, Letter i) const noexcept {
    return data_->rho[x * num_letters() + i];
  }

  /// δ_i as a map on states.
  std::span<const State> delta_column(Letter i) const noexcept {
    return {data_->delta.data() + i * num_states(), num_states()};
  }
  /// ρ_x as a map on letters.
  std::span<const Letter> rho_row(State x) const noexcept {
    return {data_->rho.data() + x * num_letters(), num_letters()};
  }

  const std::string& state_name(State x) const { return data_->states[x]; }
  const std::string& letter_name(Letter i) const { return data_->letters[i]; }
  const std::vector<std::string>& state_names() const noexcept {
    return data_->states;
  }
  const std::vector<std::string>& letter_names() const noexcept {
    return data_->letters;
  }
  const MachineTables& tables() const noexcept { return *data_; }

  std::optional<State> find_state(const std::string& name) const;
  std::optional<Letter> find_letter(const std::string& name) const;

  /// Same tables and same names.
  friend bool operator==(const Machine& a, const Machine& b) {
    return a.data_ == b.data_ || *a.data_ == *b.data_;
  }

 private:
  struct TrustedTag {};
  Machine(MachineTables tables, TrustedTag);

  std::shared_ptr<const MachineTables> data_;
};

/// The one-state one-letter machine.
Machine trivial_machine();

bool is_invertible(const Machine& m);
bool is_reversible(const Machine& m);
/// Invertible, reversible, and the inverse machine is reversible.
bool is_bireversible(const Machine& m);

/// Machine with transitions x --ρ_x(i)|i--> δ_i(x). Requires invertibility.
Machine inverse(const Machine& m);

/// Swaps the roles of states and letters.
Machine dual(const Machine& m);

/// Disjoint union over a shared alphabet (letter names must agree).
Machine disjoint_union(const Machine& a, const Machine& b);

/// Renames states by `state_perm` (old index -> new index) and letters by
/// `letter_perm`, simultaneously on inputs and outputs.
Machine rename(const Machine& m, std::span<const State> state_perm,
               std::span<const Letter> letter_perm);

/// ρ_u(s); the first state of u acts first.
LetterWord rho_apply(const Machine& m, std::span<const State> u,
                     std::span<const Letter> s);

/// δ_s(u), the dual action; the first letter of s acts first.
StateWord delta_apply(const Machine& m, std::span<const Letter> s,
                      std::span<const State> u);

/// Lexicographic packing of words of a fixed length into integers: the first
/// letter is the most significant digit.
class WordIndex {
 public:
  /// Throws BudgetExceeded when base^length does not fit in 63 bits.
  WordIndex(std::size_t base, std::size_t length);

  std::size_t base() const noexcept { return base_; }
  std::size_t length() const noexcept { return length_; }
  std::uint64_t size() const noexcept { return size_; }

  std::uint64_t encode(std::span<const std::uint32_t> word) const;
  std::vector<std::uint32_t> decode(std::uint64_t code) const;
  std::uint32_t digit(std::uint64_t code, std::size_t position) const noexcept {
    return static_cast<std::uint32_t>((code / weight_[position]) % base_);
  }
  std::uint64_t weight(std::size_t position) const noexcept {
    return weight_[position];
  }

 private:
  std::size_t base_;
  std::size_t length_;
  std::uint64_t size_;
  std::vector<std::uint64_t> weight_;
};

/// Transition of the n-th power on a packed state word, without materializing
/// the power: returns the packed δ_i(u) and writes ρ_u(i) to `output`.
std::uint64_t power_step(const Machine& m, const WordIndex& index,
                         std::uint64_t word, Letter i, Letter* output = nullptr);

struct PowerBudget {
  std::uint64_t max_states = std::uint64_t{1} << 20;
};

/// The n-th power: states are the words of length n in lexicographic order.
/// Throws BudgetExceeded (carrying |A|^n) above the budget.
Machine power(const Machine& m, std::size_t n, PowerBudget budget = {});

/// Name of a state word of `m`, as used for power states.
std::string word_name(const std::vector<std::string>& names,
                      std::span<const std::uint32_t> word);

}  // namespace mealy
