#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mealy/canonical.hpp"
#include "mealy/decide.hpp"
#include "mealy/machine.hpp"

namespace mealy {

struct Filters {
  bool invertible = false;
  bool reversible = false;
  bool bireversible = false;
  /// The transition graph is (weakly) connected.
  bool connected = false;
  bool minimal = false;
};

enum class SymmetryMode {
  labeled,      ///< every table counts
  states_only,  ///< one table per state renaming class
  up_to_iso     ///< one table per simultaneous state and letter renaming class
};

std::string to_string(SymmetryMode s);

struct FamilySpec {
  std::size_t n_states = 1;
  std::size_t n_letters = 1;
  Filters filters{};
  SymmetryMode symmetry = SymmetryMode::labeled;

  /// Throws PreconditionError on empty sizes.
  void validate() const;
  /// Number of candidate tables generated before filtering. Reversible
  /// families draw every δ_i from the permutations, invertible ones every
  /// ρ_x; otherwise all maps are drawn. Saturates at UINT64_MAX.
  std::uint64_t universe_size() const;
};

struct EnumerationBudget {
  std::uint64_t max_candidates = 200'000'000;
};

/// Restricts enumeration to the candidates whose δ_0 choice has the given
/// residue modulo `count`; shards partition the family.
struct Shard {
  std::size_t index = 0;
  std::size_t count = 1;
};

/// Streams the family's tables in generation order (δ choices, then ρ
/// choices, lexicographically). Cheap table filters run before the minimality
/// check and canonicalization. In the symmetric modes only the table equal to
/// its own canonical form is emitted. Return false from the callback to stop.
/// Throws BudgetExceeded carrying the universe size.
void enumerate_family(const FamilySpec& spec, const std::function<bool(const TableView&)>& emit,
                      EnumerationBudget budget = {}, Shard shard = {});

/// Machine on states "0".."n-1" and letters "a", "b", ... from raw tables.
Machine machine_from_view(const TableView& t);

std::vector<Machine> family_machines(const FamilySpec& spec, EnumerationBudget budget = {});

/// Hex of the table in its given labelling, in the same layout as a
/// canonical key.
std::string table_code(const TableView& t);

struct Analyses {
  bool md_triviality = true;
  bool verdict = true;
  bool connection_degree = true;
  bool semigroup_order = true;
};

struct CensusRow {
  std::string key;    ///< canonical key (hex)
  std::string table;  ///< labelled table (hex)
  bool invertible = false, reversible = false, bireversible = false, connected = false,
       minimal = false;
  std::string md_trivial;  ///< "yes", "no" or "" when not run
  std::string verdict;     ///< VerdictKind name, "n/a" outside decidable shapes
  std::string certificate;
  std::string degree;
  std::string order;
  std::string status;  ///< "ok" or "budget: ..."
};

struct CensusReport {
  FamilySpec spec;
  std::vector<CensusRow> rows;  ///< sorted by (key, table)
  std::map<std::string, std::size_t> verdict_counts;
  std::size_t budget_exceeded = 0;
  std::size_t resumed = 0;
  double elapsed_ms = 0;

  std::string to_csv() const;
  /// Summary: spec, counts, timing.
  std::string to_json() const;
};

struct CensusOptions {
  std::size_t jobs = 1;
  DecideOptions decide{};
  /// Append-only file of completed rows; rows already present are reused.
  std::string journal;
  EnumerationBudget budget{};
};

CensusRow classify_machine(const Machine& m, const Analyses& analyses,
                           const DecideOptions& options = {});

/// Runs the analyses on every machine of the family. Per-machine budget
/// failures are recorded in the rows.
CensusReport classify_family(const FamilySpec& spec, const Analyses& analyses,
                             const CensusOptions& options = {});

/// Counts of two-letter bireversible machines with a given number of states,
/// under several equivalences.
struct BireversibleCount {
  std::size_t n_states = 0;
  std::uint64_t labeled = 0;
  std::uint64_t states_only = 0;
  std::uint64_t up_to_iso = 0;
  std::uint64_t iso_connected = 0;
  std::uint64_t iso_minimal = 0;
  std::uint64_t iso_connected_minimal = 0;
  /// md-trivial classes among the up-to-iso representatives.
  std::uint64_t iso_md_trivial = 0;
  double enumerate_ms = 0;
  /// Time spent testing md-triviality of the up-to-iso representatives.
  double md_ms = 0;

  /// Names of the modes whose count equals `target`.
  std::vector<std::string> modes_equal_to(std::uint64_t target) const;
  std::string to_json(std::uint64_t target = 3446) const;
};

BireversibleCount count_bireversible_2letter(std::size_t n_states, std::size_t jobs = 1);

}  // namespace mealy
