#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mealy/connectivity.hpp"
#include "mealy/machine.hpp"
#include "mealy/mdreduce.hpp"
#include "mealy/semigroup.hpp"

namespace mealy {

enum class VerdictKind { finite_semigroup, free_rank2, finite_group, infinite_group, unknown };

std::string to_string(VerdictKind k);

/// Which machine a certificate speaks about.
enum class Subject { machine, dual };

struct Certificate {
  Subject subject = Subject::machine;
  /// Exponent of a power shown disconnected.
  std::optional<std::size_t> disconnected_power;
  /// All powers up to this exponent were shown connected.
  std::optional<std::size_t> connected_up_to;
  /// md-reduction of the subject.
  std::optional<ReductionTrace> reduction;
  /// Order of the subject's semigroup, from an exact enumeration.
  std::optional<std::size_t> enumerated_order;
};

struct Verdict {
  VerdictKind kind = VerdictKind::unknown;
  /// Semigroup order, for finite semigroups when enumeration succeeded.
  std::optional<std::size_t> order;
  /// Largest power examined, for unknown verdicts.
  std::size_t bound = 0;
  Certificate evidence;

  /// One line, e.g. "free semigroup of rank 2".
  std::string headline() const;
  /// JSON object with the certificate embedded.
  std::string to_json() const;
};

struct DecideOptions {
  std::size_t max_power = 16;
  SemigroupLimits limits{};
  TraversalBudget traversal{};
};

/// Finite-or-free decision for two-state reversible machines. A disconnected
/// power proves finiteness; for invertible machines, a non-trivial
/// md-reduction proves freeness. Non-invertible machines whose powers stay
/// connected up to max_power get an unknown verdict.
Verdict decide_two_state_reversible(const Machine& m, DecideOptions options = {});

/// Finite group iff md-trivial. Two states, invertible, reversible.
Verdict decide_finite_group_2state(const Machine& m);

/// Free of rank 2 iff not md-trivial, otherwise finite. Two states,
/// invertible, reversible.
Verdict decide_free_semigroup_2state(const Machine& m);

/// Two letters, invertible, reversible: decided on the dual.
Verdict decide_finite_group_2letter(const Machine& m);

/// Picks the applicable decision procedure: two-state reversible machines
/// get the finite-or-free decision, two-letter invertible-reversible ones the
/// finite-group decision on the dual. Empty for every other shape.
std::optional<Verdict> decide_by_shape(const Machine& m, DecideOptions options = {});

/// Short description of the certificate, e.g. "disconnected power 2".
std::string certificate_summary(const Verdict& v);

struct CertificateCheck {
  bool valid = false;
  std::string reason;
};

/// Re-validates a verdict's certificates with naive procedures that share no
/// code with the deciders: explicit power traversal and Moore refinement.
CertificateCheck check_certificate(const Machine& m, const Verdict& v,
                                   std::uint64_t max_words = std::uint64_t{1} << 22);

struct RelationSearch {
  bool found = false;
  std::size_t max_len = 0;
  /// The relation ρ_u = ρ_v when found, with u before v in length-lex order.
  StateWord u;
  StateWord v;
  std::size_t words_tested = 0;
  std::size_t pairs_confirmed = 0;
};

/// Looks for two distinct non-empty state words of length at most max_len
/// acting identically. Words are bucketed by their action on input words of
/// length `depth`, and candidates inside a bucket are confirmed exactly.
/// The relation returned is the first (u, v) with v minimal in length-lex
/// order, then u minimal.
RelationSearch free_relation_search(const Machine& m, std::size_t max_len, std::size_t depth);

struct ClassSizeReport {
  std::size_t prime = 0;
  std::size_t exponent = 0;
  /// Nerode class sizes of the power, sorted.
  std::vector<std::uint64_t> sizes;
  bool equal = false;
  bool prime_power = false;
  bool ok() const noexcept { return equal && prime_power; }
};

/// Nerode class sizes of the given (connected) power of a reversible machine
/// with a prime number of states. Throws PreconditionError otherwise.
ClassSizeReport verify_prime_class_sizes(const Machine& m, std::size_t exponent);

}  // namespace mealy
