#include "mealy/decide.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "mealy/error.hpp"
#include "mealy/minimize.hpp"

namespace mealy {

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::finite_semigroup: return "finite_semigroup";
    case VerdictKind::free_rank2: return "free_rank2";
    case VerdictKind::finite_group: return "finite_group";
    case VerdictKind::infinite_group: return "infinite_group";
    case VerdictKind::unknown: return "unknown";
  }
  return "unknown";
}

std::string Verdict::headline() const {
  switch (kind) {
    case VerdictKind::finite_semigroup:
      return order ? "finite semigroup of order " + std::to_string(*order) : "finite semigroup";
    case VerdictKind::free_rank2: return "free semigroup of rank 2";
    case VerdictKind::finite_group: return "finite group";
    case VerdictKind::infinite_group: return "infinite group";
    case VerdictKind::unknown:
      return "semi-decision only: every power up to " + std::to_string(bound) +
             " is connected, no verdict";
  }
  return {};
}

std::string Verdict::to_json() const {
  using nlohmann::json;
  json cert = json::object();
  cert["subject"] = evidence.subject == Subject::machine ? "machine" : "dual";
  cert["disconnected_power"] =
      evidence.disconnected_power ? json(*evidence.disconnected_power) : json(nullptr);
  cert["connected_up_to"] =
      evidence.connected_up_to ? json(*evidence.connected_up_to) : json(nullptr);
  cert["enumerated_order"] =
      evidence.enumerated_order ? json(*evidence.enumerated_order) : json(nullptr);
  if (evidence.reduction) {
    json steps = json::array();
    for (const auto& s : evidence.reduction->steps)
      steps.push_back({{"side", s.side == ReductionStep::Side::primal ? "primal" : "dual"},
                       {"before", {s.states_before, s.letters_before}},
                       {"after", {s.states_after, s.letters_after}}});
    const auto& r = evidence.reduction->result;
    cert["reduction"] = {{"steps", steps},
                         {"result", {r.num_states(), r.num_letters()}},
                         {"trivial", evidence.reduction->trivial()}};
  } else {
    cert["reduction"] = nullptr;
  }
  json out = {{"verdict", to_string(kind)}, {"headline", headline()}, {"certificate", cert}};
  out["order"] = order ? json(*order) : json(nullptr);
  if (kind == VerdictKind::unknown) out["bound"] = bound;
  return out.dump(2);
}

namespace {

void require_shape(const Machine& m, const char* who, bool two_states, bool two_letters,
                   bool invertible) {
  const std::string name(who);
  if (two_states && m.num_states() != 2)
    throw PreconditionError(name + ": expected 2 states, got " + std::to_string(m.num_states()));
  if (two_letters && m.num_letters() != 2)
    throw PreconditionError(name + ": expected 2 letters, got " +
                            std::to_string(m.num_letters()));
  if (!is_reversible(m)) throw PreconditionError(name + ": machine is not reversible");
  if (invertible && !is_invertible(m))
    throw PreconditionError(name + ": machine is not invertible");
}

void attach_order(const Machine& m, Verdict& v, SemigroupLimits limits) {
  const auto o = semigroup_order(m, limits);
  if (o.finite) {
    v.order = o.value;
    v.evidence.enumerated_order = o.value;
  }
}

}  // namespace

Verdict decide_two_state_reversible(const Machine& m, DecideOptions options) {
  require_shape(m, "decide_two_state_reversible", true, false, false);
  Verdict v;
  const auto degree = connection_degree(m, options.max_power, options.traversal);
  if (degree.finite) {
    v.kind = VerdictKind::finite_semigroup;
    v.evidence.disconnected_power = degree.value + 1;
    v.evidence.connected_up_to = degree.value;
    attach_order(m, v, options.limits);
    return v;
  }
  v.evidence.connected_up_to = degree.value;
  if (is_invertible(m)) {
    auto trace = md_reduce(m);
    if (trace.trivial()) {
      v.kind = VerdictKind::finite_semigroup;
      attach_order(m, v, options.limits);
    } else {
      v.kind = VerdictKind::free_rank2;
    }
    v.evidence.reduction = std::move(trace);
    return v;
  }
  v.kind = VerdictKind::unknown;
  v.bound = degree.value;
  return v;
}

Verdict decide_finite_group_2state(const Machine& m) {
  require_shape(m, "decide_finite_group_2state", true, false, true);
  Verdict v;
  v.evidence.reduction = md_reduce(m);
  v.kind = v.evidence.reduction->trivial() ? VerdictKind::finite_group
                                           : VerdictKind::infinite_group;
  return v;
}

Verdict decide_free_semigroup_2state(const Machine& m) {
  require_shape(m, "decide_free_semigroup_2state", true, false, true);
  Verdict v;
  v.evidence.reduction = md_reduce(m);
  v.kind = v.evidence.reduction->trivial() ? VerdictKind::finite_semigroup
                                           : VerdictKind::free_rank2;
  return v;
}

Verdict decide_finite_group_2letter(const Machine& m) {
  require_shape(m, "decide_finite_group_2letter", false, true, true);
  Verdict v = decide_finite_group_2state(dual(m));
  v.evidence.subject = Subject::dual;
  return v;
}

std::optional<Verdict> decide_by_shape(const Machine& m, DecideOptions options) {
  if (m.num_states() == 2 && is_reversible(m)) return decide_two_state_reversible(m, options);
  if (m.num_letters() == 2 && is_reversible(m) && is_invertible(m))
    return decide_finite_group_2letter(m);
  return std::nullopt;
}

std::string certificate_summary(const Verdict& v) {
  const auto& c = v.evidence;
  std::string out;
  auto add = [&](const std::string& s) { out += (out.empty() ? "" : "; ") + s; };
  if (c.disconnected_power) add("disconnected power " + std::to_string(*c.disconnected_power));
  if (c.reduction) {
    const auto& r = c.reduction->result;
    add(std::string(c.subject == Subject::dual ? "dual " : "") + "md-reduction to " +
        std::to_string(r.num_states()) + "x" + std::to_string(r.num_letters()) + " in " +
        std::to_string(c.reduction->steps.size()) + " steps");
  }
  if (!c.disconnected_power && c.connected_up_to)
    add("connected up to power " + std::to_string(*c.connected_up_to));
  if (c.enumerated_order) add("enumerated order " + std::to_string(*c.enumerated_order));
  return out;
}

namespace {

// Bare tables for the checker; dual is a swap of the two arrays.
struct Naive {
  std::size_t n = 0, k = 0;
  std::vector<std::uint32_t> d;  // d[i * n + x]
  std::vector<std::uint32_t> r;  // r[x * k + i]

  static Naive of(const Machine& m) {
    return {m.num_states(), m.num_letters(), m.tables().delta, m.tables().rho};
  }
  Naive transposed() const { return {k, n, r, d}; }
};

bool is_bijection(const std::uint32_t* f, std::size_t len) {
  std::vector<bool> hit(len, false);
  for (std::size_t i = 0; i < len; ++i) {
    if (hit[f[i]]) return false;
    hit[f[i]] = true;
  }
  return true;
}

bool naive_reversible(const Naive& t) {
  for (std::size_t i = 0; i < t.k; ++i)
    if (!is_bijection(&t.d[i * t.n], t.n)) return false;
  return true;
}

bool naive_invertible(const Naive& t) { return naive_reversible(t.transposed()); }

// Moore refinement to the coarsest stable partition, then the quotient.
bool moore_reduce(Naive& t) {
  std::vector<std::uint32_t> label(t.n);
  std::size_t count = 0;
  {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    for (std::size_t x = 0; x < t.n; ++x) {
      std::vector<std::uint32_t> row(t.r.begin() + x * t.k, t.r.begin() + (x + 1) * t.k);
      label[x] = ids.emplace(row, ids.size()).first->second;
    }
    count = ids.size();
  }
  while (true) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> next(t.n);
    for (std::size_t x = 0; x < t.n; ++x) {
      std::vector<std::uint32_t> sig{label[x]};
      for (std::size_t i = 0; i < t.k; ++i) sig.push_back(label[t.d[i * t.n + x]]);
      next[x] = ids.emplace(sig, ids.size()).first->second;
    }
    label = std::move(next);
    if (ids.size() == count) break;
    count = ids.size();
  }
  if (count == t.n) return false;
  std::vector<std::size_t> rep(count, t.n);
  for (std::size_t x = 0; x < t.n; ++x)
    if (rep[label[x]] == t.n) rep[label[x]] = x;
  Naive q{count, t.k, std::vector<std::uint32_t>(t.k * count), std::vector<std::uint32_t>(count * t.k)};
  for (std::size_t c = 0; c < count; ++c)
    for (std::size_t i = 0; i < t.k; ++i) {
      q.d[i * count + c] = label[t.d[i * t.n + rep[c]]];
      q.r[c * t.k + i] = t.r[rep[c] * t.k + i];
    }
  t = std::move(q);
  return true;
}

std::pair<std::size_t, std::size_t> naive_md_reduce(Naive t) {
  while (true) {
    if (moore_reduce(t)) continue;
    Naive u = t.transposed();
    if (moore_reduce(u)) {
      t = u.transposed();
      continue;
    }
    return {t.n, t.k};
  }
}

// Number of weak components of the e-th power, by explicit word traversal.
std::optional<std::size_t> naive_power_components(const Naive& t, std::size_t e,
                                                  std::uint64_t max_words) {
  std::uint64_t size = 1;
  for (std::size_t j = 0; j < e; ++j) {
    size *= t.n;
    if (size > max_words) return std::nullopt;
  }
  std::vector<std::uint64_t> parent(size);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::uint64_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  std::vector<std::uint32_t> word(e);
  for (std::uint64_t code = 0; code < size; ++code) {
    std::uint64_t c = code;
    for (std::size_t p = e; p-- > 0;) {
      word[p] = static_cast<std::uint32_t>(c % t.n);
      c /= t.n;
    }
    for (std::size_t i0 = 0; i0 < t.k; ++i0) {
      std::uint32_t i = static_cast<std::uint32_t>(i0);
      std::uint64_t target = 0;
      for (std::size_t p = 0; p < e; ++p) {
        const auto x = word[p];
        target = target * t.n + t.d[i * t.n + x];
        i = t.r[x * t.k + i];
      }
      const auto a = find(code), b = find(target);
      if (a != b) parent[a] = b;
    }
  }
  std::size_t components = 0;
  for (std::uint64_t w = 0; w < size; ++w)
    if (find(w) == w) ++components;
  return components;
}

CertificateCheck fail(std::string reason) { return {false, std::move(reason)}; }

}  // namespace

CertificateCheck check_certificate(const Machine& m, const Verdict& v, std::uint64_t max_words) {
  const Naive t = v.evidence.subject == Subject::machine ? Naive::of(m)
                                                         : Naive::of(m).transposed();
  const auto& c = v.evidence;
  if (c.enumerated_order && v.order != c.enumerated_order)
    return fail("order disagrees with the enumeration");

  auto reduction_claim = [&](bool want_trivial) -> std::optional<CertificateCheck> {
    if (!c.reduction) return fail("no md-reduction");
    if (t.n != 2) return fail("md-reduction certificate needs a two-state subject");
    if (!naive_reversible(t) || !naive_invertible(t))
      return fail("subject is not invertible and reversible");
    const auto [n, k] = naive_md_reduce(t);
    const auto& r = c.reduction->result;
    if (n != r.num_states() || k != r.num_letters())
      return fail("md-reduction replay ends at " + std::to_string(n) + "x" + std::to_string(k));
    if ((n == 1 && k == 1) != want_trivial) return fail("md-reduction triviality mismatch");
    return std::nullopt;
  };

  switch (v.kind) {
    case VerdictKind::finite_semigroup: {
      if (c.disconnected_power) {
        if (t.n != 2 || !naive_reversible(t))
          return fail("disconnected power needs a two-state reversible subject");
        const auto comps = naive_power_components(t, *c.disconnected_power, max_words);
        if (!comps) return fail("power too large to check");
        if (*comps < 2) return fail("claimed disconnected power is connected");
        return {true, "power " + std::to_string(*c.disconnected_power) + " has " +
                          std::to_string(*comps) + " components"};
      }
      if (auto bad = reduction_claim(true)) return *bad;
      return {true, "md-trivial"};
    }
    case VerdictKind::finite_group:
      if (auto bad = reduction_claim(true)) return *bad;
      return {true, "md-trivial"};
    case VerdictKind::free_rank2:
    case VerdictKind::infinite_group:
      if (auto bad = reduction_claim(false)) return *bad;
      return {true, "md-reduction is not trivial"};
    case VerdictKind::unknown: {
      if (!c.connected_up_to || *c.connected_up_to != v.bound)
        return fail("bound not recorded");
      for (std::size_t e = 1; e <= v.bound; ++e) {
        const auto comps = naive_power_components(t, e, max_words);
        if (!comps) return fail("power too large to check");
        if (*comps != 1) return fail("power " + std::to_string(e) + " is disconnected");
      }
      return {true, "powers up to " + std::to_string(v.bound) + " connected"};
    }
  }
  return fail("unknown verdict kind");
}

namespace {

// Hash of the outputs of ρ_u on every input word of length `depth`, in
// lexicographic order.
class ActionHasher {
 public:
  ActionHasher(const Machine& m, std::size_t depth) : m_(m), depth_(depth) {}

  std::uint64_t operator()(const StateWord& u) {
    hash_ = 1469598103934665603ull;
    visit(u, 0);
    return hash_;
  }

 private:
  void visit(const StateWord& section, std::size_t level) {
    if (level == depth_) return;
    StateWord next(section.size());
    for (Letter i0 = 0; i0 < m_.num_letters(); ++i0) {
      Letter i = i0;
      for (std::size_t p = 0; p < section.size(); ++p) {
        next[p] = m_.delta(i, section[p]);
        i = m_.rho(section[p], i);
      }
      hash_ = (hash_ ^ (i + 1)) * 1099511628211ull;
      visit(next, level + 1);
    }
  }

  const Machine& m_;
  std::size_t depth_;
  std::uint64_t hash_ = 0;
};

}  // namespace

RelationSearch free_relation_search(const Machine& m, std::size_t max_len, std::size_t depth) {
  if (max_len == 0) throw PreconditionError("free_relation_search: max_len must be positive");
  const auto n = m.num_states();
  std::uint64_t words = 0, level = 1;
  for (std::size_t l = 1; l <= max_len; ++l) {
    level *= n;
    words += level;
    if (words > (std::uint64_t{1} << 20))
      throw BudgetExceeded("free_relation_search: too many words", words);
  }
  std::uint64_t leaves = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    leaves *= m.num_letters();
    if (leaves > (std::uint64_t{1} << 20))
      throw BudgetExceeded("free_relation_search: signature depth too large", leaves);
  }

  RelationSearch result;
  result.max_len = max_len;
  ActionHasher hash(m, depth);
  std::unordered_map<std::uint64_t, std::vector<StateWord>> buckets;
  for (std::size_t len = 1; len <= max_len; ++len) {
    StateWord v(len, 0);
    while (true) {
      ++result.words_tested;
      auto& bucket = buckets[hash(v)];
      for (const auto& u : bucket) {
        ++result.pairs_confirmed;
        if (words_equivalent(m, u, v).equivalent) {
          result.found = true;
          result.u = u;
          result.v = v;
          return result;
        }
      }
      bucket.push_back(v);
      std::size_t p = len;
      while (p > 0 && v[p - 1] + 1 == n) v[--p] = 0;
      if (p == 0) break;
      ++v[p - 1];
    }
  }
  return result;
}

ClassSizeReport verify_prime_class_sizes(const Machine& m, std::size_t exponent) {
  const auto p = m.num_states();
  bool prime = p >= 2;
  for (std::size_t d = 2; d * d <= p && prime; ++d)
    if (p % d == 0) prime = false;
  if (!prime)
    throw PreconditionError("verify_prime_class_sizes: " + std::to_string(p) +
                            " states is not a prime");
  if (!is_reversible(m)) throw PreconditionError("verify_prime_class_sizes: not reversible");
  if (exponent == 0) throw PreconditionError("verify_prime_class_sizes: exponent must be positive");
  if (!power_components(m, exponent).connected())
    throw PreconditionError("verify_prime_class_sizes: power " + std::to_string(exponent) +
                            " is not connected");
  const auto classes = nerode_partition(power(m, exponent));
  ClassSizeReport report;
  report.prime = p;
  report.exponent = exponent;
  report.sizes.assign(classes.num_blocks, 0);
  for (auto b : classes.block) ++report.sizes[b];
  std::sort(report.sizes.begin(), report.sizes.end());
  report.equal = report.sizes.front() == report.sizes.back();
  report.prime_power = std::all_of(report.sizes.begin(), report.sizes.end(), [&](std::uint64_t s) {
    while (s % p == 0) s /= p;
    return s == 1;
  });
  return report;
}

}  // namespace mealy
