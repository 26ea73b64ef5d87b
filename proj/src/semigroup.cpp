#include "mealy/semigroup.hpp"

#include <mutex>
#include <unordered_map>

#include <json.hpp>

#include "mealy/canonical.hpp"
#include "mealy/connectivity.hpp"

namespace mealy {

namespace detail {

/// Hash-consed actions on Σ^d: the action of a word on Σ^d is its output on
/// each first letter together with the actions of its one-letter sections
/// on Σ^(d-1). Equal ids mean equal actions.
class SignatureEngine {
 public:
  explicit SignatureEngine(Machine m) : m_(std::move(m)) { hashes_.push_back(0x6a09e667f3bcc909ULL); }

  std::uint32_t id(std::span<const State> word, std::size_t depth) {
    std::lock_guard lock(mutex_);
    return compute(std::u32string(word.begin(), word.end()), depth);
  }

  std::uint64_t hash(std::uint32_t id) {
    std::lock_guard lock(mutex_);
    return hashes_[id];
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      for (auto x : v) h = (h ^ x) * 0x100000001b3ULL;
      return static_cast<std::size_t>(h);
    }
  };

  static std::uint64_t mix(std::uint64_t h) {
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return h;
  }

  std::uint32_t compute(const std::u32string& word, std::size_t depth) {
    if (depth == 0) return 0;
    if (memo_.size() <= depth) memo_.resize(depth + 1);
    if (auto it = memo_[depth].find(word); it != memo_[depth].end()) return it->second;
    const auto k = m_.num_letters();
    std::vector<std::uint32_t> key(2 * k);
    std::u32string section(word.size(), U'\0');
    for (Letter i = 0; i < k; ++i) {
      Letter cur = i;
      for (std::size_t p = 0; p < word.size(); ++p) {
        const State x = word[p];
        section[p] = m_.delta(cur, x);
        cur = m_.rho(x, cur);
      }
      key[i] = cur;
      key[k + i] = compute(section, depth - 1);
    }
    auto [it, inserted] = intern_.try_emplace(key, static_cast<std::uint32_t>(hashes_.size()));
    if (inserted) {
      std::uint64_t h = mix(depth);
      for (Letter i = 0; i < k; ++i) h = mix(h ^ (key[i] + 0x9e3779b97f4a7c15ULL));
      for (Letter i = 0; i < k; ++i) h = mix(h ^ hashes_[key[k + i]]);
      hashes_.push_back(h);
    }
    memo_[depth].emplace(word, it->second);
    return it->second;
  }

  Machine m_;
  std::vector<std::unordered_map<std::u32string, std::uint32_t>> memo_;
  std::unordered_map<std::vector<std::uint32_t>, std::uint32_t, KeyHash> intern_;
  std::vector<std::uint64_t> hashes_;
  std::mutex mutex_;
};

}  // namespace detail

namespace {

enum class Pass { closed, deeper, over_budget };

struct Enumerator {
  const Machine& m;
  SemigroupLimits limits;
  detail::SignatureEngine& engine;
  std::size_t depth = 1;

  Enumerator(const Machine& machine, SemigroupLimits l, detail::SignatureEngine& e)
      : m(machine), limits(l), engine(e) {}

  std::vector<SemigroupElement> elements;
  std::vector<std::uint32_t> ids;
  std::unordered_map<std::uint32_t, std::uint32_t> by_id;
  std::vector<std::uint32_t> right_mult;
  std::vector<std::uint32_t> generator;

  void reset() {
    elements.clear();
    ids.clear();
    by_id.clear();
    right_mult.clear();
    generator.clear();
  }

  // Element index of `word`, adding it when new. Returns nullopt and sets
  // `pass` when the enumeration has to stop.
  std::optional<std::uint32_t> place(const StateWord& word, Pass& pass) {
    const auto id = engine.id(word, depth);
    if (auto it = by_id.find(id); it != by_id.end()) {
      const auto& other = elements[it->second].witness;
      if (engine.id(word, depth + 1) != engine.id(other, depth + 1)) {
        pass = depth + 1 > limits.max_depth ? Pass::over_budget : Pass::deeper;
        return std::nullopt;
      }
      return it->second;
    }
    if (elements.size() >= limits.max_elements) {
      pass = Pass::over_budget;
      return std::nullopt;
    }
    const auto e = static_cast<std::uint32_t>(elements.size());
    elements.push_back({word, 0});
    ids.push_back(id);
    by_id.emplace(id, e);
    return e;
  }

  Pass close() {
    reset();
    const auto gens = m.num_states();
    Pass pass = Pass::closed;
    for (State x = 0; x < gens; ++x) {
      auto e = place(StateWord{x}, pass);
      if (!e) return pass;
      generator.push_back(*e);
    }
    for (std::size_t e = 0; e < elements.size(); ++e) {
      for (State x = 0; x < gens; ++x) {
        StateWord word = elements[e].witness;
        word.push_back(x);
        auto f = place(word, pass);
        if (!f) return pass;
        right_mult.push_back(*f);
      }
    }
    return pass;
  }

  std::optional<std::uint32_t> lookup(std::span<const State> word) {
    auto it = by_id.find(engine.id(word, depth));
    if (it == by_id.end()) return std::nullopt;
    return it->second;
  }

  // Section-closure certificate for the current depth.
  bool certify() {
    const auto gens = m.num_states();
    const auto k = m.num_letters();
    const auto n = elements.size();
    std::vector<std::uint32_t> section(n * k);
    std::vector<Letter> out(n * k);
    for (std::size_t e = 0; e < n; ++e) {
      for (Letter i = 0; i < k; ++i) {
        const Letter s[] = {i};
        auto sec = lookup(delta_apply(m, s, elements[e].witness));
        if (!sec) return false;
        section[e * k + i] = *sec;
        out[e * k + i] = rho_apply(m, elements[e].witness, s)[0];
      }
    }
    for (State y = 0; y < gens; ++y) {
      for (Letter i = 0; i < k; ++i) {
        if (section[generator[y] * k + i] != generator[m.delta(i, y)]) return false;
      }
    }
    for (std::size_t e = 0; e < n; ++e) {
      for (State x = 0; x < gens; ++x) {
        const auto ex = right_mult[e * gens + x];
        for (Letter i = 0; i < k; ++i) {
          const State moved = m.delta(out[e * k + i], x);
          if (section[ex * k + i] != right_mult[section[e * k + i] * gens + moved]) return false;
        }
      }
    }
    return true;
  }
};

}  // namespace

SemigroupTable enumerate_semigroup(const Machine& m, SemigroupLimits limits) {
  auto engine = std::make_shared<detail::SignatureEngine>(m);
  Enumerator run(m, limits, *engine);
  SemigroupTable table;
  table.engine_ = engine;
  table.generators_ = m.num_states();
  table.status_ = EnumerationStatus::budget_exceeded;
  while (true) {
    const Pass pass = run.close();
    if (pass == Pass::over_budget) break;
    if (pass == Pass::closed) {
      if (run.certify()) {
        table.status_ = EnumerationStatus::finite;
        break;
      }
      if (run.depth + 1 > limits.max_depth) break;
    }
    ++run.depth;
  }
  table.depth_ = run.depth;
  for (std::size_t e = 0; e < run.elements.size(); ++e)
    run.elements[e].signature = engine->hash(run.ids[e]);
  table.elements_ = std::move(run.elements);
  table.by_id_ = std::move(run.by_id);
  table.right_mult_ = std::move(run.right_mult);
  table.generator_ = std::move(run.generator);
  return table;
}

std::optional<std::uint32_t> SemigroupTable::element_of(std::span<const State> word) const {
  if (word.empty() || !engine_) return std::nullopt;
  auto it = by_id_.find(engine_->id(word, depth_));
  if (it == by_id_.end()) return std::nullopt;
  return it->second;
}

std::string SemigroupTable::to_json(const std::vector<std::string>& state_names) const {
  nlohmann::json j;
  j["status"] = finite() ? "finite" : "budget_exceeded";
  j["certified_depth"] = depth_;
  j["order"] = elements_.size();
  auto& elems = j["elements"] = nlohmann::json::array();
  char buf[17];
  for (const auto& e : elements_) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(e.signature));
    elems.push_back({{"signature", buf}, {"witness", word_name(state_names, e.witness)}});
  }
  return j.dump(2);
}

std::string to_string(const SemigroupOrder& o) {
  return o.finite ? std::to_string(o.value) : ">= " + std::to_string(o.value);
}

SemigroupOrder semigroup_order(const Machine& m, SemigroupLimits limits) {
  const auto table = enumerate_semigroup(m, limits);
  return {table.finite(), table.order()};
}

std::uint32_t ClosureAlphabet::class_of(std::span<const Letter> s) const {
  auto e = dual_table.element_of(s);
  if (!e) throw InternalError("class_of: letter word outside the dual semigroup table");
  return *e;
}

TensorClosure tensor_closure(const Machine& m, SemigroupLimits limits) {
  const Machine d = dual(m);
  SemigroupTable table = enumerate_semigroup(d, limits);
  if (!table.finite())
    throw FinitenessUnknown("tensor_closure: dual semigroup not shown finite within " +
                                std::to_string(limits.max_elements) + " elements, depth " +
                                std::to_string(limits.max_depth),
                            table.order());
  ClosureAlphabet alphabet{{}, std::move(table)};
  const auto& elems = alphabet.dual_table.elements();
  const auto size = elems.size();
  const auto n = m.num_states();
  MachineTables t{m.state_names(), {}, std::vector<State>(size * n),
                  std::vector<Letter>(size * n)};
  for (const auto& e : elems) {
    alphabet.letters.push_back(e.witness);
    t.letters.push_back(word_name(m.letter_names(), e.witness));
  }
  auto image = [&](State x, std::span<const Letter> s) {
    const State u[] = {x};
    return alphabet.class_of(rho_apply(m, u, s));
  };
  auto target = [&](std::span<const Letter> s, State x) {
    const State u[] = {x};
    return delta_apply(m, s, u)[0];
  };
  for (std::size_t xi = 0; xi < size; ++xi) {
    for (State x = 0; x < n; ++x) {
      t.delta[xi * n + x] = target(elems[xi].witness, x);
      t.rho[x * size + xi] = image(x, elems[xi].witness);
    }
  }
  // Every stored product word must agree with the letter it was merged into.
  for (std::size_t f = 0; f < size; ++f) {
    for (Letter c = 0; c < m.num_letters(); ++c) {
      LetterWord word = elems[f].witness;
      word.push_back(c);
      const auto xi = alphabet.dual_table.product(static_cast<std::uint32_t>(f), c);
      for (State x = 0; x < n; ++x) {
        if (target(word, x) != t.delta[xi * n + x] || image(x, word) != t.rho[x * size + xi])
          throw InternalError("tensor_closure: class representatives disagree");
      }
    }
  }
  return {Machine::trusted(std::move(t)), std::move(alphabet)};
}

bool is_tensor_closed(const Machine& m, SemigroupLimits limits) {
  const auto closure = tensor_closure(m, limits);
  return isomorphic(closure.machine, m);
}

CompletenessReport verify_complete_components(const Machine& m, std::size_t exponent,
                                              SemigroupLimits limits) {
  if (m.num_states() != 2 || !is_invertible(m) || !is_reversible(m))
    throw PreconditionError(
        "verify_complete_components: needs a two-state invertible reversible machine");
  if (!is_tensor_closed(m, limits))
    throw PreconditionError("verify_complete_components: machine is not tensor closed");
  const auto report = power_components(m, exponent);
  const WordIndex index(m.num_states(), exponent);
  CompletenessReport out;
  out.exponent = exponent;
  std::vector<std::vector<std::uint32_t>> members(report.num_components());
  for (std::uint32_t w = 0; w < report.component.size(); ++w)
    members[report.component[w]].push_back(w);
  std::vector<char> hit(report.component.size(), 0);
  for (std::uint32_t w = 0; w < report.component.size(); ++w) {
    for (Letter i = 0; i < m.num_letters(); ++i) hit[power_step(m, index, w, i)] = 1;
    for (auto v : members[report.component[w]]) {
      if (!hit[v] && !out.missing) out.missing.emplace(index.decode(w), index.decode(v));
    }
    for (Letter i = 0; i < m.num_letters(); ++i) hit[power_step(m, index, w, i)] = 0;
  }
  return out;
}

}  // namespace mealy
