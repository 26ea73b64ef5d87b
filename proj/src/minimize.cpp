#include "mealy/minimize.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>

#include "mealy/error.hpp"

namespace mealy {

Partition canonical_partition(std::span<const std::uint32_t> labels) {
  Partition p;
  p.block.resize(labels.size());
  std::map<std::uint32_t, std::uint32_t> renumber;
  for (std::size_t x = 0; x < labels.size(); ++x) {
    auto [it, inserted] = renumber.try_emplace(labels[x], p.num_blocks);
    if (inserted) ++p.num_blocks;
    p.block[x] = it->second;
  }
  return p;
}

namespace {

// Blocks of ≡_0: states with identical output rows.
std::vector<std::uint32_t> output_row_labels(const Machine& m) {
  const auto n = m.num_states();
  std::vector<State> order(n);
  std::iota(order.begin(), order.end(), 0);
  auto row_less = [&](State a, State b) {
    auto ra = m.rho_row(a);
    auto rb = m.rho_row(b);
    return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
  };
  std::stable_sort(order.begin(), order.end(), row_less);
  std::vector<std::uint32_t> label(n);
  std::uint32_t next = 0;
  for (std::size_t r = 0; r < n; ++r) {
    if (r > 0 && row_less(order[r - 1], order[r])) ++next;
    label[order[r]] = next;
  }
  return label;
}

class Refiner {
 public:
  explicit Refiner(const Machine& m)
      : m_(m), n_(m.num_states()), k_(m.num_letters()) {}

  std::vector<std::uint32_t> run() {
    build_predecessors();
    seed();
    while (!work_.empty()) {
      auto [b, i] = work_.back();
      work_.pop_back();
      in_work_[b * k_ + i] = 0;
      split_by(b, i);
    }
    return blk_;
  }

 private:
  void build_predecessors() {
    pred_start_.assign(k_ * (n_ + 1), 0);
    pred_.resize(k_ * n_);
    for (Letter i = 0; i < k_; ++i) {
      auto* start = pred_start_.data() + i * (n_ + 1);
      for (State x = 0; x < n_; ++x) ++start[m_.delta(i, x) + 1];
      for (std::size_t t = 0; t < n_; ++t) start[t + 1] += start[t];
      std::vector<std::size_t> fill(start, start + n_);
      for (State x = 0; x < n_; ++x) pred_[i * n_ + fill[m_.delta(i, x)]++] = x;
    }
  }

  void seed() {
    const auto labels = output_row_labels(m_);
    const auto blocks = *std::max_element(labels.begin(), labels.end()) + 1;
    elems_.resize(n_);
    std::iota(elems_.begin(), elems_.end(), 0);
    std::stable_sort(elems_.begin(), elems_.end(),
                     [&](State a, State b) { return labels[a] < labels[b]; });
    loc_.resize(n_);
    blk_.resize(n_);
    first_.assign(blocks, 0);
    end_.assign(blocks, 0);
    for (std::size_t p = 0; p < n_; ++p) {
      const State x = elems_[p];
      loc_[x] = p;
      blk_[x] = labels[x];
      if (p == 0 || labels[elems_[p - 1]] != labels[x]) first_[labels[x]] = p;
      end_[labels[x]] = p + 1;
    }
    mid_ = first_;
    in_work_.assign(blocks * k_, 0);
    // Every block but the largest, for every letter.
    std::uint32_t largest = 0;
    for (std::uint32_t b = 1; b < blocks; ++b)
      if (size(b) > size(largest)) largest = b;
    for (std::uint32_t b = 0; b < blocks; ++b) {
      if (b == largest) continue;
      for (Letter i = 0; i < k_; ++i) push(b, i);
    }
  }

  std::size_t size(std::uint32_t b) const { return end_[b] - first_[b]; }

  void push(std::uint32_t b, Letter i) {
    in_work_[b * k_ + i] = 1;
    work_.emplace_back(b, i);
  }

  void mark(State x) {
    const auto b = blk_[x];
    const auto p = loc_[x];
    if (p < mid_[b]) return;
    if (mid_[b] == first_[b]) touched_.push_back(b);
    const State other = elems_[mid_[b]];
    std::swap(elems_[p], elems_[mid_[b]]);
    loc_[other] = p;
    loc_[x] = mid_[b];
    ++mid_[b];
  }

  void split_by(std::uint32_t splitter, Letter i) {
    scratch_.clear();
    const auto* start = pred_start_.data() + i * (n_ + 1);
    for (std::size_t p = first_[splitter]; p < end_[splitter]; ++p) {
      const State t = elems_[p];
      for (auto q = start[t]; q < start[t + 1]; ++q) scratch_.push_back(pred_[i * n_ + q]);
    }
    for (State x : scratch_) mark(x);
    for (auto b : touched_) {
      if (mid_[b] == end_[b]) {
        mid_[b] = first_[b];
        continue;
      }
      // Marked prefix becomes a new block.
      const auto c = static_cast<std::uint32_t>(first_.size());
      first_.push_back(first_[b]);
      end_.push_back(mid_[b]);
      mid_.push_back(first_[b]);
      first_[b] = mid_[b];
      for (auto p = first_[c]; p < end_[c]; ++p) blk_[elems_[p]] = c;
      in_work_.resize(first_.size() * k_, 0);
      for (Letter j = 0; j < k_; ++j) {
        if (in_work_[b * k_ + j]) {
          push(c, j);
        } else {
          push(size(c) <= size(b) ? c : b, j);
        }
      }
    }
    touched_.clear();
  }

  const Machine& m_;
  std::size_t n_;
  std::size_t k_;
  std::vector<std::size_t> pred_start_;
  std::vector<State> pred_;
  std::vector<State> elems_;
  std::vector<std::size_t> loc_;
  std::vector<std::uint32_t> blk_;
  std::vector<std::size_t> first_;
  std::vector<std::size_t> end_;
  std::vector<std::size_t> mid_;
  std::vector<char> in_work_;
  std::vector<std::pair<std::uint32_t, Letter>> work_;
  std::vector<std::uint32_t> touched_;
  std::vector<State> scratch_;
};

}  // namespace

Partition k_classes(const Machine& m, std::size_t k) {
  const auto n = m.num_states();
  const auto letters = m.num_letters();
  Partition p = canonical_partition(output_row_labels(m));
  for (std::size_t step = 0; step < k; ++step) {
    std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
    std::vector<std::uint32_t> labels(n);
    std::vector<std::uint32_t> key(letters + 1);
    for (State x = 0; x < n; ++x) {
      key[0] = p.block[x];
      for (Letter i = 0; i < letters; ++i) key[i + 1] = p.block[m.delta(i, x)];
      labels[x] = ids.try_emplace(key, static_cast<std::uint32_t>(ids.size())).first->second;
    }
    Partition next = canonical_partition(labels);
    const bool stable = next.num_blocks == p.num_blocks;
    p = std::move(next);
    if (stable) break;
  }
  p.depth = k;
  return p;
}

Partition nerode_partition(const Machine& m) {
  Refiner refiner(m);
  return canonical_partition(refiner.run());
}

bool is_minimal(const Machine& m) { return nerode_partition(m).all_singletons(); }

Machine quotient(const Machine& m, const Partition& p) {
  const auto k = m.num_letters();
  const auto blocks = p.num_blocks;
  std::vector<State> rep(blocks, static_cast<State>(m.num_states()));
  for (State x = 0; x < m.num_states(); ++x)
    if (rep[p.block[x]] == m.num_states()) rep[p.block[x]] = x;
  MachineTables t{{}, m.letter_names(), std::vector<State>(blocks * k),
                  std::vector<Letter>(blocks * k)};
  t.states.reserve(blocks);
  for (std::uint32_t b = 0; b < blocks; ++b) {
    t.states.push_back(m.state_name(rep[b]));
    for (Letter i = 0; i < k; ++i) {
      t.delta[i * blocks + b] = p.block[m.delta(i, rep[b])];
      t.rho[b * k + i] = m.rho(rep[b], i);
    }
  }
  for (State x = 0; x < m.num_states(); ++x) {
    const auto b = p.block[x];
    for (Letter i = 0; i < k; ++i) {
      if (t.delta[i * blocks + b] != p.block[m.delta(i, x)] ||
          t.rho[b * k + i] != m.rho(x, i))
        throw InternalError("quotient: block of state " + m.state_name(x) +
                            " is not a congruence on letter " + m.letter_name(i));
    }
  }
  return Machine::trusted(std::move(t));
}

Machine minimize(const Machine& m) { return quotient(m, nerode_partition(m)); }

std::optional<LetterWord> separating_word(const Machine& m, State p, State q) {
  if (p == q) return std::nullopt;
  const auto n = m.num_states();
  // parent[pair] = (previous pair, letter); pairs stored as p * n + q.
  std::vector<std::pair<std::uint64_t, Letter>> parent;
  std::map<std::uint64_t, std::size_t> seen;
  std::queue<std::uint64_t> frontier;
  auto key = [n](State a, State b) { return std::uint64_t{a} * n + b; };
  seen.emplace(key(p, q), 0);
  parent.emplace_back(0, 0);
  frontier.push(key(p, q));
  auto unwind = [&](std::uint64_t pair, Letter last) {
    LetterWord word{last};
    for (auto id = seen.at(pair); id != 0; id = seen.at(parent[id].first))
      word.push_back(parent[id].second);
    std::reverse(word.begin(), word.end());
    return word;
  };
  while (!frontier.empty()) {
    const auto cur = frontier.front();
    frontier.pop();
    const auto a = static_cast<State>(cur / n);
    const auto b = static_cast<State>(cur % n);
    for (Letter i = 0; i < m.num_letters(); ++i) {
      if (m.rho(a, i) != m.rho(b, i)) return unwind(cur, i);
      const auto next = key(m.delta(i, a), m.delta(i, b));
      if (seen.try_emplace(next, parent.size()).second) {
        parent.emplace_back(cur, i);
        frontier.push(next);
      }
    }
  }
  return std::nullopt;
}

EquivalenceVerdict words_equivalent(const Machine& m, std::span<const State> u,
                                    std::span<const State> v, PowerBudget budget) {
  if (u.empty() || v.empty())
    throw PreconditionError("words_equivalent: words must be non-empty");
  const Machine pu = power(m, u.size(), budget);
  const Machine pv = u.size() == v.size() ? pu : power(m, v.size(), budget);
  const Machine joint = u.size() == v.size() ? pu : disjoint_union(pu, pv);
  const State su = static_cast<State>(WordIndex(m.num_states(), u.size()).encode(u));
  State sv = static_cast<State>(WordIndex(m.num_states(), v.size()).encode(v));
  if (u.size() != v.size()) sv += static_cast<State>(pu.num_states());
  const auto part = nerode_partition(joint);
  EquivalenceVerdict verdict;
  if (part.block[su] == part.block[sv]) {
    verdict.equivalent = true;
    verdict.block = part.block[su];
    return verdict;
  }
  auto word = separating_word(joint, su, sv);
  if (!word) throw InternalError("words_equivalent: distinct blocks without a separating word");
  verdict.separating = std::move(*word);
  return verdict;
}

}  // namespace mealy
