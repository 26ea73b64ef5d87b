#include "mealy/connectivity.hpp"

#include <algorithm>
#include <numeric>

#include "mealy/error.hpp"

namespace mealy {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root so roots are component minima.
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;
  }

 private:
  std::vector<std::uint32_t> parent_;
};

}  // namespace

ComponentReport power_components(const Machine& m, std::size_t exponent,
                                 TraversalBudget budget) {
  if (exponent == 0) throw PreconditionError("power_components: exponent must be positive");
  std::optional<WordIndex> index;
  try {
    index.emplace(m.num_states(), exponent);
  } catch (const BudgetExceeded& e) {
    throw BudgetExceeded("power_components: power too large", e.required());
  }
  if (index->size() > budget.max_words || index->size() > UINT32_MAX)
    throw BudgetExceeded("power_components: " + std::to_string(index->size()) +
                             " state words exceed the traversal budget of " +
                             std::to_string(budget.max_words),
                         index->size());
  const auto size = static_cast<std::uint32_t>(index->size());
  UnionFind uf(size);
  for (std::uint32_t w = 0; w < size; ++w) {
    for (Letter i = 0; i < m.num_letters(); ++i)
      uf.unite(w, static_cast<std::uint32_t>(power_step(m, *index, w, i)));
  }
  ComponentReport report;
  report.exponent = exponent;
  report.component.resize(size);
  std::vector<std::uint32_t> number(size, UINT32_MAX);
  for (std::uint32_t w = 0; w < size; ++w) {
    const auto root = uf.find(w);
    if (number[root] == UINT32_MAX) {
      number[root] = static_cast<std::uint32_t>(report.sizes.size());
      report.sizes.push_back(0);
      report.representatives.push_back(index->decode(root));
    }
    report.component[w] = number[root];
    ++report.sizes[number[root]];
  }
  return report;
}

ComponentReport components(const Machine& m) { return power_components(m, 1); }

std::string to_string(const ConnectionDegree& d) {
  return d.finite ? std::to_string(d.value) : ">= " + std::to_string(d.value);
}

ConnectionDegree connection_degree(const Machine& m, std::size_t max_power,
                                   TraversalBudget budget) {
  for (std::size_t k = 1; k <= max_power; ++k) {
    if (!power_components(m, k, budget).connected()) return ConnectionDegree::exactly(k - 1);
  }
  return ConnectionDegree::at_least(max_power);
}

GrowthReport verify_component_growth(const Machine& m, std::size_t exponent,
                                     TraversalBudget budget) {
  if (m.num_states() != 2 || !is_reversible(m))
    throw PreconditionError("verify_component_growth: needs a reversible two-state machine");
  const auto degree = connection_degree(m, exponent + 1, budget);
  if (!degree.finite || degree.value > exponent)
    throw PreconditionError("verify_component_growth: exponent " + std::to_string(exponent) +
                            " is below the connection degree (" + to_string(degree) + ")");
  const auto report = power_components(m, exponent, budget);
  GrowthReport growth;
  growth.degree = degree.value;
  growth.exponent = exponent;
  growth.sizes = report.sizes;
  std::sort(growth.sizes.begin(), growth.sizes.end());
  const std::uint64_t expected = std::uint64_t{1} << degree.value;
  for (std::size_t c = 0; c < report.num_components(); ++c)
    if (report.sizes[c] != expected) growth.offending.push_back(report.representatives[c]);
  return growth;
}

}  // namespace mealy
