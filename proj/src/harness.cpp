#include "mealy/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "mealy/connectivity.hpp"
#include "mealy/error.hpp"
#include "mealy/mdreduce.hpp"
#include "mealy/minimize.hpp"
#include "mealy/semigroup.hpp"

namespace mealy {

std::string to_string(SymmetryMode s) {
  switch (s) {
    case SymmetryMode::labeled: return "labeled";
    case SymmetryMode::states_only: return "states_only";
    case SymmetryMode::up_to_iso: return "up_to_iso";
  }
  return "labeled";
}

void FamilySpec::validate() const {
  if (n_states == 0 || n_letters == 0)
    throw PreconditionError("FamilySpec: at least one state and one letter are required");
}

namespace {

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a)
    return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r = saturating_mul(r, base);
  return r;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t r = 1;
  for (std::size_t i = 2; i <= n; ++i) r = saturating_mul(r, i);
  return r;
}

bool wants_perm_delta(const Filters& f) { return f.reversible || f.bireversible; }
bool wants_perm_rho(const Filters& f) { return f.invertible || f.bireversible; }

// All permutations (lexicographic) or all maps (odometer order) of {0..n-1}.
std::vector<std::vector<std::uint32_t>> choices(std::size_t n, bool permutations) {
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> f(n, 0);
  if (permutations) {
    std::iota(f.begin(), f.end(), 0);
    do out.push_back(f);
    while (std::next_permutation(f.begin(), f.end()));
    return out;
  }
  while (true) {
    out.push_back(f);
    std::size_t p = n;
    while (p > 0 && f[p - 1] + 1 == n) f[--p] = 0;
    if (p == 0) break;
    ++f[p - 1];
  }
  return out;
}

bool weakly_connected(const TableView& t) {
  std::vector<State> parent(t.states);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](State x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::size_t comps = t.states;
  for (Letter i = 0; i < t.letters; ++i)
    for (State x = 0; x < t.states; ++x) {
      const auto a = find(x), b = find(t.delta[i * t.states + x]);
      if (a != b) {
        parent[a] = b;
        --comps;
      }
    }
  return comps == 1;
}

bool rows_are_perms(const TableView& t) {
  std::vector<bool> hit(t.letters);
  for (State x = 0; x < t.states; ++x) {
    std::fill(hit.begin(), hit.end(), false);
    for (Letter i = 0; i < t.letters; ++i) {
      const auto o = t.rho[x * t.letters + i];
      if (hit[o]) return false;
      hit[o] = true;
    }
  }
  return true;
}

bool columns_are_perms(const TableView& t) {
  std::vector<bool> hit(t.states);
  for (Letter i = 0; i < t.letters; ++i) {
    std::fill(hit.begin(), hit.end(), false);
    for (State x = 0; x < t.states; ++x) {
      const auto y = t.delta[i * t.states + x];
      if (hit[y]) return false;
      hit[y] = true;
    }
  }
  return true;
}

// The inverse machine moves x on output letter o to δ_{ρ_x^{-1}(o)}(x).
bool inverse_reversible(const TableView& t) {
  std::vector<bool> hit(t.states);
  std::vector<Letter> pre(t.letters);
  std::vector<State> column(t.letters * t.states);
  for (State x = 0; x < t.states; ++x) {
    for (Letter i = 0; i < t.letters; ++i) pre[t.rho[x * t.letters + i]] = i;
    for (Letter o = 0; o < t.letters; ++o) column[o * t.states + x] = t.delta[pre[o] * t.states + x];
  }
  for (Letter o = 0; o < t.letters; ++o) {
    std::fill(hit.begin(), hit.end(), false);
    for (State x = 0; x < t.states; ++x) {
      const auto y = column[o * t.states + x];
      if (hit[y]) return false;
      hit[y] = true;
    }
  }
  return true;
}

std::vector<std::string> default_names(std::size_t n, bool letters) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (letters && n <= 26)
      out.emplace_back(1, static_cast<char>('a' + i));
    else
      out.push_back((letters ? "l" : "") + std::to_string(i));
  }
  return out;
}

}  // namespace

std::uint64_t FamilySpec::universe_size() const {
  const auto d = wants_perm_delta(filters) ? factorial(n_states) : saturating_pow(n_states, n_states);
  const auto r =
      wants_perm_rho(filters) ? factorial(n_letters) : saturating_pow(n_letters, n_letters);
  return saturating_mul(saturating_pow(d, n_letters), saturating_pow(r, n_states));
}

Machine machine_from_view(const TableView& t) {
  return Machine(MachineTables{default_names(t.states, false), default_names(t.letters, true),
                               std::vector<State>(t.delta.begin(), t.delta.end()),
                               std::vector<Letter>(t.rho.begin(), t.rho.end())});
}

std::string table_code(const TableView& t) { return identity_key(t).hex(); }

void enumerate_family(const FamilySpec& spec, const std::function<bool(const TableView&)>& emit,
                      EnumerationBudget budget, Shard shard) {
  spec.validate();
  if (shard.count == 0 || shard.index >= shard.count)
    throw PreconditionError("enumerate_family: invalid shard");
  const auto universe = spec.universe_size();
  if (universe > budget.max_candidates)
    throw BudgetExceeded("enumerate_family: universe of " + std::to_string(universe) +
                             " candidates exceeds the budget",
                         universe);
  const auto n = spec.n_states, k = spec.n_letters;
  const auto& f = spec.filters;
  const auto dc = choices(n, wants_perm_delta(f));
  const auto rc = choices(k, wants_perm_rho(f));
  std::vector<State> delta(n * k);
  std::vector<Letter> rho(n * k);
  const TableView t{n, k, delta, rho};
  const Symmetry sym = spec.symmetry == SymmetryMode::states_only ? Symmetry::states_only
                                                                  : Symmetry::states_and_letters;

  auto accept = [&]() {
    if ((f.reversible || f.bireversible) && !columns_are_perms(t)) return false;
    if ((f.invertible || f.bireversible) && !rows_are_perms(t)) return false;
    if (f.bireversible && !inverse_reversible(t)) return false;
    if (f.connected && !weakly_connected(t)) return false;
    if (spec.symmetry != SymmetryMode::labeled &&
        !(canonical_labelling(t, sym).key == identity_key(t)))
      return false;
    if (f.minimal && !is_minimal(Machine::trusted(
                         MachineTables{default_names(n, false), default_names(k, true), delta, rho})))
      return false;
    return true;
  };

  // Digits 0..k-1 choose δ columns, k..k+n-1 choose ρ rows.
  bool stop = false;
  std::function<void(std::size_t)> fill = [&](std::size_t level) {
    if (stop) return;
    if (level == k + n) {
      if (accept() && !emit(t)) stop = true;
      return;
    }
    if (level < k) {
      const std::size_t step = level == 0 ? shard.count : 1;
      for (std::size_t c = level == 0 ? shard.index : 0; c < dc.size() && !stop; c += step) {
        std::copy(dc[c].begin(), dc[c].end(), delta.begin() + level * n);
        fill(level + 1);
      }
    } else {
      const auto x = level - k;
      for (const auto& row : rc) {
        if (stop) return;
        std::copy(row.begin(), row.end(), rho.begin() + x * k);
        fill(level + 1);
      }
    }
  };
  fill(0);
}

std::vector<Machine> family_machines(const FamilySpec& spec, EnumerationBudget budget) {
  std::vector<Machine> out;
  enumerate_family(
      spec,
      [&](const TableView& t) {
        out.push_back(machine_from_view(t));
        return true;
      },
      budget);
  return out;
}

CensusRow classify_machine(const Machine& m, const Analyses& analyses,
                           const DecideOptions& options) {
  CensusRow row;
  const auto t = view(m);
  row.table = table_code(t);
  row.invertible = is_invertible(m);
  row.reversible = is_reversible(m);
  row.bireversible = is_bireversible(m);
  row.connected = weakly_connected(t);
  row.minimal = is_minimal(m);
  row.status = "ok";
  try {
    row.key = canonical_form(m).hex();
  } catch (const BudgetExceeded&) {
    row.key = row.table;
  }
  auto guarded = [&](auto&& body) {
    try {
      body();
    } catch (const BudgetExceeded& e) {
      row.status = std::string("budget: ") + e.what();
    }
  };
  if (analyses.md_triviality) guarded([&] { row.md_trivial = is_md_trivial(m) ? "yes" : "no"; });
  if (analyses.verdict)
    guarded([&] {
      const auto v = decide_by_shape(m, options);
      row.verdict = v ? to_string(v->kind) : "n/a";
      if (v) row.certificate = certificate_summary(*v);
    });
  if (analyses.connection_degree)
    guarded([&] { row.degree = to_string(connection_degree(m, options.max_power, options.traversal)); });
  if (analyses.semigroup_order)
    guarded([&] { row.order = to_string(semigroup_order(m, options.limits)); });
  return row;
}

namespace {

const char* kColumns[] = {"key",       "table",      "invertible", "reversible", "bireversible",
                          "connected", "minimal",    "md_trivial", "verdict",    "certificate",
                          "degree",    "order",      "status"};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string row_line(const CensusRow& r) {
  auto b = [](bool v) { return std::string(v ? "1" : "0"); };
  const std::string fields[] = {r.key,         r.table,      b(r.invertible), b(r.reversible),
                                b(r.bireversible), b(r.connected), b(r.minimal), r.md_trivial,
                                r.verdict,     r.certificate, r.degree,       r.order,
                                r.status};
  std::string out;
  for (std::size_t i = 0; i < std::size(fields); ++i) out += (i ? "," : "") + csv_field(fields[i]);
  return out;
}

std::optional<CensusRow> parse_row(const std::string& line) {
  const auto f = split_csv(line);
  if (f.size() != std::size(kColumns)) return std::nullopt;
  CensusRow r;
  r.key = f[0];
  r.table = f[1];
  r.invertible = f[2] == "1";
  r.reversible = f[3] == "1";
  r.bireversible = f[4] == "1";
  r.connected = f[5] == "1";
  r.minimal = f[6] == "1";
  r.md_trivial = f[7];
  r.verdict = f[8];
  r.certificate = f[9];
  r.degree = f[10];
  r.order = f[11];
  r.status = f[12];
  return r;
}

}  // namespace

std::string CensusReport::to_csv() const {
  std::string out;
  for (std::size_t i = 0; i < std::size(kColumns); ++i) out += (i ? "," : "") + std::string(kColumns[i]);
  out += '\n';
  for (const auto& r : rows) out += row_line(r) + '\n';
  return out;
}

std::string CensusReport::to_json() const {
  nlohmann::json j;
  j["n_states"] = spec.n_states;
  j["n_letters"] = spec.n_letters;
  j["filters"] = {{"invertible", spec.filters.invertible},
                  {"reversible", spec.filters.reversible},
                  {"bireversible", spec.filters.bireversible},
                  {"connected", spec.filters.connected},
                  {"minimal", spec.filters.minimal}};
  j["symmetry"] = to_string(spec.symmetry);
  j["machines"] = rows.size();
  j["verdict_counts"] = verdict_counts;
  j["budget_exceeded"] = budget_exceeded;
  j["resumed"] = resumed;
  j["elapsed_ms"] = elapsed_ms;
  return j.dump(2) + "\n";
}

CensusReport classify_family(const FamilySpec& spec, const Analyses& analyses,
                             const CensusOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  const auto machines = family_machines(spec, options.budget);
  CensusReport report;
  report.spec = spec;
  report.rows.resize(machines.size());

  std::unordered_map<std::string, CensusRow> done;
  if (!options.journal.empty()) {
    std::ifstream in(options.journal);
    std::string line;
    while (std::getline(in, line))
      if (auto r = parse_row(line)) done.emplace(r->table, *r);
  }
  std::vector<bool> ready(machines.size(), false);
  for (std::size_t i = 0; i < machines.size(); ++i) {
    auto it = done.find(table_code(view(machines[i])));
    if (it != done.end()) {
      report.rows[i] = it->second;
      ready[i] = true;
      ++report.resumed;
    }
  }

  std::ofstream journal;
  if (!options.journal.empty()) journal.open(options.journal, std::ios::app);
  std::mutex journal_mutex;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    while (true) {
      const auto i = next.fetch_add(1);
      if (i >= machines.size()) return;
      if (ready[i]) continue;
      report.rows[i] = classify_machine(machines[i], analyses, options.decide);
      if (journal.is_open()) {
        std::lock_guard lock(journal_mutex);
        journal << row_line(report.rows[i]) << '\n' << std::flush;
      }
    }
  };
  const auto jobs = std::max<std::size_t>(1, options.jobs);
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::sort(report.rows.begin(), report.rows.end(), [](const CensusRow& a, const CensusRow& b) {
    return std::tie(a.key, a.table) < std::tie(b.key, b.table);
  });
  for (const auto& r : report.rows) {
    if (analyses.verdict) ++report.verdict_counts[r.verdict.empty() ? "none" : r.verdict];
    if (r.status != "ok") ++report.budget_exceeded;
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<std::string> BireversibleCount::modes_equal_to(std::uint64_t target) const {
  std::vector<std::string> out;
  const std::pair<const char*, std::uint64_t> modes[] = {
      {"labeled", labeled},
      {"states_only", states_only},
      {"up_to_iso", up_to_iso},
      {"up_to_iso_connected", iso_connected},
      {"up_to_iso_minimal", iso_minimal},
      {"up_to_iso_connected_minimal", iso_connected_minimal}};
  for (const auto& [name, value] : modes)
    if (value == target) out.emplace_back(name);
  return out;
}

std::string BireversibleCount::to_json(std::uint64_t target) const {
  nlohmann::json j;
  j["n_states"] = n_states;
  j["n_letters"] = 2;
  j["counts"] = {{"labeled", labeled},
                 {"states_only", states_only},
                 {"up_to_iso", up_to_iso},
                 {"up_to_iso_connected", iso_connected},
                 {"up_to_iso_minimal", iso_minimal},
                 {"up_to_iso_connected_minimal", iso_connected_minimal}};
  j["up_to_iso_md_trivial"] = iso_md_trivial;
  j["target"] = target;
  j["modes_matching_target"] = modes_equal_to(target);
  j["enumerate_ms"] = enumerate_ms;
  j["md_triviality_ms"] = md_ms;
  return j.dump(2) + "\n";
}

BireversibleCount count_bireversible_2letter(std::size_t n_states, std::size_t jobs) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  FamilySpec spec;
  spec.n_states = n_states;
  spec.n_letters = 2;
  spec.filters.bireversible = true;

  struct Partial {
    BireversibleCount counts;
    std::vector<Machine> representatives;
  };
  jobs = std::max<std::size_t>(1, jobs);
  std::vector<Partial> parts(jobs);
  auto run = [&](std::size_t s) {
    auto& p = parts[s];
    enumerate_family(
        spec,
        [&](const TableView& t) {
          ++p.counts.labeled;
          const auto own = identity_key(t);
          if (canonical_labelling(t, Symmetry::states_only).key == own) ++p.counts.states_only;
          if (!(canonical_labelling(t, Symmetry::states_and_letters).key == own)) return true;
          ++p.counts.up_to_iso;
          const bool connected = weakly_connected(t);
          auto m = machine_from_view(t);
          const bool minimal = is_minimal(m);
          p.counts.iso_connected += connected;
          p.counts.iso_minimal += minimal;
          p.counts.iso_connected_minimal += connected && minimal;
          p.representatives.push_back(std::move(m));
          return true;
        },
        {}, Shard{s, jobs});
  };
  std::vector<std::thread> pool;
  for (std::size_t s = 1; s < jobs; ++s) pool.emplace_back(run, s);
  run(0);
  for (auto& t : pool) t.join();

  BireversibleCount total;
  total.n_states = n_states;
  std::vector<Machine> reps;
  for (auto& p : parts) {
    total.labeled += p.counts.labeled;
    total.states_only += p.counts.states_only;
    total.up_to_iso += p.counts.up_to_iso;
    total.iso_connected += p.counts.iso_connected;
    total.iso_minimal += p.counts.iso_minimal;
    total.iso_connected_minimal += p.counts.iso_connected_minimal;
    for (auto& m : p.representatives) reps.push_back(std::move(m));
  }
  const auto mid = clock::now();
  total.enumerate_ms = std::chrono::duration<double, std::milli>(mid - start).count();
  for (const auto& m : reps) total.iso_md_trivial += is_md_trivial(m);
  total.md_ms = std::chrono::duration<double, std::milli>(clock::now() - mid).count();
  return total;
}

}  // namespace mealy
