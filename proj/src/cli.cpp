#include "mealy/cli.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "mealy/canonical.hpp"
#include "mealy/connectivity.hpp"
#include "mealy/decide.hpp"
#include "mealy/error.hpp"
#include "mealy/harness.hpp"
#include "mealy/io.hpp"
#include "mealy/mdreduce.hpp"
#include "mealy/minimize.hpp"
#include "mealy/portrait.hpp"
#include "mealy/semigroup.hpp"

namespace mealy {

namespace {

struct Settings {
  std::string file;
  std::string dot;
  std::size_t max_power = 16;
  std::size_t max_elements = SemigroupLimits{}.max_elements;
  std::size_t max_depth = SemigroupLimits{}.max_depth;
  bool json = false;

  SemigroupLimits limits() const { return {max_elements, max_depth}; }
  DecideOptions decide() const {
    DecideOptions o;
    o.max_power = max_power;
    o.limits = limits();
    return o;
  }
};

const char* yes(bool b) { return b ? "yes" : "no"; }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

// State word from "x.y.z" or, without dots, by longest-name matching.
StateWord parse_state_word(const Machine& m, const std::string& text) {
  StateWord out;
  auto fail = [&](const std::string& why) {
    return ParseError("state word '" + text + "': " + why, 1, 1);
  };
  if (text.find('.') != std::string::npos) {
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, '.')) {
      auto s = m.find_state(part);
      if (!s) throw fail("unknown state '" + part + "'");
      out.push_back(*s);
    }
  } else {
    std::size_t p = 0;
    while (p < text.size()) {
      std::optional<State> best;
      std::size_t best_len = 0;
      for (State x = 0; x < m.num_states(); ++x) {
        const auto& n = m.state_name(x);
        if (n.size() > best_len && text.compare(p, n.size(), n) == 0) {
          best = x;
          best_len = n.size();
        }
      }
      if (!best) throw fail("no state name at position " + std::to_string(p + 1));
      out.push_back(*best);
      p += best_len;
    }
  }
  if (out.empty()) throw fail("empty");
  return out;
}

void print_machine(const Machine& m, const Settings& s, std::ostream& out,
                   const std::string& name = {}) {
  out << (s.json ? serialize_json(m, name) : serialize(m, name));
  if (!s.dot.empty()) write_file(s.dot, to_dot(m, name));
}

std::string dims(const Machine& m) {
  return std::to_string(m.num_states()) + "x" + std::to_string(m.num_letters());
}

void print_trace(const ReductionTrace& t, std::ostream& out) {
  std::size_t n = 0;
  for (const auto& step : t.steps)
    out << "step " << ++n << ": "
        << (step.side == ReductionStep::Side::primal ? "minimize" : "minimize dual") << ' '
        << step.states_before << 'x' << step.letters_before << " -> " << step.states_after
        << 'x' << step.letters_after << '\n';
  out << "result: " << dims(t.result) << (t.trivial() ? " (md-trivial)" : " (not md-trivial)")
      << '\n';
}

int cmd_info(const Settings& s, std::ostream& out) {
  const auto doc = load_document(s.file);
  const auto& m = doc.machine;
  if (!doc.name.empty()) out << "name: " << doc.name << '\n';
  out << "states: " << m.num_states() << '\n'
      << "letters: " << m.num_letters() << '\n'
      << "invertible: " << yes(is_invertible(m)) << '\n'
      << "reversible: " << yes(is_reversible(m)) << '\n'
      << "bireversible: " << yes(is_bireversible(m)) << '\n'
      << "minimal: " << yes(is_minimal(m)) << '\n'
      << "dual minimal: " << yes(is_minimal(dual(m))) << '\n'
      << "connected: " << yes(components(m).connected()) << '\n'
      << "md-trivial: " << yes(is_md_trivial(m)) << '\n'
      << "canonical key: " << canonical_form(m).hex() << '\n';
  if (!s.dot.empty()) write_file(s.dot, to_dot(m, doc.name));
  return exit_ok;
}

int cmd_degree(const Settings& s, std::ostream& out) {
  const auto m = load_document(s.file).machine;
  const auto d = connection_degree(m, s.max_power);
  out << "connection degree: " << to_string(d) << '\n';
  const auto last = d.finite ? d.value + 1 : d.value;
  for (std::size_t e = 1; e <= last; ++e) {
    const auto c = power_components(m, e);
    out << "power " << e << ": "
        << (c.connected() ? std::string("connected")
                          : "disconnected, " + std::to_string(c.num_components()) + " components")
        << '\n';
  }
  return exit_ok;
}

int cmd_portrait(const Settings& s, const std::string& word, std::size_t k, std::ostream& out) {
  const auto m = load_document(s.file).machine;
  const auto u = parse_state_word(m, word);
  const auto p = portrait_of(m, u, k);
  out << portrait_tree(p, m.letter_names());
  const auto h = classify_homogeneity(p);
  out << "homogeneity: "
      << (h.kind == Homogeneity::homogeneous          ? "homogeneous"
          : h.kind == Homogeneity::almost_homogeneous ? "almost homogeneous"
                                                      : "neither")
      << '\n';
  if (!s.dot.empty()) write_file(s.dot, portrait_dot(p, m.letter_names()));
  return exit_ok;
}

int cmd_order(const Settings& s, std::ostream& out) {
  const auto doc = load_document(s.file);
  const auto table = enumerate_semigroup(doc.machine, s.limits());
  if (s.json) {
    out << table.to_json(doc.machine.state_names()) << '\n';
  } else {
    out << "semigroup order: " << (table.finite() ? "" : ">= ") << table.order() << '\n';
    if (table.finite()) out << "certified depth: " << table.certified_depth() << '\n';
  }
  return table.finite() ? exit_ok : exit_budget;
}

int cmd_closure(const Settings& s, std::ostream& out) {
  const auto doc = load_document(s.file);
  const auto closure = tensor_closure(doc.machine, s.limits());
  print_machine(closure.machine, s, out, doc.name.empty() ? "" : doc.name + "_closure");
  return exit_ok;
}

int cmd_decide(const Settings& s, std::ostream& out) {
  const auto m = load_document(s.file).machine;
  const auto v = decide_by_shape(m, s.decide());
  if (!v) {
    out << "semi-decision only: no decision procedure applies to a " << dims(m)
        << " machine (needs 2 reversible states, or 2 letters with invertible and reversible)\n";
    return exit_budget;
  }
  if (s.json) {
    out << v->to_json() << '\n';
  } else {
    out << v->headline() << '\n';
    out << "certificate: " << certificate_summary(*v) << '\n';
    if (v->evidence.reduction) print_trace(*v->evidence.reduction, out);
    const auto check = check_certificate(m, *v);
    out << "check: " << (check.valid ? "valid" : "INVALID") << " (" << check.reason << ")\n";
    if (!check.valid) return exit_internal;
  }
  return v->kind == VerdictKind::unknown ? exit_budget : exit_ok;
}

struct CensusSettings {
  std::size_t states = 2;
  std::size_t letters = 2;
  std::vector<std::string> filters;
  std::string symmetry = "labeled";
  std::string csv;
  std::string json;
  std::string journal;
  std::size_t jobs = 1;
  bool counts = false;
};

int cmd_census(const Settings& s, const CensusSettings& c, std::ostream& out) {
  FamilySpec spec;
  spec.n_states = c.states;
  spec.n_letters = c.letters;
  for (const auto& f : c.filters) {
    if (f == "invertible") spec.filters.invertible = true;
    else if (f == "reversible") spec.filters.reversible = true;
    else if (f == "bireversible") spec.filters.bireversible = true;
    else if (f == "connected") spec.filters.connected = true;
    else if (f == "minimal") spec.filters.minimal = true;
    else throw ParseError("unknown filter '" + f + "'", 1, 1);
  }
  if (c.symmetry == "labeled") spec.symmetry = SymmetryMode::labeled;
  else if (c.symmetry == "states") spec.symmetry = SymmetryMode::states_only;
  else if (c.symmetry == "iso") spec.symmetry = SymmetryMode::up_to_iso;
  else throw ParseError("unknown symmetry '" + c.symmetry + "'", 1, 1);

  if (c.counts) {
    if (c.letters != 2) throw PreconditionError("census --counts: only two-letter families");
    const auto r = count_bireversible_2letter(c.states, c.jobs);
    const auto text = r.to_json();
    out << text;
    if (!c.json.empty()) write_file(c.json, text);
    return exit_ok;
  }
  CensusOptions options;
  options.jobs = c.jobs;
  options.decide = s.decide();
  options.journal = c.journal;
  const auto report = classify_family(spec, Analyses{}, options);
  if (!c.csv.empty()) write_file(c.csv, report.to_csv());
  if (!c.json.empty()) write_file(c.json, report.to_json());
  out << report.to_json();
  return exit_ok;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analysis of Mealy automata and the semigroups they generate", "mealy"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_option("--max-power", s.max_power, "largest power explored")->capture_default_str();
  app.add_option("--max-elements", s.max_elements, "semigroup element budget")
      ->capture_default_str();
  app.add_option("--max-depth", s.max_depth, "semigroup certificate depth budget")
      ->capture_default_str();

  std::function<int()> action;
  auto with_file = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("file", s.file, "machine file")->required();
    return sub;
  };
  auto dot_flag = [&](CLI::App* sub) { sub->add_option("--dot", s.dot, "write Graphviz output"); };
  auto json_flag = [&](CLI::App* sub) { sub->add_flag("--json", s.json, "JSON output"); };

  auto* info = with_file("info", "sizes and predicates");
  dot_flag(info);
  info->callback([&] { action = [&] { return cmd_info(s, out); }; });

  auto* minimize_cmd = with_file("minimize", "Nerode quotient");
  dot_flag(minimize_cmd);
  json_flag(minimize_cmd);
  minimize_cmd->callback([&] {
    action = [&] {
      print_machine(minimize(load_document(s.file).machine), s, out);
      return int(exit_ok);
    };
  });

  auto* dual_cmd = with_file("dual", "exchange states and letters");
  dot_flag(dual_cmd);
  json_flag(dual_cmd);
  dual_cmd->callback([&] {
    action = [&] {
      print_machine(dual(load_document(s.file).machine), s, out);
      return int(exit_ok);
    };
  });

  std::size_t exponent = 1;
  auto* power_cmd = with_file("power", "n-th power on state words");
  power_cmd->add_option("n", exponent, "exponent")->required()->check(CLI::PositiveNumber);
  dot_flag(power_cmd);
  json_flag(power_cmd);
  power_cmd->callback([&] {
    action = [&] {
      print_machine(power(load_document(s.file).machine, exponent), s, out);
      return int(exit_ok);
    };
  });

  std::string order_name = "primal";
  auto* reduce_cmd = with_file("reduce", "md-reduction trace");
  reduce_cmd->add_option("--first", order_name, "side minimized first")
      ->check(CLI::IsMember({"primal", "dual"}));
  dot_flag(reduce_cmd);
  json_flag(reduce_cmd);
  reduce_cmd->callback([&] {
    action = [&] {
      const auto trace =
          md_reduce(load_document(s.file).machine,
                    order_name == "dual" ? ReductionOrder::dual_first : ReductionOrder::primal_first);
      print_trace(trace, out);
      print_machine(trace.result, s, out);
      return int(exit_ok);
    };
  });

  auto* degree_cmd = with_file("degree", "connection degree with certificates");
  degree_cmd->add_option("--max", s.max_power, "largest power explored");
  degree_cmd->callback([&] { action = [&] { return cmd_degree(s, out); }; });

  std::string word;
  std::size_t depth = 3;
  auto* portrait_cmd = with_file("portrait", "portrait of a state word");
  portrait_cmd->add_option("word", word, "state word, e.g. xy or x.y")->required();
  portrait_cmd->add_option("-k,--depth", depth, "tree depth")->capture_default_str()->check(
      CLI::PositiveNumber);
  dot_flag(portrait_cmd);
  portrait_cmd->callback([&] { action = [&] { return cmd_portrait(s, word, depth, out); }; });

  auto* closure_cmd = with_file("closure", "tensor closure");
  dot_flag(closure_cmd);
  json_flag(closure_cmd);
  closure_cmd->callback([&] { action = [&] { return cmd_closure(s, out); }; });

  auto* order_cmd = with_file("order", "order of the generated semigroup");
  json_flag(order_cmd);
  order_cmd->callback([&] { action = [&] { return cmd_order(s, out); }; });

  auto* decide_cmd = with_file("decide", "finiteness and freeness decisions");
  json_flag(decide_cmd);
  decide_cmd->callback([&] { action = [&] { return cmd_decide(s, out); }; });

  CensusSettings c;
  auto* census_cmd = app.add_subcommand("census", "classify a family of machines");
  census_cmd->add_option("--states", c.states, "number of states")->capture_default_str();
  census_cmd->add_option("--letters", c.letters, "number of letters")->capture_default_str();
  census_cmd->add_option("--filter", c.filters,
                         "invertible, reversible, bireversible, connected, minimal")
      ->delimiter(',');
  census_cmd->add_option("--symmetry", c.symmetry, "labeled, states or iso")
      ->capture_default_str();
  census_cmd->add_option("--csv", c.csv, "per-machine CSV report");
  census_cmd->add_option("--json", c.json, "JSON summary");
  census_cmd->add_option("--journal", c.journal, "resume journal");
  census_cmd->add_option("--jobs", c.jobs, "worker threads")->capture_default_str();
  census_cmd->add_flag("--counts", c.counts,
                       "count two-letter bireversible machines under every equivalence");
  census_cmd->callback([&] { action = [&] { return cmd_census(s, c, out); }; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return exit_ok;
    }
    err << "mealy: " << e.what() << '\n';
    return exit_input;
  }
  try {
    return action();
  } catch (const BudgetExceeded& e) {
    err << "mealy: budget exceeded: " << e.what() << '\n';
    return exit_budget;
  } catch (const InternalError& e) {
    err << "mealy: internal error: " << e.what() << '\n';
    return exit_internal;
  } catch (const Error& e) {
    err << "mealy: " << e.what() << '\n';
    return exit_input;
  }
}

}  // namespace mealy
