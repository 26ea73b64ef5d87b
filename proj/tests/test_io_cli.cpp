#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mealy/cli.hpp"
#include "mealy/error.hpp"
#include "mealy/io.hpp"
#include "support.hpp"

using namespace mealy;
using testing::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::string path_of(const std::string& name) {
  return std::string(MEALY_FIXTURES_DIR) + "/" + name + ".mealy";
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("mealy_test_" + name);
}

}  // namespace

TEST_CASE("parsing documents") {
  const auto triv = parse_machine("states: x; letters: a; x a -> x a");
  CHECK(triv == fixture("triv"));
  CHECK(triv == trivial_machine());

  const auto doc = parse_document(
      "# comment\nname: demo\nstates: x, y\nletters: a b\n"
      "x a -> y b  # trailing\nx b -> x a\ny a -> x a\ny b -> y b\n");
  CHECK(doc.name == "demo");
  CHECK(doc.machine.state_names() == std::vector<std::string>{"x", "y"});
  CHECK(doc.machine.delta(0, 0) == 1);
  CHECK(doc.machine.rho(0, 0) == 1);

  const auto aleshin = fixture("aleshin");
  CHECK(aleshin.state_names() == std::vector<std::string>{"x", "y", "z"});
  CHECK(aleshin.letter_names() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_machine("states: x y; letters: a b\nx a -> x a\nx b -> y b\ny a -> x a\n");
    FAIL("incomplete machine accepted");
  } catch (const IncompleteMachine& e) {
    REQUIRE(e.missing().size() == 1);
    CHECK(e.missing()[0] == std::pair<std::string, std::string>{"y", "b"});
    CHECK(std::string(e.what()).find("(y, b)") != std::string::npos);
  }
  try {
    parse_machine("states: x; letters: a\nx a -> x a\nx a -> x a\n");
    FAIL("duplicate accepted");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_machine("states: x; letters: a\nx a -> q a\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states: x; letters: a\nx a => x a\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("letters: a\n"), ParseError);
  CHECK_THROWS_AS(parse_machine("states: x x; letters: a\nx a -> x a\n"), ParseError);
  CHECK_THROWS_AS(load_document("/nonexistent/file.mealy"), Error);
}

TEST_CASE("serialization round trips") {
  for (const auto* name : {"triv", "aleshin", "baby_aleshin", "dual_aleshin", "six", "swap", "cyc"}) {
    const auto doc = load_document(path_of(name));
    const auto text = serialize(doc.machine, doc.name);
    const auto again = parse_document(text);
    CHECK(again.machine == doc.machine);
    CHECK(again.name == doc.name);
    CHECK(serialize(again.machine, again.name) == text);
    CHECK(parse_document(serialize_json(doc.machine, doc.name)).machine == doc.machine);
  }
  testing::Rng rng(testing::seed() + 80);
  for (int trial = 0; trial < 200; ++trial) {
    const auto m = testing::random_sized(rng, 6, 5);
    REQUIRE(parse_machine(serialize(m)) == m);
    REQUIRE(parse_machine(serialize_json(m)) == m);
  }
}

TEST_CASE("DOT export merges labels per edge") {
  const auto m = fixture("aleshin");
  const auto dot = to_dot(m, "aleshin");
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.back() == '\n');
  std::size_t labels = 0, pos = 0;
  while ((pos = dot.find('|', pos)) != std::string::npos) ++labels, ++pos;
  CHECK(labels == m.num_states() * m.num_letters());
  CHECK(std::count(dot.begin(), dot.end(), '{') == std::count(dot.begin(), dot.end(), '}'));

  const auto swap = to_dot(fixture("swap"), "");
  CHECK(swap.find("a|a, b|b") != std::string::npos);

  testing::Rng rng(testing::seed() + 81);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = testing::random_sized(rng, 5, 4);
    const auto d = to_dot(r, "r");
    std::size_t bars = 0;
    for (char c : d) bars += c == '|';
    REQUIRE(bars == r.num_states() * r.num_letters());
  }
}

TEST_CASE("command line: analyses") {
  const auto six = run({"portrait", path_of("six"), "1", "-k", "3"});
  CHECK(six.code == 0);
  CHECK(six.out.find("homogeneity: neither") != std::string::npos);

  const auto dec = run({"decide", path_of("dual_aleshin")});
  CHECK(dec.code == 0);
  CHECK(dec.out.rfind("free semigroup of rank 2\n", 0) == 0);
  CHECK(dec.out.find("certificate: md-reduction to 2x3") != std::string::npos);
  CHECK(dec.out.find("check: valid") != std::string::npos);

  const auto deg = run({"degree", path_of("baby_aleshin"), "--max", "5"});
  CHECK(deg.code == 0);
  CHECK(deg.out.rfind("connection degree: 1\n", 0) == 0);
  CHECK(deg.out.find("power 2: disconnected, 2 components") != std::string::npos);

  const auto semi = run({"decide", path_of("triv")});
  CHECK(semi.code == 1);
  CHECK(semi.out.rfind("semi-decision only", 0) == 0);

  const auto order = run({"order", path_of("dual_aleshin"), "--max-elements", "200"});
  CHECK(order.code == 1);
  const auto swap_order = run({"order", path_of("swap")});
  CHECK(swap_order.code == 0);
  CHECK(swap_order.out.rfind("semigroup order: 1\n", 0) == 0);

  const auto info = run({"info", path_of("swap")});
  CHECK(info.code == 0);
  CHECK(info.out.find("md-trivial: yes") != std::string::npos);

  const auto reduce = run({"reduce", path_of("swap")});
  CHECK(reduce.code == 0);
  CHECK(reduce.out.find("(md-trivial)") != std::string::npos);
}

TEST_CASE("command line: transformations") {
  const auto dual_out = run({"dual", path_of("aleshin")});
  CHECK(dual_out.code == 0);
  CHECK(parse_machine(dual_out.out) == fixture("dual_aleshin"));

  const auto p = run({"power", path_of("aleshin"), "2"});
  CHECK(p.code == 0);
  CHECK(parse_machine(p.out).num_states() == 9);

  const auto mini = run({"minimize", path_of("swap"), "--json"});
  CHECK(mini.code == 0);
  CHECK(nlohmann::json::parse(mini.out)["states"].size() == 1);

  const auto closure = run({"closure", path_of("swap")});
  CHECK(closure.code == 0);
  CHECK(parse_machine(closure.out).letter_names() == std::vector<std::string>{"a", "aa"});

  const auto dot = temp_file("aleshin.dot");
  CHECK(run({"info", path_of("aleshin"), "--dot", dot.string()}).code == 0);
  std::ifstream in(dot);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("digraph", 0) == 0);
  std::filesystem::remove(dot);
}

TEST_CASE("command line: census") {
  const auto csv = temp_file("census.csv");
  const auto r = run({"census", "--states", "2", "--letters", "2", "--filter",
                      "invertible,reversible", "--csv", csv.string()});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["machines"] == 16);
  std::ifstream in(csv);
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  CHECK(lines == 17);
  std::filesystem::remove(csv);

  const auto counts = run({"census", "--states", "3", "--counts"});
  CHECK(counts.code == 0);
  CHECK(nlohmann::json::parse(counts.out)["counts"]["up_to_iso"] == 28);
}

TEST_CASE("command line: exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"info", "/nonexistent.mealy"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"power", path_of("aleshin")}).code == 2);
  CHECK(run({"power", path_of("aleshin"), "40"}).code == 1);
  CHECK(run({"portrait", path_of("six"), "q", "-k", "2"}).code == 2);
  CHECK(run({"census", "--filter", "shiny"}).code == 2);

  const auto bad = temp_file("bad.mealy");
  std::ofstream(bad) << "states: x y\nletters: a\nx a -> x a\n";
  const auto r = run({"info", bad.string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("(y, a)") != std::string::npos);
  CHECK(r.out.empty());
  std::filesystem::remove(bad);
}
