#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mealy/error.hpp"
#include "mealy/machine.hpp"

namespace mealy {

/// A parsed machine file.
struct MachineDocument {
  std::string name;
  Machine machine = trivial_machine();
};

/// Some (state, letter) pairs have no transition.
class IncompleteMachine : public ParseError {
 public:
  IncompleteMachine(const std::string& what, std::size_t line,
                    std::vector<std::pair<std::string, std::string>> missing)
      : ParseError(what, line, 1), missing_(std::move(missing)) {}

  const std::vector<std::pair<std::string, std::string>>& missing() const noexcept {
    return missing_;
  }

 private:
  std::vector<std::pair<std::string, std::string>> missing_;
};

/// Parses the line-based text format
///
///     # comment
///     name: aleshin
///     states: x y z
///     letters: a b
///     x a -> z b
///
/// where `;` may also end a statement and list items may be separated by
/// commas. A document starting with `{` is read as JSON:
/// {"name", "states", "letters", "transitions": [{"from", "input", "to", "output"}]}.
MachineDocument parse_document(const std::string& text);
Machine parse_machine(const std::string& text);

/// Reads and parses a file; throws Error when it cannot be read.
MachineDocument load_document(const std::string& path);

/// Normalized text form: header lines, then transitions by state and letter.
std::string serialize(const Machine& m, const std::string& name = {});
std::string serialize_json(const Machine& m, const std::string& name = {});

/// Graphviz digraph with one edge per (source, target) pair, labelled with
/// every "input|output" it carries, e.g. "a|a, b|b".
std::string to_dot(const Machine& m, const std::string& name = {});

}  // namespace mealy
