#include "mealy/io.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <json.hpp>

namespace mealy {

namespace {

struct Token {
  std::string text;
  std::size_t column;
};

bool name_char(char c) {
  return !(c == ' ' || c == '\t' || c == '\r' || c == ',' || c == ';' || c == '#' || c == ':');
}

// Splits one statement into tokens; ':' and "->" are tokens of their own.
std::vector<Token> tokenize(const std::string& line, std::size_t from, std::size_t to) {
  std::vector<Token> out;
  std::size_t p = from;
  while (p < to) {
    const char c = line[p];
    if (c == ' ' || c == '\t' || c == '\r' || c == ',') {
      ++p;
    } else if (c == ':') {
      out.push_back({":", p + 1});
      ++p;
    } else if (c == '-' && p + 1 < to && line[p + 1] == '>') {
      out.push_back({"->", p + 1});
      p += 2;
    } else {
      const auto start = p;
      while (p < to && name_char(line[p]) && !(line[p] == '-' && p + 1 < to && line[p + 1] == '>'))
        ++p;
      out.push_back({line.substr(start, p - start), start + 1});
    }
  }
  return out;
}

struct Transition {
  std::string from, input, to, output;
  std::size_t line, column;
};

struct RawDocument {
  std::string name;
  std::vector<std::string> states, letters;
  std::size_t states_line = 0, letters_line = 0;
  std::vector<Transition> transitions;
  std::size_t last_line = 1;
};

MachineDocument build(const RawDocument& raw) {
  if (raw.states_line == 0) throw ParseError("missing 'states:' declaration", raw.last_line, 1);
  if (raw.letters_line == 0) throw ParseError("missing 'letters:' declaration", raw.last_line, 1);
  auto index = [](const std::vector<std::string>& names, std::size_t line, const char* what) {
    std::map<std::string, std::uint32_t> out;
    for (const auto& n : names)
      if (!out.emplace(n, static_cast<std::uint32_t>(out.size())).second)
        throw ParseError(std::string("duplicate ") + what + " '" + n + "'", line, 1);
    if (out.empty()) throw ParseError(std::string("no ") + what + "s declared", line, 1);
    return out;
  };
  const auto states = index(raw.states, raw.states_line, "state");
  const auto letters = index(raw.letters, raw.letters_line, "letter");
  const auto n = states.size(), k = letters.size();
  MachineTables tables{raw.states, raw.letters, std::vector<State>(n * k),
                       std::vector<Letter>(n * k)};
  std::vector<bool> seen(n * k, false);
  for (const auto& t : raw.transitions) {
    auto look = [&](const std::map<std::string, std::uint32_t>& names, const std::string& key,
                    const char* what) {
      auto it = names.find(key);
      if (it == names.end())
        throw ParseError(std::string("unknown ") + what + " '" + key + "'", t.line, t.column);
      return it->second;
    };
    const auto x = look(states, t.from, "state");
    const auto i = look(letters, t.input, "letter");
    const auto y = look(states, t.to, "state");
    const auto j = look(letters, t.output, "letter");
    if (seen[x * k + i])
      throw ParseError("duplicate transition for state '" + t.from + "' on letter '" + t.input +
                           "'",
                       t.line, t.column);
    seen[x * k + i] = true;
    tables.delta[i * n + x] = y;
    tables.rho[x * k + i] = j;
  }
  std::vector<std::pair<std::string, std::string>> missing;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t i = 0; i < k; ++i)
      if (!seen[x * k + i]) missing.emplace_back(raw.states[x], raw.letters[i]);
  if (!missing.empty()) {
    std::string list;
    for (const auto& [s, l] : missing) list += (list.empty() ? "" : ", ") + ("(" + s + ", " + l + ")");
    throw IncompleteMachine("missing transitions: " + list, raw.last_line, std::move(missing));
  }
  return {raw.name, Machine(std::move(tables))};
}

RawDocument read_text(const std::string& text) {
  RawDocument raw;
  std::istringstream in(text);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    raw.last_line = number;
    std::size_t end = line.find('#');
    if (end == std::string::npos) end = line.size();
    std::size_t from = 0;
    while (from <= end) {
      std::size_t stop = line.find(';', from);
      if (stop == std::string::npos || stop > end) stop = end;
      const auto tokens = tokenize(line, from, stop);
      from = stop + 1;
      if (tokens.empty()) continue;
      if (tokens.size() >= 2 && tokens[1].text == ":") {
        const auto& key = tokens[0].text;
        std::vector<std::string> items;
        for (std::size_t t = 2; t < tokens.size(); ++t) {
          if (tokens[t].text == ":" || tokens[t].text == "->")
            throw ParseError("unexpected '" + tokens[t].text + "'", number, tokens[t].column);
          items.push_back(tokens[t].text);
        }
        if (key == "name") {
          if (items.size() != 1) throw ParseError("expected one name", number, tokens[0].column);
          raw.name = items[0];
        } else if (key == "states") {
          if (raw.states_line) throw ParseError("states declared twice", number, tokens[0].column);
          raw.states = std::move(items);
          raw.states_line = number;
        } else if (key == "letters") {
          if (raw.letters_line)
            throw ParseError("letters declared twice", number, tokens[0].column);
          raw.letters = std::move(items);
          raw.letters_line = number;
        } else {
          throw ParseError("unknown header '" + key + "'", number, tokens[0].column);
        }
        continue;
      }
      if (tokens.size() != 5 || tokens[2].text != "->" || tokens[0].text == "->" ||
          tokens[1].text == "->" || tokens[3].text == "->" || tokens[4].text == "->" ||
          tokens[3].text == ":" || tokens[4].text == ":") {
        const auto col = tokens.size() > 2 ? tokens[2].column : tokens.back().column;
        throw ParseError("expected 'STATE LETTER -> STATE LETTER'", number, col);
      }
      raw.transitions.push_back({tokens[0].text, tokens[1].text, tokens[3].text, tokens[4].text,
                                 number, tokens[0].column});
    }
  }
  return raw;
}

RawDocument read_json(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), 1, e.byte);
  }
  RawDocument raw;
  try {
    if (doc.contains("name")) raw.name = doc.at("name").get<std::string>();
    raw.states = doc.at("states").get<std::vector<std::string>>();
    raw.letters = doc.at("letters").get<std::vector<std::string>>();
    raw.states_line = raw.letters_line = 1;
    for (const auto& t : doc.at("transitions"))
      raw.transitions.push_back({t.at("from").get<std::string>(), t.at("input").get<std::string>(),
                                 t.at("to").get<std::string>(), t.at("output").get<std::string>(),
                                 1, 1});
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed machine JSON: ") + e.what(), 1, 1);
  }
  return raw;
}

}  // namespace

MachineDocument parse_document(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return build(read_json(text));
  return build(read_text(text));
}

Machine parse_machine(const std::string& text) { return parse_document(text).machine; }

MachineDocument load_document(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_document(buf.str());
}

std::string serialize(const Machine& m, const std::string& name) {
  std::ostringstream out;
  if (!name.empty()) out << "name: " << name << '\n';
  out << "states:";
  for (const auto& s : m.state_names()) out << ' ' << s;
  out << "\nletters:";
  for (const auto& l : m.letter_names()) out << ' ' << l;
  out << '\n';
  for (State x = 0; x < m.num_states(); ++x)
    for (Letter i = 0; i < m.num_letters(); ++i)
      out << m.state_name(x) << ' ' << m.letter_name(i) << " -> " << m.state_name(m.delta(i, x))
          << ' ' << m.letter_name(m.rho(x, i)) << '\n';
  return out.str();
}

std::string serialize_json(const Machine& m, const std::string& name) {
  using nlohmann::json;
  json t = json::array();
  for (State x = 0; x < m.num_states(); ++x)
    for (Letter i = 0; i < m.num_letters(); ++i)
      t.push_back({{"from", m.state_name(x)},
                   {"input", m.letter_name(i)},
                   {"to", m.state_name(m.delta(i, x))},
                   {"output", m.letter_name(m.rho(x, i))}});
  json doc = {{"states", m.state_names()}, {"letters", m.letter_names()}, {"transitions", t}};
  if (!name.empty()) doc["name"] = name;
  return doc.dump(2) + "\n";
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const Machine& m, const std::string& name) {
  std::ostringstream out;
  out << "digraph " << quoted(name.empty() ? "mealy" : name) << " {\n  rankdir=LR;\n";
  for (State x = 0; x < m.num_states(); ++x)
    out << "  " << quoted(m.state_name(x)) << " [shape=circle];\n";
  for (State x = 0; x < m.num_states(); ++x) {
    std::map<State, std::string> labels;
    for (Letter i = 0; i < m.num_letters(); ++i) {
      auto& l = labels[m.delta(i, x)];
      if (!l.empty()) l += ", ";
      l += m.letter_name(i) + "|" + m.letter_name(m.rho(x, i));
    }
    for (const auto& [y, l] : labels)
      out << "  " << quoted(m.state_name(x)) << " -> " << quoted(m.state_name(y))
          << " [label=" << quoted(l) << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace mealy
