#include "mealy/portrait.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "mealy/error.hpp"

namespace mealy {

Perm::Perm(std::vector<Letter> image) : image_(std::move(image)) {
  std::vector<bool> hit(image_.size(), false);
  for (auto v : image_) {
    if (v >= image_.size() || hit[v]) throw PreconditionError("Perm: not a bijection");
    hit[v] = true;
  }
}

Perm Perm::identity(std::size_t n) {
  std::vector<Letter> image(n);
  std::iota(image.begin(), image.end(), 0);
  return Perm(std::move(image));
}

bool Perm::is_identity() const noexcept {
  for (std::size_t i = 0; i < image_.size(); ++i)
    if (image_[i] != i) return false;
  return true;
}

Perm Perm::then(const Perm& after) const {
  Perm r;
  r.image_.resize(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) r.image_[i] = after.image_[image_[i]];
  return r;
}

std::string to_string(const Perm& p, const std::vector<std::string>& letter_names) {
  if (p.is_identity()) return "id";
  if (p.size() == 2) return "σ";
  auto name = [&](Letter i) {
    return i < letter_names.size() ? letter_names[i] : std::to_string(i);
  };
  std::string out;
  std::vector<bool> seen(p.size(), false);
  for (Letter i = 0; i < p.size(); ++i) {
    if (seen[i] || p(i) == i) continue;
    out += "(";
    for (Letter j = i; !seen[j]; j = p(j)) {
      if (j != i) out += " ";
      out += name(j);
      seen[j] = true;
    }
    out += ")";
  }
  return out;
}

std::size_t Portrait::label_count(std::size_t depth, std::size_t alphabet) {
  if (alphabet == 1) return depth;
  std::size_t total = 0;
  std::size_t width = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    total += width;
    width *= alphabet;
  }
  return total;
}

Portrait::Portrait(std::size_t depth, std::size_t alphabet, std::vector<Perm> labels)
    : depth_(depth), alphabet_(alphabet), labels_(std::move(labels)) {
  if (depth == 0 || alphabet == 0) throw PreconditionError("Portrait: empty shape");
  if (labels_.size() != label_count(depth, alphabet))
    throw PreconditionError("Portrait: expected " +
                            std::to_string(label_count(depth, alphabet)) + " labels, got " +
                            std::to_string(labels_.size()));
  for (const auto& l : labels_)
    if (l.size() != alphabet) throw PreconditionError("Portrait: label over the wrong alphabet");
  offsets_.resize(depth + 1);
  std::size_t width = 1;
  for (std::size_t l = 0; l < depth; ++l) {
    offsets_[l + 1] = offsets_[l] + width;
    width *= alphabet;
  }
}

namespace {

Perm root_permutation(const Machine& m, std::span<const State> u) {
  std::vector<Letter> image(m.num_letters());
  for (Letter i = 0; i < m.num_letters(); ++i) {
    const Letter in[] = {i};
    image[i] = rho_apply(m, u, in)[0];
  }
  return Perm(std::move(image));
}

}  // namespace

Portrait portrait_of(const Machine& m, std::span<const State> u, std::size_t k,
                     PortraitBudget budget) {
  if (k == 0) throw PreconditionError("portrait_of: depth must be positive");
  if (!is_invertible(m)) throw PreconditionError("portrait_of: machine is not invertible");
  const auto a = m.num_letters();
  // Overflow-safe size check.
  std::size_t total = 0, width = 1;
  for (std::size_t l = 0; l < k; ++l) {
    total += width;
    if (total > budget.max_labels)
      throw BudgetExceeded("portrait_of: depth " + std::to_string(k) + " exceeds the label budget",
                           total);
    if (a > 1) width *= a;
  }
  std::vector<Perm> labels;
  labels.reserve(total);
  std::vector<StateWord> level{StateWord(u.begin(), u.end())};
  for (std::size_t l = 0; l < k; ++l) {
    std::vector<StateWord> next;
    if (l + 1 < k) next.reserve(level.size() * a);
    for (const auto& section : level) {
      labels.push_back(root_permutation(m, section));
      if (l + 1 == k) continue;
      for (Letter j = 0; j < a; ++j) {
        const Letter s[] = {j};
        next.push_back(delta_apply(m, s, section));
      }
    }
    level = std::move(next);
  }
  return Portrait(k, a, std::move(labels));
}

Portrait portrait_product(const Portrait& p, const Portrait& q) {
  if (p.depth() != q.depth() || p.alphabet() != q.alphabet())
    throw PreconditionError("portrait_product: shape mismatch");
  const auto a = p.alphabet();
  std::vector<Perm> labels;
  labels.reserve(p.labels().size());
  // image[r]: rank of p(s) for the r-th vertex s of the current level.
  std::vector<std::size_t> image{0};
  for (std::size_t l = 0; l < p.depth(); ++l) {
    std::vector<std::size_t> next;
    for (std::size_t r = 0; r < image.size(); ++r) {
      const Perm& first = p.at(l, r);
      labels.push_back(first.then(q.at(l, image[r])));
      if (l + 1 == p.depth()) continue;
      for (Letter j = 0; j < a; ++j) next.push_back(image[r] * a + first(j));
    }
    image = std::move(next);
  }
  return Portrait(p.depth(), a, std::move(labels));
}

Portrait identity_portrait(std::size_t k, std::size_t alphabet) {
  return Portrait(k, alphabet,
                  std::vector<Perm>(Portrait::label_count(k, alphabet), Perm::identity(alphabet)));
}

namespace {

bool constant(const Portrait& p, std::size_t level, std::size_t from, std::size_t count) {
  for (std::size_t r = from + 1; r < from + count; ++r)
    if (!(p.at(level, r) == p.at(level, from))) return false;
  return true;
}

}  // namespace

HomogeneityReport classify_homogeneity(const Portrait& p) {
  HomogeneityReport report;
  bool all = true;
  for (std::size_t l = 0; l < p.depth(); ++l) {
    if (constant(p, l, 0, p.level_width(l))) {
      report.level_labels.emplace_back(p.at(l, 0));
    } else {
      report.level_labels.emplace_back(std::nullopt);
      all = false;
    }
  }
  if (all) {
    report.kind = Homogeneity::homogeneous;
    return report;
  }
  const auto k = p.depth();
  bool almost = true;
  for (std::size_t l = 0; l + 1 < k; ++l)
    if (!report.level_labels[l]) almost = false;
  if (almost) {
    const auto deepest = k - 1;
    const auto block = p.level_width(deepest) / p.alphabet();
    for (std::size_t c = 0; c < p.alphabet() && almost; ++c)
      almost = constant(p, deepest, c * block, block);
  }
  report.kind = almost ? Homogeneity::almost_homogeneous : Homogeneity::neither;
  return report;
}

Portrait build_J_tau(const Portrait& j, const std::vector<Perm>& tau) {
  if (classify_homogeneity(j).kind != Homogeneity::homogeneous)
    throw PreconditionError("build_J_tau: portrait is not homogeneous");
  const auto a = j.alphabet();
  if (tau.size() != a) throw PreconditionError("build_J_tau: one permutation per letter expected");
  for (const auto& t : tau)
    if (t.size() != a) throw PreconditionError("build_J_tau: permutation over the wrong alphabet");
  std::vector<Perm> labels = j.labels();
  const auto width = j.level_width(j.depth() - 1) * a;
  const auto block = width / a;
  for (std::size_t r = 0; r < width; ++r) labels.push_back(tau[r / block]);
  return Portrait(j.depth() + 1, a, std::move(labels));
}

PortraitGenerator::PortraitGenerator(Machine m, StateWord u)
    : machine_(std::move(m)), word_(std::move(u)) {
  if (!is_invertible(machine_))
    throw PreconditionError("PortraitGenerator: machine is not invertible");
}

Perm PortraitGenerator::label_at(std::span<const Letter> s) const {
  return root_permutation(machine_, delta_apply(machine_, s, word_));
}

namespace {

std::string vertex_word(std::size_t level, std::size_t rank, std::size_t a,
                        const std::vector<std::string>& names) {
  std::vector<std::uint32_t> word(level);
  for (std::size_t l = level; l-- > 0;) {
    word[l] = static_cast<std::uint32_t>(rank % a);
    rank /= a;
  }
  if (names.size() == a) return word_name(names, word);
  std::vector<std::string> numbers;
  for (std::size_t i = 0; i < a; ++i) numbers.push_back(std::to_string(i));
  return word_name(numbers, word);
}

void tree_lines(const Portrait& p, const std::vector<std::string>& names, std::size_t level,
                std::size_t rank, std::ostringstream& out) {
  out << std::string(2 * level, ' ');
  if (level == 0) {
    out << "root";
  } else {
    out << vertex_word(level, rank, p.alphabet(), names);
  }
  out << ": " << to_string(p.at(level, rank), names) << '\n';
  if (level + 1 == p.depth()) return;
  for (std::size_t j = 0; j < p.alphabet(); ++j)
    tree_lines(p, names, level + 1, rank * p.alphabet() + j, out);
}

}  // namespace

std::string portrait_tree(const Portrait& p, const std::vector<std::string>& letter_names) {
  std::ostringstream out;
  tree_lines(p, letter_names, 0, 0, out);
  return out.str();
}

std::string portrait_dot(const Portrait& p, const std::vector<std::string>& letter_names) {
  std::ostringstream out;
  out << "digraph portrait {\n  node [shape=circle];\n";
  const auto a = p.alphabet();
  for (std::size_t l = 0; l < p.depth(); ++l) {
    for (std::size_t r = 0; r < p.level_width(l); ++r) {
      const auto v = p.level_offset(l) + r;
      out << "  v" << v << " [label=\"" << to_string(p.at(l, r), letter_names) << "\"];\n";
      if (l == 0) continue;
      const auto parent = p.level_offset(l - 1) + r / a;
      const auto letter = r % a;
      const std::string edge =
          letter < letter_names.size() ? letter_names[letter] : std::to_string(letter);
      out << "  v" << parent << " -> v" << v << " [label=\"" << edge << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace mealy
