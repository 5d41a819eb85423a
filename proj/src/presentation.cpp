#include "limitforge/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

namespace limitforge {

Presentation::Presentation(std::vector<std::string> generators, std::vector<Word> relators)
    : generators_(std::move(generators)) {
  std::set<std::string> seen;
  for (const auto& g : generators_) {
    if (!is_identifier(g)) throw std::invalid_argument("bad generator name '" + g + "'");
    if (!seen.insert(g).second) throw std::invalid_argument("duplicate generator '" + g + "'");
  }
  for (auto& r : relators) {
    if (r.support_rank() > generators_.size()) {
      throw AlphabetError("relator uses a generator outside the presentation");
    }
    Word core = cyclic_reduce(r).core;
    if (!core.empty()) relators_.push_back(std::move(core));
  }
}

Presentation Presentation::free(std::size_t rank) { return {default_names(rank), {}}; }

std::size_t Presentation::total_length() const noexcept {
  std::size_t n = 0;
  for (const auto& r : relators_) n += r.size();
  return n;
}

std::vector<std::string> default_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back(n <= 26 ? std::string(1, static_cast<char>('a' + i))
                            : "x" + std::to_string(i + 1));
  }
  return names;
}

namespace {

void skip_space(std::string_view s, std::size_t& i) {
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
}

// Splits [begin, end) on commas outside brackets and parentheses.
std::vector<std::pair<std::size_t, std::size_t>> split_top(std::string_view s,
                                                           std::size_t begin,
                                                           std::size_t end) {
  std::vector<std::pair<std::size_t, std::size_t>> parts;
  int depth = 0;
  std::size_t start = begin;
  for (std::size_t i = begin; i < end; ++i) {
    char c = s[i];
    if (c == '[' || c == '(') ++depth;
    if (c == ']' || c == ')') --depth;
    if (c == ',' && depth == 0) {
      parts.emplace_back(start, i);
      start = i + 1;
    }
  }
  parts.emplace_back(start, end);
  return parts;
}

bool blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::size_t i = 0;
  skip_space(text, i);
  if (i >= text.size() || text[i] != '<') throw ParseError("expected '<'", i);
  std::size_t bar = text.find('|', i);
  if (bar == std::string_view::npos) throw ParseError("expected '|'", text.size());
  std::size_t close = text.rfind('>');
  if (close == std::string_view::npos || close < bar) {
    throw ParseError("expected '>'", text.size());
  }
  std::size_t tail = close + 1;
  skip_space(text, tail);
  if (tail != text.size()) throw ParseError("trailing input", tail);

  std::vector<std::string> gens;
  if (!blank(text.substr(i + 1, bar - i - 1))) {
    for (auto [b, e] : split_top(text, i + 1, bar)) {
      std::size_t k = b;
      skip_space(text, k);
      std::size_t j = e;
      while (j > k && std::isspace(static_cast<unsigned char>(text[j - 1]))) --j;
      std::string name(text.substr(k, j - k));
      if (!is_identifier(name)) throw ParseError("bad generator name '" + name + "'", k);
      if (std::find(gens.begin(), gens.end(), name) != gens.end()) {
        throw ParseError("duplicate generator '" + name + "'", k);
      }
      gens.push_back(std::move(name));
    }
  }

  std::vector<Word> rels;
  if (!blank(text.substr(bar + 1, close - bar - 1))) {
    for (auto [b, e] : split_top(text, bar + 1, close)) {
      try {
        rels.push_back(parse_word(text.substr(b, e - b), gens));
      } catch (const ParseError& err) {
        std::string what = err.what();
        what = what.substr(0, what.rfind(" at position "));
        throw ParseError(what, b + err.position());
      }
    }
  }
  return Presentation(std::move(gens), std::move(rels));
}

std::string serialize(const Presentation& p) {
  std::string out = "< ";
  for (std::size_t i = 0; i < p.rank(); ++i) {
    if (i) out += ", ";
    out += p.generators()[i];
  }
  out += p.rank() ? " | " : "| ";
  for (std::size_t i = 0; i < p.relators().size(); ++i) {
    if (i) out += ", ";
    out += p.format(p.relators()[i]);
  }
  out += p.relators().empty() ? ">" : " >";
  return out;
}

namespace {

Word relabel(const Word& w, const std::vector<std::size_t>& perm) {
  std::vector<Letter> out;
  out.reserve(w.size());
  for (Letter l : w) out.push_back(make_letter(perm[generator_of(l)], sign_of(l)));
  return Word::reduce(out);
}

std::vector<Word> canonical_relators(const std::vector<Word>& rels,
                                     const std::vector<std::size_t>& perm) {
  std::vector<Word> out;
  out.reserve(rels.size());
  for (const auto& r : rels) out.push_back(cyclic_canonical(relabel(r, perm)));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Presentation normalize(const Presentation& p) {
  const std::size_t n = p.rank();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Word> best = canonical_relators(p.relators(), perm);
  if (n <= 6) {
    while (std::next_permutation(perm.begin(), perm.end())) {
      auto cand = canonical_relators(p.relators(), perm);
      if (cand < best) best = std::move(cand);
    }
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
  return Presentation(std::move(names), std::move(best));
}

std::string canonical_key(const Presentation& p) { return serialize(normalize(p)); }

}  // namespace limitforge
