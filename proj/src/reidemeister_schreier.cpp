#include <stdexcept>

#include "limitforge/coset.hpp"

namespace limitforge {

SchreierData schreier_data(const CosetTable& t) {
  if (!t.complete()) throw std::invalid_argument("Schreier data needs a complete coset table");
  const std::size_t n = t.size();
  const std::size_t rank = t.rank();
  SchreierData d;
  d.transversal.assign(n, Word{});
  d.generator.assign(n, std::vector<int>(rank, -1));
  std::vector<bool> seen(n, false);
  std::vector<std::vector<bool>> tree(n, std::vector<bool>(2 * rank, false));
  std::vector<int> order{0};
  seen[0] = true;
  for (std::size_t head = 0; head < order.size(); ++head) {
    int c = order[head];
    for (std::size_t code = 0; code < 2 * rank; ++code) {
      int e = t.rows()[c][code];
      if (!seen[e]) {
        seen[e] = true;
        tree[c][code] = true;
        tree[e][code ^ 1] = true;
        d.transversal[e] = d.transversal[c] * Word::letter(letter_from_code(code));
        order.push_back(e);
      }
    }
  }
  for (std::size_t g = 0; g < rank; ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      if (tree[c][2 * g]) continue;
      int e = t.rows()[c][2 * g];
      d.generator[c][g] = static_cast<int>(d.words.size());
      d.words.push_back(d.transversal[c] * Word::generator(g) * d.transversal[e].inverse());
    }
  }
  return d;
}

namespace {

// Reads w from coset c, recording Schreier generators crossed.
std::pair<int, Word> rewrite_from(const CosetTable& t, const SchreierData& d, int c,
                                  const Word& w) {
  std::vector<Letter> out;
  for (Letter l : w) {
    std::size_t g = generator_of(l);
    if (l > 0) {
      if (int id = d.generator[c][g]; id >= 0) out.push_back(make_letter(id));
      c = t.act(c, l);
    } else {
      int prev = t.act(c, l);
      if (int id = d.generator[prev][g]; id >= 0) out.push_back(make_letter(id, -1));
      c = prev;
    }
  }
  return {c, Word::reduce(out)};
}

}  // namespace

std::optional<Word> rewrite_in_subgroup(const CosetTable& t, const Word& w) {
  auto d = schreier_data(t);
  auto [end, out] = rewrite_from(t, d, 0, w);
  if (end != 0) return std::nullopt;
  return out;
}

std::optional<Word> SubgroupPresentation::rewrite(const Word& w) const {
  auto raw_word = rewrite_in_subgroup(table, w);
  if (!raw_word) return std::nullopt;
  return substitute(*raw_word, schreier_to_pres);
}

SubgroupPresentation rs_presentation(const Presentation& p, const CosetTable& t) {
  if (!t.valid_for(p)) throw std::invalid_argument("coset table is not complete for the presentation");
  auto d = schreier_data(t);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < d.words.size(); ++i) names.push_back("s" + std::to_string(i + 1));
  std::vector<Word> rels;
  for (std::size_t c = 0; c < t.size(); ++c) {
    for (const auto& r : p.relators()) {
      rels.push_back(rewrite_from(t, d, static_cast<int>(c), r).second);
    }
  }
  SubgroupPresentation sp;
  sp.raw = Presentation(names, std::move(rels));
  sp.table = t;
  sp.schreier_words = d.words;
  auto simplified = simplify(sp.raw);
  sp.presentation = std::move(simplified.presentation);
  sp.schreier_to_pres = std::move(simplified.substitution);
  sp.moves = std::move(simplified.moves);
  for (const auto& name : sp.presentation.generators()) {
    std::size_t raw_index = std::stoul(name.substr(1)) - 1;
    sp.embedding.push_back(d.words[raw_index]);
  }
  return sp;
}

}  // namespace limitforge
