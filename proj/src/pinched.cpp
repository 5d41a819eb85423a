#include <set>
#include <stdexcept>

#include "limitforge/recognize.hpp"

namespace limitforge {

PinchedOracle::PinchedOracle(std::vector<int> side, Word u, Word v)
    : WordOracle(side.size()), side_(std::move(side)) {
  if (u.empty() || v.empty()) throw std::invalid_argument("edge words must be nontrivial");
  edge_[0] = std::move(u);
  edge_[1] = std::move(v);
  for (int s = 0; s < 2; ++s) {
    for (Letter l : edge_[s]) {
      if (generator_of(l) >= side_.size() || side_[generator_of(l)] != s) {
        throw std::invalid_argument("edge word leaves its factor");
      }
    }
  }
}

// m with w = edge^m in the free factor, if any.
std::optional<long> PinchedOracle::edge_power(const Word& w, int side) const {
  if (w.empty()) return 0;
  auto e = primitive_root(edge_[side]);
  auto x = primitive_root(w);
  long j;
  if (x.root == e.root) j = x.exponent;
  else if (x.root == e.root.inverse()) j = -x.exponent;
  else return std::nullopt;
  if (j % e.exponent != 0) return std::nullopt;
  return j / e.exponent;
}

Answer PinchedOracle::decide(const Word& w) {
  add_work(w.size());
  // Syllables alternate sides; a syllable in the edge group is moved across
  // and absorbed by its left neighbour while it sits on top.
  std::vector<std::pair<int, Word>> stack;
  auto settle = [&] {
    while (stack.size() >= 2) {
      auto m = edge_power(stack.back().second, stack.back().first);
      if (!m) return;
      int s = stack.back().first;
      stack.pop_back();
      stack.back().second *= edge_[1 - s].pow(*m);
      if (stack.back().second.empty()) stack.pop_back();
    }
  };
  std::size_t i = 0;
  const auto& l = w.letters();
  while (i < l.size()) {
    int s = side_[generator_of(l[i])];
    std::size_t j = i;
    while (j < l.size() && side_[generator_of(l[j])] == s) ++j;
    Word x = Word::reduce(std::span<const Letter>(l.data() + i, j - i));
    i = j;
    if (!stack.empty() && stack.back().first == s) {
      stack.back().second *= x;
      if (stack.back().second.empty()) stack.pop_back();
    } else {
      stack.emplace_back(s, std::move(x));
    }
    settle();
  }
  return stack.empty() ? Answer::Trivial : Answer::Nontrivial;
}

OraclePtr detect_pinched(const Presentation& p) {
  if (p.relators().size() != 1) return nullptr;
  const Word& r = p.relators()[0];
  const std::size_t n = r.size();
  for (std::size_t rot = 0; rot < n; ++rot) {
    Word c = r.subword(rot, n - rot) * r.subword(0, rot);
    if (c.size() != n) continue;
    for (std::size_t cut = 1; cut < n; ++cut) {
      Word u = c.subword(0, cut);
      Word rest = c.subword(cut, n - cut);
      std::set<std::size_t> gu, gv;
      for (Letter l : u) gu.insert(generator_of(l));
      for (Letter l : rest) gv.insert(generator_of(l));
      bool disjoint = true;
      for (auto g : gu) disjoint = disjoint && !gv.count(g);
      if (!disjoint) continue;
      std::vector<int> side(p.rank(), 0);
      for (auto g : gv) side[g] = 1;
      return std::make_shared<PinchedOracle>(std::move(side), u, rest.inverse());
    }
  }
  return nullptr;
}

Presentation pinched_presentation(std::size_t rank1, std::size_t rank2, const Word& u, const Word& v) {
  if (u.empty() || v.empty()) throw std::invalid_argument("pinched amalgam needs nontrivial u and v");
  if (u.support_rank() > rank1 || v.support_rank() > rank2) {
    throw AlphabetError("u and v must lie in their own factors");
  }
  std::vector<Word> shift;
  for (std::size_t i = 0; i < rank2; ++i) shift.push_back(Word::generator(rank1 + i));
  return Presentation(default_names(rank1 + rank2), {u * substitute(v, shift).inverse()});
}

Verdict recognize_cyclically_pinched(std::size_t rank1, std::size_t rank2, const Word& u, const Word& v,
                                     RecognizeOptions opts) {
  Presentation p = pinched_presentation(rank1, rank2, u, v);
  std::vector<Word> shift;
  for (std::size_t i = 0; i < rank2; ++i) shift.push_back(Word::generator(rank1 + i));
  std::vector<int> side(rank1 + rank2, 0);
  for (std::size_t i = rank1; i < side.size(); ++i) side[i] = 1;
  auto wp = std::make_shared<PinchedOracle>(std::move(side), u, substitute(v, shift));
  return recognize_limit(p, wp, opts);
}

}  // namespace limitforge
