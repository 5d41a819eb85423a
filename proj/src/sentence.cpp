#include <stdexcept>

#include "limitforge/recognize.hpp"

namespace limitforge {

std::optional<std::vector<Word>> refute_sentence(const Sentence& s, std::size_t bound,
                                                 std::size_t free_rank) {
  std::vector<Word> ball;
  for (std::size_t len = 0; len <= bound; ++len) {
    for (auto& w : words_of_length(free_rank, len)) ball.push_back(std::move(w));
  }
  std::vector<Word> images(s.variables);
  for (std::size_t i = 0; i < free_rank; ++i) images.push_back(Word::generator(i));
  std::vector<std::size_t> at(s.variables, 0);
  while (true) {
    for (std::size_t v = 0; v < s.variables; ++v) images[v] = ball[at[v]];
    bool holds = true;
    for (const auto& e : s.equations) {
      if (!substitute(e, images).empty()) {
        holds = false;
        break;
      }
    }
    for (std::size_t j = 0; holds && j < s.inequations.size(); ++j) {
      if (substitute(s.inequations[j], images).empty()) holds = false;
    }
    if (holds) return std::vector<Word>(images.begin(), images.begin() + static_cast<long>(s.variables));
    std::size_t v = s.variables;
    while (v > 0 && at[v - 1] + 1 == ball.size()) at[--v] = 0;
    if (v == 0) return std::nullopt;
    ++at[v - 1];
  }
}

const char* to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::CommutationTransitivity: return "commutation-transitivity";
    case WitnessKind::Torsion: return "torsion";
    case WitnessKind::Inversion: return "inversion";
    case WitnessKind::External: return "external";
  }
  return "?";
}

Sentence sentence_of(const Presentation& p, const Witness& w) {
  return Sentence{p.rank(), p.relators(), w.elements};
}

namespace {

Tri both(Tri a, Tri b) {
  if (a == Tri::False || b == Tri::False) return Tri::False;
  if (a == Tri::Unknown || b == Tri::Unknown) return Tri::Unknown;
  return Tri::True;
}

Tri is_trivial(WordOracle& wp, const Word& w) {
  switch (wp.query(w)) {
    case Answer::Trivial: return Tri::True;
    case Answer::Nontrivial: return Tri::False;
    default: return Tri::Unknown;
  }
}

Tri is_nontrivial(WordOracle& wp, const Word& w) {
  switch (wp.query(w)) {
    case Answer::Trivial: return Tri::False;
    case Answer::Nontrivial: return Tri::True;
    default: return Tri::Unknown;
  }
}

Witness ct_witness(const Word& a, const Word& b, const Word& c) {
  return Witness{WitnessKind::CommutationTransitivity, WitnessKind::CommutationTransitivity,
                 {b, commutator(a, c)}, {a, b, c}, 0};
}

}  // namespace

Tri check_witness(const Presentation& p, const Witness& w, WordOracle& wp) {
  if (wp.rank() != p.rank()) return Tri::False;
  for (const auto& x : w.data) {
    if (x.support_rank() > p.rank()) return Tri::False;
  }
  WitnessKind schema = w.kind == WitnessKind::External ? w.schema : w.kind;
  switch (schema) {
    case WitnessKind::CommutationTransitivity: {
      if (w.data.size() != 3) return Tri::False;
      const Word &a = w.data[0], &b = w.data[1], &c = w.data[2];
      if (w.elements != std::vector<Word>{b, commutator(a, c)}) return Tri::False;
      Tri t = both(is_trivial(wp, commutator(a, b)), is_trivial(wp, commutator(b, c)));
      return both(t, both(is_nontrivial(wp, b), is_nontrivial(wp, commutator(a, c))));
    }
    case WitnessKind::Torsion: {
      if (w.data.size() != 1 || w.n < 2) return Tri::False;
      if (w.elements != w.data) return Tri::False;
      return both(is_trivial(wp, w.data[0].pow(w.n)), is_nontrivial(wp, w.data[0]));
    }
    case WitnessKind::Inversion: {
      if (w.data.size() != 2) return Tri::False;
      const Word &g = w.data[0], &h = w.data[1];
      if (w.elements != std::vector<Word>{g}) return Tri::False;
      return both(is_trivial(wp, conjugate(g, h) * g), is_nontrivial(wp, g));
    }
    case WitnessKind::External:
      return Tri::False;
  }
  return Tri::False;
}

Process<Witness> witness_search(Presentation p, OraclePtr wp, std::shared_ptr<WitnessSearchStats> stats) {
  if (!stats) stats = std::make_shared<WitnessSearchStats>();
  const std::size_t rank = p.rank();
  auto nontrivial = [&](const Word& w) { return wp->query(w) == Answer::Nontrivial; };
  auto trivial = [&](const Word& w) { return wp->query(w) == Answer::Trivial; };
  // A candidate that passed the oracle is kept only if the bounded refuter
  // finds no map to F2 keeping all its elements nontrivial.
  auto sound = [&](const Witness& w) {
    if (refute_sentence(sentence_of(p, w), 2)) {
      ++stats->rejected;
      return false;
    }
    return true;
  };
  if (rank == 0) co_return;

  for (std::size_t cost = 1;; ++cost) {
    // Torsion: |g| + n - 1 == cost.
    for (std::size_t len = 1; len < cost; ++len) {
      long n = static_cast<long>(cost - len) + 1;
      ReducedWords gs(rank, len);
      for (Word g; gs.next(g);) {
        ++stats->candidates;
        Step<Witness> tick_{2, std::nullopt};
        co_yield std::move(tick_);
        if (!nontrivial(g) || !trivial(g.pow(n))) continue;
        Witness w{WitnessKind::Torsion, WitnessKind::Torsion, {g}, {g}, n};
        if (!sound(w)) continue;
        Step<Witness> hit_{1, std::move(w)};
        co_yield std::move(hit_);
      }
    }
    // Inversion: |g| + |h| == cost, both nonempty.
    for (std::size_t lg = 1; lg < cost; ++lg) {
      ReducedWords gs(rank, lg);
      for (Word g; gs.next(g);) {
        Step<Witness> tick_{1, std::nullopt};
        co_yield std::move(tick_);
        if (!nontrivial(g)) continue;
        ReducedWords hs(rank, cost - lg);
        for (Word h; hs.next(h);) {
          ++stats->candidates;
          Step<Witness> inner_{1, std::nullopt};
          co_yield std::move(inner_);
          if (!trivial(conjugate(g, h) * g)) continue;
          Witness w{WitnessKind::Inversion, WitnessKind::Inversion, {g}, {g, h}, 0};
          if (!sound(w)) continue;
          Step<Witness> hit_{1, std::move(w)};
          co_yield std::move(hit_);
        }
      }
    }
    // Commutation transitivity: |a| + |b| + |c| == cost.
    for (std::size_t la = 1; la + 2 <= cost; ++la) {
      ReducedWords as(rank, la);
      for (Word a; as.next(a);) {
        for (std::size_t lb = 1; la + lb + 1 <= cost; ++lb) {
          ReducedWords bs(rank, lb);
          for (Word b; bs.next(b);) {
            Step<Witness> tick_{2, std::nullopt};
            co_yield std::move(tick_);
            if (!nontrivial(b) || !trivial(commutator(a, b))) continue;
            ReducedWords cs(rank, cost - la - lb);
            for (Word c; cs.next(c);) {
              ++stats->candidates;
              Step<Witness> inner_{2, std::nullopt};
              co_yield std::move(inner_);
              if (!trivial(commutator(b, c)) || !nontrivial(commutator(a, c))) continue;
              Witness w = ct_witness(a, b, c);
              if (!sound(w)) continue;
              Step<Witness> hit_{1, std::move(w)};
              co_yield std::move(hit_);
            }
          }
        }
      }
    }
  }
}

std::optional<Witness> certify_witness(const Presentation& p, OraclePtr wp, std::uint64_t budget) {
  auto proc = witness_search(p, std::move(wp));
  Budget b(budget);
  return run(proc, b);
}

}  // namespace limitforge
