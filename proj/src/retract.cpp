#include "limitforge/retract.hpp"

#include <algorithm>
#include <map>

namespace limitforge {

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found: return "found";
    case SearchStatus::BudgetExhausted: return "budget-exhausted";
    case SearchStatus::Incomplete: return "incomplete";
  }
  return "?";
}

namespace {

std::size_t count_generator(const Word& w, std::size_t g) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [g](Letter l) { return generator_of(l) == g; }));
}

}  // namespace

RetractPresentation retract_presentation(const Presentation& p, const std::vector<Word>& rho,
                                         WordOracle& wp) {
  if (rho.size() != p.rank()) throw AlphabetError("one image per generator");
  for (const auto& w : rho) {
    if (w.support_rank() > p.rank()) throw AlphabetError("image outside the alphabet");
  }
  if (wp.rank() != p.rank()) throw OracleError("oracle alphabet does not match the presentation");

  RetractPresentation out;
  Tri hom = check_hom(p, rho, wp);
  if (hom == Tri::False) throw NotRetraction("the images do not define a homomorphism");
  if (hom == Tri::Unknown) out.status = RetractStatus::Incomplete;
  for (std::size_t x = 0; x < p.rank(); ++x) {
    Answer a = wp.query(substitute(rho[x], rho) * rho[x].inverse());
    if (a == Answer::Nontrivial) {
      throw NotRetraction("rho(rho(" + p.generators()[x] + ")) differs from rho(" +
                          p.generators()[x] + ")");
    }
    if (a == Answer::Unknown) out.status = RetractStatus::Incomplete;
  }

  std::vector<Word> rels = p.relators();
  std::vector<bool> moved(p.rank(), false);
  for (std::size_t x = 0; x < p.rank(); ++x) {
    Word def = Word::generator(x, -1) * rho[x];
    moved[x] = !def.empty();
    if (moved[x]) rels.push_back(def);
  }
  out.start = Presentation(p.generators(), rels);

  // Eliminate generators rho moves, each by the shortest relator it occurs
  // in exactly once. orig[g] is the generator of p behind current g.
  Presentation cur = out.start;
  std::vector<std::size_t> orig(p.rank());
  for (std::size_t x = 0; x < p.rank(); ++x) orig[x] = x;
  std::vector<Word> subst;
  for (std::size_t x = 0; x < p.rank(); ++x) subst.push_back(Word::generator(x));
  auto eliminate = [&](const tietze::RemoveGenerator& m) {
    Word value = eliminated_value(cur, m);
    auto images = elimination_images(cur.rank(), m.generator, value);
    for (auto& w : subst) w = substitute(w, images);
    cur = tietze_step(cur, m);
    out.moves.push_back(m);
    orig.erase(orig.begin() + static_cast<long>(m.generator));
  };
  for (;;) {
    std::optional<tietze::RemoveGenerator> best;
    std::size_t best_len = 0;
    for (std::size_t g = 0; g < cur.rank(); ++g) {
      if (!moved[orig[g]]) continue;
      for (std::size_t r = 0; r < cur.relators().size(); ++r) {
        const Word& rel = cur.relators()[r];
        if (count_generator(rel, g) == 1 && (!best || rel.size() < best_len)) {
          best = tietze::RemoveGenerator{g, r};
          best_len = rel.size();
        }
      }
    }
    if (!best) break;
    eliminate(*best);
  }

  auto tidy = simplify(cur);
  for (auto& w : subst) w = substitute(w, tidy.substitution);
  out.moves.insert(out.moves.end(), tidy.moves.begin(), tidy.moves.end());
  out.presentation = std::move(tidy.presentation);
  out.substitution = std::move(subst);

  std::map<std::string, std::size_t> by_name;
  for (std::size_t x = 0; x < p.rank(); ++x) by_name[p.generators()[x]] = x;
  for (const auto& name : out.presentation.generators()) {
    out.embedding.push_back(rho[by_name.at(name)]);
  }
  return out;
}

std::optional<std::vector<TietzeMove>> retract_by_tietze_search(const RetractPresentation& r,
                                                               std::uint64_t budget) {
  const std::string target = canonical_key(r.presentation);
  auto proc = enumerate_presentations(r.start);
  Budget b(budget);
  while (!b.exhausted()) {
    auto step = proc.next();
    if (!step) break;
    b.charge(step->work);
    if (step->value && canonical_key(step->value->presentation) == target) {
      return step->value->path;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

namespace {

struct Candidate {
  SubgroupPresentation subgroup;
  std::vector<Word> s_in_subgroup;
  std::vector<std::optional<Word>> fixed;  // per generator of K
  std::vector<std::size_t> free_slots;
};

Candidate make_candidate(const Presentation& p, const CosetTable& t, const std::vector<Word>& S) {
  Candidate c;
  c.subgroup = rs_presentation(p, t);
  const std::size_t m = c.subgroup.presentation.rank();
  c.fixed.assign(m, std::nullopt);
  for (const auto& s : S) c.s_in_subgroup.push_back(*c.subgroup.rewrite(s));
  // When s_i = A z^e B with z the only undetermined generator, occurring
  // once, rho(z) is forced: (A(Y)^-1 s_i B(Y)^-1)^e.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const Word& w = c.s_in_subgroup[i];
      std::optional<std::size_t> pos;
      bool solvable = true;
      for (std::size_t k = 0; k < w.size() && solvable; ++k) {
        if (c.fixed[generator_of(w[k])]) continue;
        solvable = !pos;
        pos = k;
      }
      if (!solvable || !pos) continue;
      std::vector<Word> known(m);
      for (std::size_t z = 0; z < m; ++z) {
        if (c.fixed[z]) known[z] = *c.fixed[z];
      }
      Word before = substitute(w.subword(0, *pos), known);
      Word after = substitute(w.subword(*pos + 1, w.size() - *pos - 1), known);
      Word value = before.inverse() * Word::generator(i) * after.inverse();
      c.fixed[generator_of(w[*pos])] = sign_of(w[*pos]) > 0 ? value : value.inverse();
      changed = true;
    }
  }
  for (std::size_t z = 0; z < m; ++z) {
    if (!c.fixed[z]) c.free_slots.push_back(z);
  }
  return c;
}

// Next composition of `total` into parts.size() nonnegative parts, in
// lexicographic order starting from (total, 0, ..., 0).
bool next_composition(std::vector<std::size_t>& parts) {
  const std::size_t k = parts.size();
  if (k < 2) return false;
  std::size_t i = k - 1;
  while (i > 0 && parts[i - 1] == 0) --i;
  if (i == 0) return false;
  // Move one unit from position i-1 to i and sweep the tail into i.
  std::size_t tail = 0;
  for (std::size_t j = i; j < k; ++j) {
    tail += parts[j];
    parts[j] = 0;
  }
  --parts[i - 1];
  parts[i] = tail + 1;
  return true;
}

Answer check_images(const Candidate& c, const std::vector<Word>& Y, const std::vector<Word>& S,
                    WordOracle& wp, std::uint64_t& work) {
  bool unknown = false;
  for (std::size_t i = 0; i < S.size(); ++i) {
    Word w = substitute(substitute(c.s_in_subgroup[i], Y), S) * S[i].inverse();
    work += 1 + w.size();
    Answer a = wp.query(w);
    if (a == Answer::Nontrivial) return a;
    unknown = unknown || a == Answer::Unknown;
  }
  for (const auto& r : c.subgroup.presentation.relators()) {
    Word w = substitute(substitute(r, Y), S);
    work += 1 + w.size();
    Answer a = wp.query(w);
    if (a == Answer::Nontrivial) return a;
    unknown = unknown || a == Answer::Unknown;
  }
  return unknown ? Answer::Unknown : Answer::Trivial;
}

}  // namespace

Process<Retraction> find_retraction(Presentation p, std::vector<Word> S, OraclePtr wp) {
  for (const auto& s : S) {
    if (s.support_rank() > p.rank()) throw AlphabetError("subset word outside the alphabet");
  }
  const std::size_t n = S.size();
  std::vector<std::vector<Candidate>> by_index(1);
  std::vector<std::vector<Word>> words_by_length;
  auto words_of = [&](std::size_t len) -> const std::vector<Word>& {
    while (words_by_length.size() <= len) {
      words_by_length.push_back(words_of_length(n, words_by_length.size()));
    }
    return words_by_length[len];
  };

  for (std::size_t cost = 1;; ++cost) {
    // Subgroups of index exactly `cost` containing S.
    {
      std::vector<Candidate> found;
      auto subgroups = low_index(p, cost);
      std::uint64_t pending = 0;
      for (auto step = subgroups.next(); step; step = subgroups.next()) {
        pending += step->work;
        if (step->value && step->value->index() == cost &&
            std::all_of(S.begin(), S.end(), [&](const Word& s) { return step->value->contains(s); })) {
          found.push_back(make_candidate(p, *step->value, S));
          pending += found.back().subgroup.raw.total_length() + 1;
        }
        if (pending >= 64) {
          Step<Retraction> work_step{pending, std::nullopt};
          co_yield std::move(work_step);
          pending = 0;
        }
      }
      by_index.push_back(std::move(found));
      if (pending) {
        Step<Retraction> work_step{pending, std::nullopt};
        co_yield std::move(work_step);
      }
    }

    for (std::size_t index = 1; index <= cost; ++index) {
      const std::size_t total = cost - index;
      for (const Candidate& cand : by_index[index]) {
        const std::size_t slots = cand.free_slots.size();
        if (slots == 0 && total > 0) continue;
        if (n == 0 && total > 0) continue;
        std::vector<std::size_t> parts(slots, 0);
        if (slots > 0) parts[0] = total;
        do {
          std::vector<const std::vector<Word>*> lists;
          bool empty = false;
          for (auto len : parts) {
            lists.push_back(&words_of(len));
            empty = empty || lists.back()->empty();
          }
          if (empty) continue;
          std::vector<std::size_t> pick(slots, 0);
          for (;;) {
            std::vector<Word> Y(cand.fixed.size());
            for (std::size_t z = 0; z < Y.size(); ++z) {
              if (cand.fixed[z]) Y[z] = *cand.fixed[z];
            }
            for (std::size_t k = 0; k < slots; ++k) Y[cand.free_slots[k]] = (*lists[k])[pick[k]];
            std::uint64_t work = 1;
            Answer a = check_images(cand, Y, S, *wp, work);
            if (a == Answer::Trivial) {
              Retraction r{cand.subgroup, std::move(Y), cand.s_in_subgroup, cost};
              Step<Retraction> hit{work, std::move(r)};
              co_yield std::move(hit);
              co_return;
            }
            Step<Retraction> miss{work, std::nullopt};
            co_yield std::move(miss);
            std::size_t k = slots;
            while (k > 0 && ++pick[k - 1] == lists[k - 1]->size()) pick[--k] = 0;
            if (k == 0) break;
          }
        } while (next_composition(parts));
      }
    }
  }
}

Tri verify_retraction(const Presentation& p, const std::vector<Word>& S, const Retraction& r,
                      WordOracle& wp) {
  const CosetTable& t = r.subgroup.table;
  if (!t.valid_for(p)) return Tri::False;
  for (const auto& s : S) {
    if (!t.contains(s)) return Tri::False;
  }
  SubgroupPresentation again = rs_presentation(p, t);
  if (!(again.presentation == r.subgroup.presentation) || again.embedding != r.subgroup.embedding) {
    return Tri::False;
  }
  const auto& k = again.presentation;
  if (r.images.size() != k.rank() || r.s_in_subgroup.size() != S.size()) return Tri::False;
  for (const auto& y : r.images) {
    if (y.support_rank() > S.size()) return Tri::False;
  }
  bool unknown = false;
  auto need_trivial = [&](const Word& w) {
    Answer a = wp.query(w);
    unknown = unknown || a == Answer::Unknown;
    return a != Answer::Nontrivial;
  };
  for (std::size_t i = 0; i < S.size(); ++i) {
    if (r.s_in_subgroup[i].support_rank() > k.rank()) return Tri::False;
    if (!need_trivial(substitute(r.s_in_subgroup[i], again.embedding) * S[i].inverse())) {
      return Tri::False;
    }
    if (!need_trivial(substitute(substitute(r.s_in_subgroup[i], r.images), S) * S[i].inverse())) {
      return Tri::False;
    }
  }
  for (const auto& rel : k.relators()) {
    if (!need_trivial(substitute(substitute(rel, r.images), S))) return Tri::False;
  }
  return unknown ? Tri::Unknown : Tri::True;
}

SubgroupResult subgroup_from_retraction(const Retraction& r, OraclePtr wp, SubgroupOptions opts,
                                        std::uint64_t steps) {
  SubgroupResult out;
  out.steps = steps;
  const auto& k = r.subgroup;
  std::vector<Word> rho;
  for (const auto& y : r.images) rho.push_back(substitute(y, r.s_in_subgroup));
  auto k_oracle = std::make_shared<PullbackOracle>(wp, k.embedding);
  RetractPresentation rp = retract_presentation(k.presentation, rho, *k_oracle);

  out.status = rp.status == RetractStatus::Complete ? SearchStatus::Found : SearchStatus::Incomplete;
  out.presentation = rp.presentation;
  std::map<std::string, std::size_t> by_name;
  for (std::size_t z = 0; z < k.presentation.rank(); ++z) by_name[k.presentation.generators()[z]] = z;
  for (const auto& name : rp.presentation.generators()) {
    out.generators_in_s.push_back(r.images[by_name.at(name)]);
  }
  for (const auto& s : r.s_in_subgroup) out.s_in_generators.push_back(substitute(s, rp.substitution));
  if (opts.conformance_tietze) {
    out.tietze_path = retract_by_tietze_search(rp, opts.budget > steps ? opts.budget - steps : 0);
  }
  out.retraction = r;
  out.retract = std::move(rp);
  return out;
}

SubgroupResult subgroup_presentation_lr(const Presentation& p, const std::vector<Word>& S,
                                        OraclePtr wp, SubgroupOptions opts) {
  auto search = find_retraction(p, S, wp);
  Budget budget(opts.budget);
  auto found = run(search, budget);
  if (!found) {
    SubgroupResult out;
    out.steps = budget.used();
    out.status = SearchStatus::BudgetExhausted;
    return out;
  }
  return subgroup_from_retraction(*found, std::move(wp), opts, budget.used());
}

std::vector<Word> generators_in_ambient(const SubgroupResult& r, const std::vector<Word>& S) {
  std::vector<Word> out;
  for (const auto& w : r.generators_in_s) out.push_back(substitute(w, S));
  return out;
}

}  // namespace limitforge
