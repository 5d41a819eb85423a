#include "limitforge/tietze.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace limitforge {

Word evaluate(const Derivation& d, const std::vector<Word>& relators) {
  Word out;
  for (const auto& f : d) {
    if (f.relator >= relators.size()) throw IneligibleMove("derivation cites a missing relator");
    out *= conjugate(relators[f.relator].pow(f.exponent), f.conjugator);
  }
  return out;
}

namespace {

bool conjugate_in_free(const Word& u, const Word& v) {
  return is_rotation_of(cyclic_reduce(u).core, cyclic_reduce(v).core);
}

void check_alphabet(const Word& w, std::size_t rank) {
  if (w.support_rank() > rank) throw IneligibleMove("word outside the presentation's alphabet");
}

std::string fresh_name(const std::vector<std::string>& used) {
  for (char c = 'a'; c <= 'z'; ++c) {
    std::string s(1, c);
    if (std::find(used.begin(), used.end(), s) == used.end()) return s;
  }
  for (std::size_t k = 1;; ++k) {
    std::string s = "x" + std::to_string(k);
    if (std::find(used.begin(), used.end(), s) == used.end()) return s;
  }
}

std::size_t occurrences(const Word& w, std::size_t g) {
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [g](Letter l) { return generator_of(l) == g; }));
}

}  // namespace

std::vector<Word> elimination_images(std::size_t rank, std::size_t g, const Word& value) {
  std::vector<Word> shift(rank);
  for (std::size_t h = 0; h < rank; ++h) {
    if (h != g) shift[h] = Word::generator(h < g ? h : h - 1);
  }
  Word v = substitute(value, shift);
  shift[g] = v;
  return shift;
}

Word eliminated_value(const Presentation& p, const tietze::RemoveGenerator& m) {
  if (m.generator >= p.rank() || m.relator >= p.relators().size()) {
    throw IneligibleMove("generator or relator index out of range");
  }
  const Word& r = p.relators()[m.relator];
  if (occurrences(r, m.generator) != 1) {
    throw IneligibleMove("generator must occur exactly once in the defining relator");
  }
  std::size_t k = 0;
  while (generator_of(r[k]) != m.generator) ++k;
  // r = x g^e y, so g^e = x^-1 y^-1.
  Word rest = r.subword(0, k).inverse() * r.subword(k + 1, r.size()).inverse();
  return r[k] > 0 ? rest : rest.inverse();
}

Presentation tietze_step(const Presentation& p, const TietzeMove& move) {
  const auto& rels = p.relators();
  if (auto* m = std::get_if<tietze::AddRelator>(&move)) {
    check_alphabet(m->relator, p.rank());
    Word d = evaluate(m->derivation, rels);
    if (!conjugate_in_free(d, m->relator)) {
      throw IneligibleMove("derivation does not produce the new relator");
    }
    auto out = rels;
    out.push_back(m->relator);
    return Presentation(p.generators(), std::move(out));
  }
  if (auto* m = std::get_if<tietze::RemoveRelator>(&move)) {
    if (m->index >= rels.size()) throw IneligibleMove("relator index out of range");
    for (const auto& f : m->derivation) {
      if (f.relator == m->index) throw IneligibleMove("derivation uses the relator it removes");
    }
    Word d = evaluate(m->derivation, rels);
    if (!conjugate_in_free(d, rels[m->index]) &&
        !conjugate_in_free(d, rels[m->index].inverse())) {
      throw IneligibleMove("relator is not derived from the others");
    }
    auto out = rels;
    out.erase(out.begin() + static_cast<long>(m->index));
    return Presentation(p.generators(), std::move(out));
  }
  if (auto* m = std::get_if<tietze::AddGenerator>(&move)) {
    check_alphabet(m->definition, p.rank());
    auto gens = p.generators();
    if (std::find(gens.begin(), gens.end(), m->name) != gens.end()) {
      throw IneligibleMove("generator name already in use");
    }
    gens.push_back(m->name);
    auto out = rels;
    out.push_back(Word::generator(p.rank(), -1) * m->definition);
    return Presentation(std::move(gens), std::move(out));
  }
  const auto& m = std::get<tietze::RemoveGenerator>(move);
  Word value = eliminated_value(p, m);
  auto images = elimination_images(p.rank(), m.generator, value);
  std::vector<Word> out;
  for (std::size_t i = 0; i < rels.size(); ++i) {
    if (i != m.relator) out.push_back(substitute(rels[i], images));
  }
  auto gens = p.generators();
  gens.erase(gens.begin() + static_cast<long>(m.generator));
  return Presentation(std::move(gens), std::move(out));
}

std::string describe(const TietzeMove& move, const Presentation& before) {
  std::ostringstream os;
  if (auto* m = std::get_if<tietze::AddRelator>(&move)) {
    os << "add relator " << before.format(m->relator);
  } else if (auto* m = std::get_if<tietze::RemoveRelator>(&move)) {
    os << "remove relator " << before.format(before.relators().at(m->index));
  } else if (auto* m = std::get_if<tietze::AddGenerator>(&move)) {
    os << "add generator " << m->name << " = " << before.format(m->definition);
  } else {
    const auto& r = std::get<tietze::RemoveGenerator>(move);
    os << "remove generator " << before.generators().at(r.generator) << " = "
       << before.format(eliminated_value(before, r));
  }
  return os.str();
}

Presentation replay(const Presentation& start, const std::vector<TietzeMove>& path) {
  Presentation p = start;
  for (const auto& m : path) p = tietze_step(p, m);
  return p;
}

// ---------------------------------------------------------------------------

namespace {

// Reduced words of a fixed length in shortlex order, one at a time.

struct Node {
  Presentation pres;
  std::ptrdiff_t parent;
  std::optional<TietzeMove> move;
  std::size_t weight;
};

bool within(const Presentation& q, const EnumerateOptions& opts) {
  if (opts.max_generators && q.rank() > *opts.max_generators) return false;
  if (opts.max_relator_length) {
    for (const auto& r : q.relators()) {
      if (r.size() > *opts.max_relator_length) return false;
    }
  }
  return true;
}

// Conjugator x with a = x b x^-1, for a a rotation of b.
std::optional<Word> rotation_conjugator(const Word& a, const Word& b) {
  if (a.size() != b.size()) return std::nullopt;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Word x = a.subword(0, k);
    if (a.subword(k, a.size()) * x == b) return x;
  }
  return std::nullopt;
}

}  // namespace

Process<TietzeEmission> enumerate_presentations(Presentation p, EnumerateOptions opts) {
  std::vector<Node> nodes;
  std::vector<std::vector<std::size_t>> layers;
  std::set<std::string> seen;

  auto emission = [&nodes](std::size_t idx) {
    TietzeEmission e{nodes[idx].pres, {}, nodes[idx].weight};
    for (auto i = static_cast<std::ptrdiff_t>(idx); nodes[i].parent >= 0; i = nodes[i].parent) {
      e.path.push_back(*nodes[i].move);
    }
    std::reverse(e.path.begin(), e.path.end());
    return e;
  };

  seen.insert(canonical_key(p));
  nodes.push_back({p, -1, std::nullopt, 0});
  layers.push_back({0});
  {
    Step<TietzeEmission> step_{1 + p.total_length(), emission(0)};
    co_yield std::move(step_);
  }

  for (std::size_t W = 1;; ++W) {
    std::vector<std::size_t> layer;
    std::uint64_t pending = 0;
    for (std::size_t c = 1; c <= W; ++c) {
      const auto source = layers[W - c];
      for (std::size_t idx : source) {
        const Presentation cur = nodes[idx].pres;
        const auto& rels = cur.relators();
        const std::size_t n = cur.rank();
        const std::size_t m = rels.size();

        std::vector<TietzeMove> batch;
        auto offer = [&](TietzeMove mv) -> bool {
          Presentation q;
          try {
            q = tietze_step(cur, mv);
          } catch (const IneligibleMove&) {
            return false;
          }
          pending += 1 + q.total_length();
          if (!within(q, opts)) return false;
          std::string key = canonical_key(q);
          if (!seen.insert(key).second) return false;
          nodes.push_back({std::move(q), static_cast<std::ptrdiff_t>(idx), std::move(mv),
                           W});
          layer.push_back(nodes.size() - 1);
          return true;
        };

        if (c == 1) {
          for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t g = 0; g < n; ++g) {
              if (occurrences(rels[r], g) == 1) offer(tietze::RemoveGenerator{g, r});
            }
          }
          for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
              if (i == j) continue;
              if (auto x = rotation_conjugator(rels[i], rels[j])) {
                offer(tietze::RemoveRelator{i, {{*x, j, 1}}});
              } else if (auto y = rotation_conjugator(rels[i], rels[j].inverse())) {
                offer(tietze::RemoveRelator{i, {{*y, j, -1}}});
              }
            }
          }
        }

        Word v;
        {
          ReducedWords defs(n, c - 1);
          while (defs.next(v)) {
            offer(tietze::AddGenerator{fresh_name(cur.generators()), v});
            if (pending > 256) {
              Step<TietzeEmission> step_{pending, std::nullopt};
              co_yield std::move(step_);
              pending = 0;
            }
          }
        }
        if (m > 0) {
          ReducedWords conj(n, c - 1);
          while (conj.next(v)) {
            for (std::size_t j = 0; j < m; ++j) {
              for (long d : {1L, -1L}) {
                Word tail = conjugate(rels[j].pow(d), v);
                for (std::size_t i = 0; i < m; ++i) {
                  offer(tietze::AddRelator{rels[i] * tail, {{Word{}, i, 1}, {v, j, d}}});
                }
                // r_i == r_k * tail up to conjugacy makes r_i redundant.
                for (std::size_t k = 0; k < m; ++k) {
                  Word prod = cyclic_reduce(rels[k] * tail).core;
                  for (std::size_t i = 0; i < m; ++i) {
                    if (i == j || i == k || prod.size() != rels[i].size()) continue;
                    if (is_rotation_of(prod, rels[i])) {
                      offer(tietze::RemoveRelator{i, {{Word{}, k, 1}, {v, j, d}}});
                    }
                  }
                }
              }
            }
            if (pending > 256) {
              Step<TietzeEmission> step_{pending, std::nullopt};
              co_yield std::move(step_);
              pending = 0;
            }
          }
        }
      }
    }
    std::stable_sort(layer.begin(), layer.end(), [&](std::size_t a, std::size_t b) {
      const auto& pa = nodes[a].pres;
      const auto& pb = nodes[b].pres;
      if (pa.total_length() != pb.total_length()) return pa.total_length() < pb.total_length();
      return serialize(pa) < serialize(pb);
    });
    layers.push_back(layer);
    if (pending) {
      Step<TietzeEmission> step_{pending, std::nullopt};
      co_yield std::move(step_);
    }
    for (std::size_t idx : layer) {
      Step<TietzeEmission> step_{1 + nodes[idx].pres.total_length(), emission(idx)};
      co_yield std::move(step_);
    }
  }
}

Process<Word> consequence_stream(Presentation p) {
  const auto& rels = p.relators();
  std::vector<std::vector<Word>> levels{{Word{}}};
  std::set<Word> seen{Word{}};
  {
    Step<Word> step_{1, Word{}};
    co_yield std::move(step_);
  }
  if (rels.empty()) co_return;
  for (std::size_t N = 1;; ++N) {
    std::vector<Word> level;
    std::uint64_t pending = 0;
    for (std::size_t c = 1; c <= N; ++c) {
      ReducedWords conj(p.rank(), c - 1);
      Word v;
      while (conj.next(v)) {
        for (const auto& r : rels) {
          for (long e : {1L, -1L}) {
            Word f = conjugate(r.pow(e), v);
            for (const auto& u : levels[N - c]) {
              Word w = u * f;
              pending += 1 + w.size() / 8;
              if (seen.insert(w).second) level.push_back(std::move(w));
            }
          }
        }
        if (pending > 512) {
          Step<Word> step_{pending, std::nullopt};
          co_yield std::move(step_);
          pending = 0;
        }
      }
    }
    std::sort(level.begin(), level.end());
    levels.push_back(level);
    if (pending) {
      Step<Word> step_{pending, std::nullopt};
      co_yield std::move(step_);
    }
    for (const auto& w : levels.back()) {
      Step<Word> step_{1, w};
      co_yield std::move(step_);
    }
  }
}

// ---------------------------------------------------------------------------

Simplified simplify(const Presentation& input) {
  Simplified s{input, {}, {}};
  for (std::size_t g = 0; g < input.rank(); ++g) s.substitution.push_back(Word::generator(g));

  auto apply = [&s](TietzeMove mv) {
    s.presentation = tietze_step(s.presentation, mv);
    s.moves.push_back(std::move(mv));
  };

  for (;;) {
    const auto& rels = s.presentation.relators();
    bool moved = false;
    for (std::size_t i = 0; i < rels.size() && !moved; ++i) {
      for (std::size_t j = 0; j < i && !moved; ++j) {
        if (auto x = rotation_conjugator(rels[i], rels[j])) {
          apply(tietze::RemoveRelator{i, {{*x, j, 1}}});
          moved = true;
        } else if (auto y = rotation_conjugator(rels[i], rels[j].inverse())) {
          apply(tietze::RemoveRelator{i, {{*y, j, -1}}});
          moved = true;
        }
      }
    }
    if (moved) continue;

    // Best elimination: shortest defining relator, then lowest indices.
    std::optional<tietze::RemoveGenerator> best;
    std::size_t best_len = 0;
    const std::size_t n = s.presentation.rank();
    for (std::size_t r = 0; r < rels.size(); ++r) {
      const std::size_t L = rels[r].size();
      if (best && L >= best_len) continue;
      for (std::size_t g = 0; g < n; ++g) {
        if (occurrences(rels[r], g) != 1) continue;
        std::size_t elsewhere = 0;
        for (std::size_t k = 0; k < rels.size(); ++k) {
          if (k != r) elsewhere += occurrences(rels[k], g);
        }
        bool shrinks = L <= 2 || elsewhere * (L - 2) <= L;
        if (shrinks) {
          best = tietze::RemoveGenerator{g, r};
          best_len = L;
          break;
        }
      }
    }
    if (!best) break;
    Word value = eliminated_value(s.presentation, *best);
    auto images = elimination_images(n, best->generator, value);
    for (auto& w : s.substitution) w = substitute(w, images);
    apply(*best);
  }
  return s;
}

}  // namespace limitforge
