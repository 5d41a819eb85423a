#include "limitforge/oracle.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "limitforge/coset.hpp"
#include "limitforge/tietze.hpp"

namespace limitforge {

const char* to_string(Answer a) {
  switch (a) {
    case Answer::Trivial: return "trivial";
    case Answer::Nontrivial: return "nontrivial";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Tri t) {
  switch (t) {
    case Tri::True: return "true";
    case Tri::False: return "false";
    case Tri::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Injectivity i) {
  switch (i) {
    case Injectivity::Injective: return "injective";
    case Injectivity::NotInjective: return "not-injective";
    case Injectivity::ConfirmedInjective: return "confirmed-injective";
    case Injectivity::Unknown: return "unknown";
  }
  return "?";
}

Answer WordOracle::query(const Word& w) {
  if (w.support_rank() > rank_) throw AlphabetError("query outside the oracle's alphabet");
  ++queries_;
  if (w.empty()) return Answer::Trivial;
  if (auto it = cache_.find(w); it != cache_.end()) return it->second;
  Answer a = decide(w);
  if (a != Answer::Unknown) cache_.emplace(w, a);
  return a;
}

Answer FreeOracle::decide(const Word& w) {
  add_work(w.size());
  return w.empty() ? Answer::Trivial : Answer::Nontrivial;
}

// ---------------------------------------------------------------------------

AbelianOracle::AbelianOracle(const Presentation& p) : WordOracle(p.rank()) {
  std::set<Word> have;
  for (const auto& r : p.relators()) have.insert(cyclic_canonical(r));
  std::set<Word> want;
  for (std::size_t i = 0; i < p.rank(); ++i) {
    for (std::size_t j = i + 1; j < p.rank(); ++j) {
      want.insert(cyclic_canonical(commutator(Word::generator(i), Word::generator(j))));
    }
  }
  if (have != want) {
    throw OracleError("builtin:abelian needs exactly the commutators of all generator pairs");
  }
}

Answer AbelianOracle::decide(const Word& w) {
  add_work(w.size());
  std::vector<long> sums(rank(), 0);
  for (Letter l : w) sums[generator_of(l)] += sign_of(l);
  return std::all_of(sums.begin(), sums.end(), [](long s) { return s == 0; })
             ? Answer::Trivial
             : Answer::Nontrivial;
}

// ---------------------------------------------------------------------------

FiniteOracle::FiniteOracle(const Presentation& p, std::size_t max_cosets)
    : WordOracle(p.rank()) {
  auto t = todd_coxeter(p, {}, {max_cosets, true});
  if (!t) throw OracleError("builtin:finite: coset enumeration overflowed");
  table_ = t->rows();
}

Answer FiniteOracle::decide(const Word& w) {
  add_work(w.size());
  int c = 0;
  for (Letter l : w) c = table_[c][letter_code(l)];
  return c == 0 ? Answer::Trivial : Answer::Nontrivial;
}

// ---------------------------------------------------------------------------

ProductOracle::ProductOracle(std::size_t rank, std::vector<Block> blocks)
    : WordOracle(rank), blocks_(std::move(blocks)) {
  std::vector<int> owner(rank, -1);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto& blk = blocks_[b];
    if (!blk.oracle || blk.oracle->rank() != blk.generators.size()) {
      throw OracleError("product block oracle does not match its generators");
    }
    for (auto g : blk.generators) {
      if (g >= rank || owner[g] != -1) throw OracleError("product blocks must partition the generators");
      owner[g] = static_cast<int>(b);
    }
  }
  if (std::find(owner.begin(), owner.end(), -1) != owner.end()) {
    throw OracleError("product blocks must partition the generators");
  }
}

Completeness ProductOracle::completeness() const {
  for (const auto& b : blocks_) {
    if (b.oracle->completeness() != Completeness::Total) return Completeness::SemiDecision;
  }
  return Completeness::Total;
}

Answer ProductOracle::decide(const Word& w) {
  add_work(w.size());
  bool unknown = false;
  for (const auto& blk : blocks_) {
    std::vector<Letter> proj;
    for (Letter l : w) {
      auto it = std::find(blk.generators.begin(), blk.generators.end(), generator_of(l));
      if (it != blk.generators.end()) {
        proj.push_back(make_letter(static_cast<std::size_t>(it - blk.generators.begin()), sign_of(l)));
      }
    }
    Answer a = blk.oracle->query(Word::reduce(proj));
    if (a == Answer::Nontrivial) return a;
    unknown = unknown || a == Answer::Unknown;
  }
  return unknown ? Answer::Unknown : Answer::Trivial;
}

// ---------------------------------------------------------------------------

KleinOracle::KleinOracle(const Presentation& p) : WordOracle(2) {
  Word expected = parse_word("b*a*b^-1*a", {"a", "b"});
  if (p.rank() != 2 || p.relators().size() != 1 ||
      cyclic_canonical(p.relators()[0]) != cyclic_canonical(expected)) {
    throw OracleError("builtin:klein expects <a, b | b*a*b^-1*a>");
  }
}

Answer KleinOracle::decide(const Word& w) {
  add_work(w.size());
  // Normal form b^s a^t, using a^t b = b a^-t.
  long s = 0;
  long t = 0;
  for (Letter l : w) {
    if (generator_of(l) == 0) {
      t += sign_of(l);
    } else {
      s += sign_of(l);
      t = -t;
    }
  }
  return s == 0 && t == 0 ? Answer::Trivial : Answer::Nontrivial;
}

// ---------------------------------------------------------------------------

PullbackOracle::PullbackOracle(OraclePtr target, std::vector<Word> images)
    : WordOracle(images.size()), target_(std::move(target)), images_(std::move(images)) {
  for (const auto& w : images_) {
    if (w.support_rank() > target_->rank()) throw AlphabetError("pullback image outside target");
  }
}

Answer PullbackOracle::decide(const Word& w) {
  Word image = substitute(w, images_);
  add_work(image.size() + 1);
  return target_->query(image);
}

// ---------------------------------------------------------------------------

struct DovetailOracle::State {
  Presentation p;
  std::uint64_t per_query;
  Process<Word> consequences;
  bool consequences_done = false;
  std::unordered_set<Word> trivial;
  Process<CosetTable> quotients;
  bool quotients_done = false;
  std::vector<CosetTable> tables;
};

DovetailOracle::DovetailOracle(const Presentation& p, std::uint64_t per_query_budget,
                               std::size_t max_index)
    : WordOracle(p.rank()), state_(std::make_unique<State>()) {
  state_->p = p;
  state_->per_query = per_query_budget;
  state_->consequences = consequence_stream(p);
  state_->quotients = low_index(p, max_index);
}

DovetailOracle::~DovetailOracle() = default;

Answer DovetailOracle::decide(const Word& w) {
  State& s = *state_;
  const Word core = cyclic_reduce(w).core;
  auto moves = [&](const CosetTable& t) {
    for (int c = 0; c < static_cast<int>(t.size()); ++c) {
      if (t.trace(c, core) != c) return true;
    }
    return false;
  };
  for (const auto& t : s.tables) {
    if (moves(t)) return Answer::Nontrivial;
  }
  if (s.trivial.count(core)) return Answer::Trivial;

  Budget budget(s.per_query);
  while (!budget.exhausted() && !(s.consequences_done && s.quotients_done)) {
    if (!s.consequences_done) {
      auto step = s.consequences.next();
      if (!step) {
        s.consequences_done = true;
      } else {
        budget.charge(step->work);
        add_work(step->work);
        if (step->value) {
          Word v = cyclic_reduce(*step->value).core;
          bool hit = v == core;
          s.trivial.insert(std::move(v));
          if (hit) return Answer::Trivial;
        }
      }
    }
    if (!s.quotients_done) {
      auto step = s.quotients.next();
      if (!step) {
        s.quotients_done = true;
      } else {
        budget.charge(step->work);
        add_work(step->work);
        if (step->value) {
          s.tables.push_back(std::move(*step->value));
          if (moves(s.tables.back())) return Answer::Nontrivial;
        }
      }
    }
  }
  // An exhausted consequence stream lists every trivial word.
  if (s.consequences_done) return Answer::Nontrivial;
  return Answer::Unknown;
}

// ---------------------------------------------------------------------------

Tri check_hom(const Presentation& source, const std::vector<Word>& images, WordOracle& target) {
  if (images.size() != source.rank()) throw AlphabetError("one image per source generator");
  bool unknown = false;
  for (const auto& r : source.relators()) {
    Answer a = target.query(substitute(r, images));
    if (a == Answer::Nontrivial) return Tri::False;
    unknown = unknown || a == Answer::Unknown;
  }
  return unknown ? Tri::Unknown : Tri::True;
}

Injectivity is_injective(const Presentation& source, const std::vector<Word>& images,
                         WordOracle& wp_source, const ImageData& image, std::uint64_t budget) {
  if (images.size() != source.rank() || image.images_in_generators.size() != source.rank() ||
      image.generators_in_source.size() != image.presentation.rank()) {
    throw AlphabetError("image data does not match the homomorphism");
  }
  // The candidate inverse sends image generator j to generators_in_source[j].
  std::vector<Word> checks;
  for (const auto& r : image.presentation.relators()) {
    checks.push_back(substitute(r, image.generators_in_source));
  }
  for (std::size_t i = 0; i < source.rank(); ++i) {
    checks.push_back(substitute(image.images_in_generators[i], image.generators_in_source) *
                     Word::generator(i, -1));
  }

  if (wp_source.completeness() == Completeness::Total) {
    bool unknown = false;
    for (const auto& w : checks) {
      Answer a = wp_source.query(w);
      if (a == Answer::Nontrivial) return Injectivity::NotInjective;
      unknown = unknown || a == Answer::Unknown;
    }
    return unknown ? Injectivity::Unknown : Injectivity::Injective;
  }

  std::set<Word> pending;
  for (const auto& w : checks) {
    if (!w.empty()) pending.insert(w);
  }
  if (pending.empty()) return Injectivity::ConfirmedInjective;
  auto stream = consequence_stream(source);
  Budget b(budget);
  while (!b.exhausted()) {
    auto step = stream.next();
    if (!step) break;
    b.charge(step->work);
    if (step->value) {
      pending.erase(*step->value);
      if (pending.empty()) return Injectivity::ConfirmedInjective;
    }
  }
  return Injectivity::Unknown;
}

}  // namespace limitforge
