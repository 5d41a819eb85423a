#include <cstdlib>
#include <stdexcept>
#include <unordered_map>

#include "limitforge/recognize.hpp"

namespace limitforge {

std::uint64_t default_budget() {
  if (const char* env = std::getenv("LIMITFORGE_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return 10000000;
}

const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Limit: return "limit";
    case VerdictKind::NotLimit: return "not-limit";
    case VerdictKind::Unknown: return "unknown";
  }
  return "?";
}

const char* to_string(FreeKind k) {
  switch (k) {
    case FreeKind::Free: return "free";
    case FreeKind::NotFree: return "not-free";
    case FreeKind::Unknown: return "unknown";
  }
  return "?";
}

namespace {

struct MatchProgress {
  std::uint64_t emissions = 0;
  std::uint64_t presentations = 0;
};

// Branch (a): limit-group emissions, each followed by its own Tietze
// enumeration, matched by canonical key against the Tietze enumeration of
// the input. Every stream gets the same slice per cycle.
Process<LimitChain> match_limit(Presentation p, std::shared_ptr<MatchProgress> progress) {
  constexpr std::uint64_t kSlice = 256;
  struct Source {
    LimitEmission emission;
    Process<TietzeEmission> stream;
    bool done = false;
  };
  LimitOptions lo;
  lo.dedup = true;
  auto limits = enumerate_limit_groups(lo);
  auto input = enumerate_presentations(p);
  bool input_done = false;
  std::vector<Source> sources;
  std::unordered_map<std::string, std::vector<TietzeMove>> input_keys;
  std::unordered_map<std::string, std::pair<std::size_t, std::vector<TietzeMove>>> emitted_keys;

  while (true) {
    for (std::uint64_t spent = 0; spent < kSlice;) {
      auto s = limits.next();
      spent += s->work;
      Step<LimitChain> tick_{s->work, std::nullopt};
      co_yield std::move(tick_);
      if (s->value) {
        ++progress->emissions;
        auto stream = enumerate_presentations(s->value->presentation);
        sources.push_back(Source{std::move(*s->value), std::move(stream)});
        break;
      }
    }

    for (std::uint64_t spent = 0; !input_done && spent < kSlice;) {
      auto s = input.next();
      if (!s) {
        input_done = true;
        break;
      }
      spent += s->work;
      Step<LimitChain> tick_{s->work, std::nullopt};
      co_yield std::move(tick_);
      if (!s->value) continue;
      ++progress->presentations;
      std::string key = canonical_key(s->value->presentation);
      if (input_keys.count(key)) continue;
      input_keys.emplace(key, s->value->path);
      if (auto it = emitted_keys.find(key); it != emitted_keys.end()) {
        Step<LimitChain> hit_{1, LimitChain{sources[it->second.first].emission, key, s->value->path,
                                            it->second.second}};
        co_yield std::move(hit_);
      }
    }

    for (std::size_t i = 0; i < sources.size(); ++i) {
      for (std::uint64_t spent = 0; !sources[i].done && spent < kSlice;) {
        auto s = sources[i].stream.next();
        if (!s) {
          sources[i].done = true;
          break;
        }
        spent += s->work;
        Step<LimitChain> tick_{s->work, std::nullopt};
        co_yield std::move(tick_);
        if (!s->value) continue;
        ++progress->presentations;
        std::string key = canonical_key(s->value->presentation);
        if (emitted_keys.count(key)) continue;
        emitted_keys.emplace(key, std::pair{i, s->value->path});
        if (auto it = input_keys.find(key); it != input_keys.end()) {
          Step<LimitChain> hit_{1, LimitChain{sources[i].emission, key, it->second, s->value->path}};
          co_yield std::move(hit_);
        }
      }
    }
  }
}

Tri verify_chain(const Presentation& p, const LimitChain& c) {
  const LimitEmission& e = c.emission;
  if (!e.subgroup.retraction) return Tri::False;
  auto ice = std::make_shared<IceOracle>(e.tower);
  Tri r = verify_retraction(presentation_of(e.tower), e.S, *e.subgroup.retraction, *ice);
  if (r != Tri::True) return r;
  auto again = subgroup_from_retraction(*e.subgroup.retraction, ice);
  if (again.status != SearchStatus::Found || again.presentation != e.presentation) return Tri::False;
  try {
    if (canonical_key(replay(p, c.input_path)) != c.key) return Tri::False;
    if (canonical_key(replay(e.presentation, c.emission_path)) != c.key) return Tri::False;
  } catch (const IneligibleMove&) {
    return Tri::False;
  }
  return Tri::True;
}

void require_total(const Presentation& p, const WordOracle& wp) {
  if (wp.completeness() != Completeness::Total) {
    throw std::invalid_argument("recognition needs a total word-problem oracle, got " + wp.name());
  }
  if (wp.rank() != p.rank()) throw std::invalid_argument("oracle rank does not match the presentation");
}

// Runs a process for at most `slice` work units.
template <typename T>
std::optional<T> run_slice(Process<T>& proc, std::uint64_t slice, std::uint64_t& used) {
  for (std::uint64_t spent = 0; spent < slice;) {
    auto s = proc.next();
    if (!s) return std::nullopt;
    spent += s->work;
    used += s->work;
    if (s->value) return std::move(s->value);
  }
  return std::nullopt;
}

}  // namespace

Verdict recognize_limit(const Presentation& p, OraclePtr wp, RecognizeOptions opts) {
  require_total(p, *wp);
  Verdict v;
  v.budget = opts.budget;
  auto progress = std::make_shared<MatchProgress>();
  auto stats = std::make_shared<WitnessSearchStats>();
  Process<LimitChain> a;
  Process<Witness> b;
  if (opts.enumerate) a = match_limit(p, progress);
  if (opts.certify) b = witness_search(p, wp, stats);

  auto finish = [&](Verdict& out) {
    out.emissions = progress->emissions;
    out.presentations = progress->presentations;
    out.candidates = stats->candidates;
    return out;
  };
  while (v.steps_limit + v.steps_witness < opts.budget && (a.valid() || b.valid())) {
    auto remaining = [&] { return opts.budget - v.steps_limit - v.steps_witness; };
    if (a.valid()) {
      if (auto chain = run_slice(a, std::min(opts.slice, remaining()), v.steps_limit)) {
        if (verify_chain(p, *chain) == Tri::True) {
          v.kind = VerdictKind::Limit;
          v.chain = std::move(chain);
          return finish(v);
        }
      }
    }
    if (b.valid() && remaining() > 0) {
      if (auto w = run_slice(b, std::min(opts.slice, remaining()), v.steps_witness)) {
        if (check_witness(p, *w, *wp) == Tri::True) {
          v.kind = VerdictKind::NotLimit;
          v.witness = std::move(w);
          return finish(v);
        }
      }
    }
  }
  return finish(v);
}

Tri verify_verdict(const Presentation& p, const Verdict& v, WordOracle& wp) {
  switch (v.kind) {
    case VerdictKind::Limit:
      return v.chain ? verify_chain(p, *v.chain) : Tri::False;
    case VerdictKind::NotLimit: {
      if (!v.witness) return Tri::False;
      Tri t = check_witness(p, *v.witness, wp);
      if (t != Tri::True) return t;
      return refute_sentence(sentence_of(p, *v.witness), 2) ? Tri::False : Tri::True;
    }
    case VerdictKind::Unknown:
      return Tri::Unknown;
  }
  return Tri::Unknown;
}

FreeVerdict recognize_free(const Presentation& p, OraclePtr wp, RecognizeOptions opts) {
  require_total(p, *wp);
  FreeVerdict v;
  v.budget = opts.budget;
  auto ab = abelianization(p);
  if (!ab.torsion.empty()) {
    v.kind = FreeKind::NotFree;
    v.reason = "torsion in abelianization";
    return v;
  }
  if (ab.free_rank >= 2) {
    bool abelian = true;
    for (std::size_t x = 0; x < p.rank() && abelian; ++x) {
      for (std::size_t y = x + 1; y < p.rank() && abelian; ++y) {
        ++v.steps;
        abelian = wp->query(commutator(Word::generator(x), Word::generator(y))) == Answer::Trivial;
      }
    }
    if (abelian) {
      v.kind = FreeKind::NotFree;
      v.reason = "abelian, noncyclic";
      return v;
    }
  }

  Process<TietzeEmission> a;
  Process<Witness> b;
  if (opts.enumerate) a = enumerate_presentations(p);
  if (opts.certify) b = witness_search(p, wp);
  std::uint64_t steps_a = 0, steps_b = 0;
  while (v.steps + steps_a + steps_b < opts.budget && (a.valid() || b.valid())) {
    auto remaining = [&] { return opts.budget - v.steps - steps_a - steps_b; };
    if (a.valid()) {
      for (std::uint64_t spent = 0; spent < std::min(opts.slice, remaining());) {
        auto s = a.next();
        if (!s) {
          a = Process<TietzeEmission>();
          break;
        }
        spent += s->work;
        steps_a += s->work;
        if (s->value && s->value->presentation.relators().empty()) {
          v.kind = FreeKind::Free;
          v.reason = "relator-free presentation";
          v.free_form = std::move(s->value);
          v.steps += steps_a + steps_b;
          return v;
        }
      }
    }
    if (b.valid() && remaining() > 0) {
      if (auto w = run_slice(b, std::min(opts.slice, remaining()), steps_b)) {
        if (check_witness(p, *w, *wp) == Tri::True) {
          v.kind = FreeKind::NotFree;
          v.reason = std::string("witness: ") + to_string(w->kind);
          v.witness = std::move(w);
          v.steps += steps_a + steps_b;
          return v;
        }
      }
    }
  }
  v.steps += steps_a + steps_b;
  return v;
}

}  // namespace limitforge
