#include <deque>
#include <set>

#include "limitforge/ice.hpp"

namespace limitforge {

namespace {

// Towers over `t` whose remaining steps weigh exactly `remaining`.
Process<IceTower> extensions(IceTower t, std::size_t remaining) {
  if (remaining == 0) {
    Step<IceTower> step_{1, std::move(t)};
    co_yield std::move(step_);
    co_return;
  }
  for (std::size_t len = 1; len < remaining; ++len) {
    ReducedWords words(t.rank(), len);
    for (Word g; words.next(g);) {
      Step<IceTower> tick_{len, std::nullopt};
      co_yield std::move(tick_);
      if (t.trivial(g)) continue;
      for (std::size_t n = 1; len + n <= remaining; ++n) {
        auto sub = extensions(extend_centralizer(t, g, n), remaining - len - n);
        while (auto s = sub.next()) {
          Step<IceTower> fwd_ = std::move(*s);
          co_yield std::move(fwd_);
        }
      }
    }
  }
}

// Strictly increasing tuples from words[start..] of the given size whose
// lengths sum to total, in lexicographic order.
Generator<std::vector<Word>> tuples(const std::vector<Word>* words, std::size_t start,
                                    std::size_t total, std::size_t size) {
  if (size == 0) {
    if (total == 0) {
      std::vector<Word> empty_;
      co_yield std::move(empty_);
    }
    co_return;
  }
  for (std::size_t i = start; i < words->size(); ++i) {
    const Word& w = (*words)[i];
    if (w.size() > total) break;
    auto rest = tuples(words, i + 1, total - w.size(), size - 1);
    while (auto r = rest.next()) {
      std::vector<Word> out{w};
      out.insert(out.end(), r->begin(), r->end());
      co_yield std::move(out);
    }
  }
}

// Subset 0 is the generating set; then sets of nontrivial reduced words by
// (total length, size, lexicographic).
Generator<std::vector<Word>> subsets(IceTower t) {
  std::vector<Word> all;
  for (std::size_t g = 0; g < t.rank(); ++g) all.push_back(Word::generator(g));
  co_yield std::move(all);
  std::vector<Word> words;  // nontrivial words of length <= total, shortlex
  for (std::size_t total = 1;; ++total) {
    ReducedWords next(t.rank(), total);
    for (Word w; next.next(w);) {
      if (!t.trivial(w)) words.push_back(w);
    }
    for (std::size_t size = 1; size <= total; ++size) {
      auto gen = tuples(&words, 0, total, size);
      while (auto s = gen.next()) {
        std::vector<Word> s_ = std::move(*s);
        co_yield std::move(s_);
      }
    }
  }
}

struct TowerSlot {
  IceTower tower;
  Presentation presentation;
  OraclePtr oracle;
  Generator<std::vector<Word>> stream;
};

struct Pair {
  std::size_t tower = 0;
  std::vector<Word> S;
  std::size_t entry = 0;
  std::uint64_t used = 0;
  Process<Retraction> search;
};

bool scheduled(std::size_t age) { return age == 0 || (age & (age - 1)) == 0; }

}  // namespace

Process<IceTower> enumerate_ice() {
  for (std::size_t weight = 1;; ++weight) {
    for (std::size_t base = 1; base <= weight; ++base) {
      auto sub = extensions(IceTower(base), weight - base);
      while (auto s = sub.next()) {
        Step<IceTower> fwd_ = std::move(*s);
        co_yield std::move(fwd_);
      }
    }
  }
}

SubgroupResult subgroup_presentation_limit(const IceTower& t, const std::vector<Word>& S,
                                           SubgroupOptions opts) {
  return subgroup_presentation_lr(presentation_of(t), S, std::make_shared<IceOracle>(t), opts);
}

Process<LimitEmission> enumerate_limit_groups(LimitOptions opts) {
  auto towers = enumerate_ice();
  std::deque<TowerSlot> slots;
  std::vector<Pair> live;
  std::set<std::string> seen;

  for (std::size_t round = 0;; ++round) {
    // Pairs (i, j) with i + 3j == round enter now.
    for (std::size_t j = 0; 3 * j <= round; ++j) {
      std::size_t i = round - 3 * j;
      while (slots.size() <= i) {
        auto s = towers.next();
        Step<LimitEmission> tick_{s->work, std::nullopt};
        co_yield std::move(tick_);
        if (s->value) {
          auto oracle = std::make_shared<IceOracle>(*s->value);
          auto pres = presentation_of(*s->value);
          slots.push_back(TowerSlot{*s->value, std::move(pres), oracle, subsets(*s->value)});
        }
      }
      auto S = slots[i].stream.next();
      Pair p;
      p.tower = i;
      p.S = std::move(*S);
      p.entry = round;
      p.search = find_retraction(slots[i].presentation, p.S, slots[i].oracle);
      live.push_back(std::move(p));
    }

    for (std::size_t k = 0; k < live.size();) {
      Pair& p = live[k];
      if (!scheduled(round - p.entry)) {
        ++k;
        continue;
      }
      std::optional<Retraction> found;
      std::uint64_t spent = 0;
      bool finished = false;
      while (spent < opts.quantum) {
        auto s = p.search.next();
        if (!s) {
          finished = true;
          break;
        }
        spent += s->work;
        Step<LimitEmission> tick_{s->work, std::nullopt};
        co_yield std::move(tick_);
        if (s->value) {
          found = std::move(s->value);
          break;
        }
      }
      p.used += spent;
      if (finished) {
        live.erase(live.begin() + static_cast<long>(k));
        continue;
      }
      if (!found) {
        ++k;
        continue;
      }
      const TowerSlot& slot = slots[p.tower];
      LimitEmission e;
      e.tower_index = p.tower;
      e.tower = slot.tower;
      e.S = p.S;
      e.subgroup = subgroup_from_retraction(*found, slot.oracle, {}, p.used);
      e.presentation = e.subgroup.presentation;
      live.erase(live.begin() + static_cast<long>(k));
      if (e.subgroup.status != SearchStatus::Found) continue;
      if (opts.dedup && !seen.insert(canonical_key(e.presentation)).second) continue;
      Step<LimitEmission> out_{1, std::move(e)};
      co_yield std::move(out_);
    }
  }
}

}  // namespace limitforge
