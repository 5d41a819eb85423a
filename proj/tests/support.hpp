// Shared helpers for the test suites: seeded random words and small
// brute-force oracles that do not share code with the library algorithms.

#ifndef LIMITFORGE_TESTS_SUPPORT_HPP_
#define LIMITFORGE_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "limitforge/presentation.hpp"
#include "limitforge/word.hpp"

namespace support {

using limitforge::Letter;
using limitforge::Word;
using limitforge::Presentation;
using limitforge::generator_of;
using limitforge::sign_of;

inline std::vector<Letter> random_raw(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<int> gen(0, static_cast<int>(rank) - 1);
  std::bernoulli_distribution neg(0.5);
  std::vector<Letter> out(len(rng));
  for (auto& l : out) l = limitforge::make_letter(static_cast<std::size_t>(gen(rng)), neg(rng) ? -1 : 1);
  return out;
}

inline Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
  return Word::reduce(random_raw(rng, rank, max_len));
}

// Naive free reduction by repeated pair deletion.
inline std::vector<Letter> naive_reduce(std::vector<Letter> w) {
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == -w[i + 1]) {
        w.erase(w.begin() + static_cast<long>(i), w.begin() + static_cast<long>(i) + 2);
        changed = true;
        break;
      }
    }
  }
  return w;
}

inline std::vector<Letter> concat(std::vector<Letter> a, const std::vector<Letter>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

inline std::vector<Letter> power(const std::vector<Letter>& a, long n) {
  std::vector<Letter> out;
  for (long i = 0; i < n; ++i) out = concat(out, a);
  return naive_reduce(out);
}

// All reduced words of length <= n, generated by naive extension.
inline std::vector<Word> ball(std::size_t rank, std::size_t n) {
  std::vector<Word> out{Word{}};
  std::vector<std::vector<Letter>> frontier{{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::vector<Letter>> next;
    for (const auto& w : frontier) {
      for (std::size_t g = 0; g < rank; ++g) {
        for (int s : {1, -1}) {
          Letter l = limitforge::make_letter(g, s);
          if (!w.empty() && w.back() == -l) continue;
          auto v = w;
          v.push_back(l);
          next.push_back(v);
          out.push_back(Word::reduce(v));
        }
      }
    }
    frontier = std::move(next);
  }
  return out;
}

// Maximal k with w = r^k: every candidate root p q p^-1 with p a prefix of
// w and q the subword following it is raised to every power up to |w|.
inline long brute_root_exponent(const Word& w) {
  const auto& l = w.letters();
  long best = 1;
  for (std::size_t start = 0; start < l.size(); ++start) {
    std::vector<Letter> pre(l.begin(), l.begin() + static_cast<long>(start));
    std::vector<Letter> pre_inv;
    for (auto it = pre.rbegin(); it != pre.rend(); ++it) pre_inv.push_back(-*it);
    for (std::size_t len = 1; start + len <= l.size(); ++len) {
      std::vector<Letter> q(l.begin() + static_cast<long>(start),
                            l.begin() + static_cast<long>(start + len));
      auto root = naive_reduce(concat(concat(pre, q), pre_inv));
      if (root.empty()) continue;
      for (long k = 2; static_cast<std::size_t>(k) <= l.size(); ++k) {
        if (power(root, k) == l) best = std::max(best, k);
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Permutation representations.

using Perm = std::vector<int>;

inline Perm compose(const Perm& p, const Perm& q) {  // p then q
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
  return r;
}

inline Perm invert(const Perm& p) {
  Perm r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
  return r;
}

inline Perm evaluate(const Word& w, const std::vector<Perm>& gens, const std::vector<Perm>& invs) {
  Perm r(gens[0].size());
  std::iota(r.begin(), r.end(), 0);
  for (Letter l : w) r = compose(r, sign_of(l) > 0 ? gens[generator_of(l)] : invs[generator_of(l)]);
  return r;
}

inline std::set<Perm> closure(const std::vector<Perm>& gens) {
  Perm id(gens[0].size());
  std::iota(id.begin(), id.end(), 0);
  std::set<Perm> seen{id};
  std::vector<Perm> todo{id};
  while (!todo.empty()) {
    Perm p = todo.back();
    todo.pop_back();
    for (const auto& g : gens) {
      Perm q = compose(p, g);
      if (seen.insert(q).second) todo.push_back(q);
    }
  }
  return seen;
}

// Largest image of the group among all homomorphisms into S_degree: the
// group order whenever the group has a faithful action on `degree` points.
inline std::size_t brute_order(const Presentation& p, int degree) {
  std::vector<Perm> all;
  Perm p0(static_cast<std::size_t>(degree));
  std::iota(p0.begin(), p0.end(), 0);
  do all.push_back(p0);
  while (std::next_permutation(p0.begin(), p0.end()));

  std::size_t best = 0;
  std::vector<std::size_t> idx(p.rank(), 0);
  for (;;) {
    std::vector<Perm> gens;
    std::vector<Perm> invs;
    for (auto i : idx) {
      gens.push_back(all[i]);
      invs.push_back(invert(all[i]));
    }
    bool ok = true;
    for (const auto& r : p.relators()) {
      if (evaluate(r, gens, invs) != all[0]) {
        ok = false;
        break;
      }
    }
    if (ok) best = std::max(best, closure(gens).size());
    std::size_t k = 0;
    while (k < idx.size() && ++idx[k] == all.size()) idx[k++] = 0;
    if (k == idx.size()) break;
  }
  return best;
}

// Number of subgroups of index n in a free group of rank r.
inline std::vector<long long> hall_counts(int r, int n) {
  std::vector<long long> fact(n + 1, 1);
  for (int i = 1; i <= n; ++i) fact[i] = fact[i - 1] * i;
  auto pw = [&](long long b) {
    long long x = 1;
    for (int i = 0; i < r - 1; ++i) x *= b;
    return x;
  };
  std::vector<long long> a(n + 1, 0);
  for (int m = 1; m <= n; ++m) {
    long long v = m * pw(fact[m]);
    for (int k = 1; k < m; ++k) v -= pw(fact[m - k]) * a[k];
    a[m] = v;
  }
  return a;
}

struct FiniteCase {
  const char* text;
  int degree;  // a faithful permutation degree for the brute-force oracle
};

inline const FiniteCase kFiniteCorpus[] = {
    {"< a, b | a^2, b^3, (a*b)^3 >", 4},  {"< a | a^5 >", 5},
    {"< a, b | a^2, b^3, (a*b)^2 >", 3},  {"< a, b | a^2, b^5, (a*b)^2 >", 5},
    {"< a, b | a^2, b^3, (a*b)^4 >", 4},  {"< a, b | a^2, b^3, (a*b)^5 >", 5},
    {"< a, b | a^2, b^4, (a*b)^2 >", 4},  {"< a, b | a^3, b^3, [a,b] >", 6},
    {"< a, b | a^2, b^6, (a*b)^2 >", 5},  {"< a, b | a^2, b^3, [a,b] >", 5},
};


}  // namespace support

#endif  // LIMITFORGE_TESTS_SUPPORT_HPP_
