#include <random>
#include <set>

#include "doctest.h"
#include "limitforge/ice.hpp"
#include "support.hpp"

using namespace limitforge;

namespace {

IceTower from(std::size_t base, std::initializer_list<std::pair<const char*, std::size_t>> steps) {
  IceTower t(base);
  for (const auto& [g, n] : steps) t = extend_centralizer(t, parse_word(g, t.names()), n);
  return t;
}

// Products of conjugates of relators: trivial by construction.
Word random_consequence(std::mt19937_64& rng, const Presentation& p, int factors) {
  Word out;
  std::uniform_int_distribution<std::size_t> pick(0, p.relators().size() - 1);
  std::bernoulli_distribution flip(0.5);
  for (int i = 0; i < factors; ++i) {
    Word r = p.relators()[pick(rng)];
    if (flip(rng)) r = r.inverse();
    out *= conjugate(r, support::random_word(rng, p.rank(), 3));
  }
  return out;
}

// x is a product of powers of the basis with exponents in [-bound, bound].
bool in_span(const IceTower& t, const Word& x, const std::vector<Word>& basis, long bound) {
  std::vector<long> e(basis.size(), -bound);
  while (true) {
    Word w;
    for (std::size_t i = 0; i < e.size(); ++i) w *= basis[i].pow(e[i]);
    if (t.trivial(w * x.inverse())) return true;
    std::size_t i = e.size();
    while (i > 0 && e[i - 1] == bound) e[--i] = -bound;
    if (i == 0) return false;
    ++e[i - 1];
  }
}

std::vector<IceTower> sample_towers() {
  return {from(2, {{"a", 1}}),
          from(2, {{"a", 1}, {"t", 1}}),
          from(2, {{"a*b", 1}, {"b", 2}}),
          from(1, {{"a", 1}, {"t", 1}}),
          from(2, {{"a", 1}, {"b*t", 1}}),
          from(2, {{"a^2*b", 1}, {"[a,b]", 1}})};
}

}  // namespace

TEST_CASE("tower presentations") {
  auto t1 = from(2, {{"a", 1}});
  CHECK(presentation_of(t1) == parse_presentation("< a, b, t | [a,t] >"));
  auto t2 = extend_centralizer(t1, parse_word("t", t1.names()), 1);
  CHECK(presentation_of(t2) == parse_presentation("< a, b, t, u | [a,t], [a,u], [t,u] >"));
  CHECK(t2.rank() == 4);
  CHECK(t2.rank(1) == 3);
  CHECK(t2.first_new(2) == 3);
  CHECK(presentation_of(IceTower(3)) == Presentation::free(3));
  CHECK(presentation_of(from(1, {{"a", 2}})) ==
        parse_presentation("< a, t, u | [a,t], [a,u], [t,u] >"));
}

TEST_CASE("extension rejects trivial elements and foreign letters") {
  auto t1 = from(2, {{"a", 1}});
  auto n = t1.names();
  CHECK_THROWS_AS(extend_centralizer(t1, parse_word("[a,t]", n), 1), TrivialElement);
  CHECK_THROWS_AS(extend_centralizer(t1, Word{}, 1), TrivialElement);
  CHECK_THROWS_AS(extend_centralizer(t1, Word::generator(5), 1), AlphabetError);
  CHECK_THROWS_AS(extend_centralizer(t1, Word::generator(0), 0), std::invalid_argument);
  CHECK_THROWS_AS(classify_element(t1, parse_word("t*a*t^-1*a^-1", n)), TrivialElement);
}

TEST_CASE("word problem examples") {
  auto t1 = from(2, {{"a", 1}});
  auto n = t1.names();
  CHECK(wp_ice(t1, parse_word("[a,t]", n)));
  CHECK_FALSE(wp_ice(t1, parse_word("[b,t]", n)));
  CHECK(wp_ice(t1, parse_word("t*a^3*t^-1*a^-3", n)));
  CHECK_FALSE(wp_ice(t1, parse_word("t*b*a*t^-1*a^-1*b^-1", n)));
  CHECK(wp_ice(t1, parse_word("b*t*a*t^-1*a^-1*b^-1", n)));

  auto t2 = from(2, {{"a", 1}, {"t", 1}});
  auto m = t2.names();
  CHECK(wp_ice(t2, parse_word("[a*t,u]", m)));
  CHECK(wp_ice(t2, parse_word("[t,u]", m)));
  CHECK_FALSE(wp_ice(t2, parse_word("[b,u]", m)));
  CHECK_FALSE(wp_ice(t2, parse_word("[b*a*b^-1,u]", m)));
}

TEST_CASE("centralizer and classification examples") {
  auto t1 = from(2, {{"a", 1}});
  auto n = t1.names();
  auto w = [&](const char* s) { return parse_word(s, n); };
  CHECK(centralizer_ice(t1, w("a")) == std::vector<Word>{w("a"), w("t")});
  CHECK(centralizer_ice(t1, w("b")) == std::vector<Word>{w("b")});
  CHECK(centralizer_ice(t1, w("b*a*b^-1")) == std::vector<Word>{w("b*a*b^-1"), w("b*t*b^-1")});

  auto at = classify_element(t1, w("a*t"));
  CHECK(at.kind == ElementKind::Parabolic);
  CHECK(at.level == 1);
  CHECK(at.conjugator.empty());
  auto conj = classify_element(t1, w("b*a*t*b^-1"));
  CHECK(conj.kind == ElementKind::Parabolic);
  CHECK(conj.conjugator == w("b"));
  CHECK(classify_element(t1, w("b")).kind == ElementKind::Hyperbolic);

  auto sq = classify_element(t1, w("b*t*b*t"));
  CHECK(sq.kind == ElementKind::Hyperbolic);
  CHECK(sq.level == 1);
  CHECK(sq.exponent == 2);
  CHECK(centralizer_ice(t1, w("b*t*b*t")) == std::vector<Word>{w("b*t")});
}

TEST_CASE("hyperbolic classification against a brute-force conjugator search") {
  // In <a,b,t | [a,t]> the maximal abelian subgroup of level 1 is Z(t).
  auto t1 = from(2, {{"a", 1}});
  auto n = t1.names();
  Word t = parse_word("t", n);
  auto conjugators = support::ball(3, 4);
  for (const char* s : {"b", "a*b", "b*t", "a*b*a^-1*b^-1", "b^2*t^-1", "t*b*a"}) {
    Word g = parse_word(s, n);
    bool brute = false;
    for (const auto& h : conjugators) {
      if (t1.trivial(commutator(conjugate(g, h), t))) {
        brute = true;
        break;
      }
    }
    auto info = classify_element(t1, g);
    CAPTURE(s);
    CHECK(brute == (info.kind == ElementKind::Parabolic));
  }
}

TEST_CASE("word problem agrees with consequences and specializations") {
  std::mt19937_64 rng(17);
  for (const auto& t : sample_towers()) {
    auto p = presentation_of(t);
    SpecializationOracle spec(t);
    IceOracle ice(t);
    for (int i = 0; i < 60; ++i) {
      CHECK(ice.trivial(random_consequence(rng, p, 3)));
    }
    int nontrivial = 0, unresolved = 0;
    for (int i = 0; i < 300; ++i) {
      Word w = support::random_word(rng, t.rank(), 10);
      Answer s = spec.query(w);
      bool triv = ice.trivial(w);
      if (s == Answer::Nontrivial) CHECK_FALSE(triv);
      if (!triv) {
        ++nontrivial;
        if (s != Answer::Nontrivial) ++unresolved;
      }
    }
    CAPTURE(serialize(p));
    CHECK(unresolved == 0);
    CHECK(nontrivial > 0);
  }
}

TEST_CASE("centralizers: commuting, containing g, and covering a ball") {
  std::mt19937_64 rng(23);
  for (const auto& t : sample_towers()) {
    auto ball = support::ball(t.rank(), 2);
    for (int i = 0; i < 12; ++i) {
      Word g;
      while (g.empty() || t.trivial(g)) g = support::random_word(rng, t.rank(), 6);
      auto basis = centralizer_ice(t, g);
      auto info = classify_element(t, g);
      CAPTURE(serialize(presentation_of(t)));
      CAPTURE(format_word(g, t.names()));
      CHECK(t.trivial(info.conjugator * info.core * info.conjugator.inverse() * g.inverse()));
      if (info.kind == ElementKind::Hyperbolic) {
        CHECK(t.trivial(info.root.pow(info.exponent) * info.core.inverse()));
        CHECK(basis.size() == 1);
      }
      for (const auto& c : basis) CHECK(t.trivial(commutator(c, g)));
      for (std::size_t x = 0; x < basis.size(); ++x) {
        for (std::size_t y = x + 1; y < basis.size(); ++y) CHECK(t.trivial(commutator(basis[x], basis[y])));
      }
      CHECK(in_span(t, g, basis, 6));
      for (const auto& x : ball) {
        if (!x.empty() && t.trivial(commutator(x, g))) CHECK(in_span(t, x, basis, 3));
      }
    }
  }
}

TEST_CASE("powers have roots with multiplied exponents") {
  std::mt19937_64 rng(5);
  for (const auto& t : sample_towers()) {
    for (int i = 0; i < 10; ++i) {
      Word g;
      while (g.empty() || t.trivial(g)) g = support::random_word(rng, t.rank(), 5);
      auto base = classify_element(t, g);
      if (base.kind != ElementKind::Hyperbolic) continue;
      for (long k : {2L, 3L}) {
        auto info = classify_element(t, g.pow(k));
        CAPTURE(format_word(g, t.names()));
        CHECK(info.kind == ElementKind::Hyperbolic);
        CHECK(info.exponent % k == 0);
        CHECK(info.exponent == base.exponent * k);
      }
    }
  }
}

TEST_CASE("tower files round trip") {
  auto t = from(2, {{"a", 1}, {"b*t", 2}});
  auto text = tower_to_json(t);
  CHECK(text == R"({"base_rank":2,"steps":[{"g":"a","n":1},{"g":"b*t","n":2}]})");
  CHECK(tower_from_json(text) == t);
  CHECK(presentation_of(tower_from_json(text)) == presentation_of(t));
  CHECK_THROWS_AS(tower_from_json("{\"steps\": []}"), std::invalid_argument);
  CHECK_THROWS_AS(tower_from_json("{\"base_rank\": 1, \"steps\": [{\"g\": \"a*a^-1\"}]}"), TrivialElement);
}

TEST_CASE("enumerate_ice prefix") {
  auto proc = enumerate_ice();
  Budget budget(10000000);
  std::vector<IceTower> expected{
      IceTower(1),          IceTower(2),         from(1, {{"a", 1}}),   from(1, {{"a^-1", 1}}),
      IceTower(3),          from(1, {{"a", 2}}), from(1, {{"a^-1", 2}}), from(1, {{"a^2", 1}}),
      from(1, {{"a^-2", 1}}), from(2, {{"a", 1}}), from(2, {{"a^-1", 1}}), from(2, {{"b", 1}}),
      from(2, {{"b^-1", 1}}), IceTower(4)};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    auto t = run(proc, budget);
    REQUIRE(t.has_value());
    CAPTURE(i);
    CHECK(*t == expected[i]);
  }
  // Every later tower is a genuine extension: torsion-free abelianization.
  for (int i = 0; i < 40; ++i) {
    auto t = run(proc, budget);
    REQUIRE(t.has_value());
    CHECK(abelianization(presentation_of(*t)).torsion.empty());
  }
}

TEST_CASE("limit group stream") {
  LimitOptions opts;
  opts.dedup = true;
  auto proc = enumerate_limit_groups(opts);
  Budget budget(20000000);
  std::set<std::string> keys;
  for (int i = 0; i < 10; ++i) {
    auto e = run(proc, budget);
    REQUIRE(e.has_value());
    CHECK(abelianization(e->presentation).torsion.empty());
    CHECK(keys.insert(canonical_key(e->presentation)).second);
    auto tp = presentation_of(e->tower);
    IceOracle ice(e->tower);
    REQUIRE(e->subgroup.retraction.has_value());
    CHECK(verify_retraction(tp, e->S, *e->subgroup.retraction, ice) == Tri::True);
    CHECK(check_hom(e->presentation, generators_in_ambient(e->subgroup, e->S), ice) == Tri::True);
  }
  for (const char* p : {"< a | >", "< a, b | >", "< a, b | [a,b] >", "< a, b, c | >",
                        "< a, b, c | [a,b], [a,c], [b,c] >"}) {
    CAPTURE(p);
    CHECK(keys.count(canonical_key(parse_presentation(p))) == 1);
  }
}

TEST_CASE("the raw limit stream keeps duplicates") {
  auto proc = enumerate_limit_groups();
  Budget budget(500000000);
  auto f2 = IceTower(2);
  const std::vector<Word> S{parse_word("b", f2.names()), parse_word("a^2", f2.names())};
  std::size_t free_rank2 = 0;
  bool found = false;
  for (int i = 0; i < 20000 && !found; ++i) {
    auto e = run(proc, budget);
    REQUIRE(e.has_value());
    if (canonical_key(e->presentation) == canonical_key(Presentation::free(2))) ++free_rank2;
    found = e->tower == f2 && e->S == S;
    if (found) CHECK(canonical_key(e->presentation) == canonical_key(Presentation::free(2)));
  }
  CHECK(found);
  CHECK(free_rank2 >= 2);
}

TEST_CASE("extension at a hyperbolic element") {
  auto t = from(2, {{"a", 1}, {"b", 2}});
  CHECK(presentation_of(t) == parse_presentation("< a, b, t, u, v | [a,t], [b,u], [b,v], [u,v] >"));
}

TEST_CASE("parabolic exactly when the centralizer is noncyclic") {
  std::mt19937_64 rng(31);
  for (const auto& t : sample_towers()) {
    for (int i = 0; i < 40; ++i) {
      Word g;
      while (g.empty() || t.trivial(g)) g = support::random_word(rng, t.rank(), 8);
      auto basis = centralizer_ice(t, g);
      CHECK((classify_element(t, g).kind == ElementKind::Parabolic) == (basis.size() >= 2));
      for (const auto& c : basis) CHECK_FALSE(t.trivial(c));
    }
  }
}

TEST_CASE("subgroups of a tower") {
  auto t = from(2, {{"a", 1}});
  auto n = t.names();
  auto abelian = subgroup_presentation_limit(t, {parse_word("a", n), parse_word("t", n)});
  REQUIRE(abelian.status == SearchStatus::Found);
  CHECK(canonical_key(abelian.presentation) == canonical_key(parse_presentation("< u, v | [u,v] >")));
  auto free = subgroup_presentation_limit(t, {parse_word("b", n), parse_word("a", n)});
  REQUIRE(free.status == SearchStatus::Found);
  CHECK(free.presentation.rank() == 2);
  CHECK(free.presentation.relators().empty());
  auto base = subgroup_presentation_limit(IceTower(3), {Word::generator(0), Word::generator(1), Word::generator(2)});
  REQUIRE(base.status == SearchStatus::Found);
  CHECK(base.presentation.relators().empty());
}
