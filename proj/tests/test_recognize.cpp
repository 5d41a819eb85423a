#include <cstdlib>
#include <random>

#include "doctest.h"
#include "limitforge/recognize.hpp"
#include "support.hpp"

using namespace limitforge;

namespace {

struct Case {
  const char* name;
  Presentation p;
  OraclePtr wp;
  VerdictKind truth;
};

std::vector<Case> corpus() {
  auto P = [](const char* s) { return parse_presentation(s); };
  auto z2 = P("< a, b | [a,b] >");
  auto z3 = P("< a, b, c | [a,b], [a,c], [b,c] >");
  auto c2 = P("< a | a^2 >");
  auto c3 = P("< a | a^3 >");
  auto f2z = std::make_shared<ProductOracle>(
      3, std::vector<ProductOracle::Block>{{{0, 1}, std::make_shared<FreeOracle>(2)},
                                           {{2}, std::make_shared<FreeOracle>(1)}});
  return {
      {"F1", P("< a | >"), std::make_shared<FreeOracle>(1), VerdictKind::Limit},
      {"F2", P("< a, b | >"), std::make_shared<FreeOracle>(2), VerdictKind::Limit},
      {"Z2", z2, std::make_shared<AbelianOracle>(z2), VerdictKind::Limit},
      {"Z3", z3, std::make_shared<AbelianOracle>(z3), VerdictKind::Limit},
      {"<a,b,t|[a,t]>", P("< a, b, t | [a,t] >"),
       std::make_shared<IceOracle>(extend_centralizer(IceTower(2), Word::generator(0), 1)), VerdictKind::Limit},
      {"Z/2", c2, std::make_shared<FiniteOracle>(c2), VerdictKind::NotLimit},
      {"Z/3", c3, std::make_shared<FiniteOracle>(c3), VerdictKind::NotLimit},
      {"F2xZ", P("< a, b, z | [a,z], [b,z] >"), f2z, VerdictKind::NotLimit},
      {"Klein", P("< a, b | b*a*b^-1*a >"), std::make_shared<KleinOracle>(), VerdictKind::NotLimit},
  };
}

}  // namespace

TEST_CASE("refute_sentence examples") {
  auto ce = refute_sentence(Sentence{2, {commutator(Word::generator(0), Word::generator(1))},
                                     {Word::generator(0), Word::generator(1)}},
                            1);
  REQUIRE(ce.has_value());
  CHECK(*ce == std::vector<Word>{Word::generator(0), Word::generator(0)});

  for (std::size_t bound = 0; bound <= 4; ++bound) {
    CHECK_FALSE(refute_sentence(Sentence{1, {Word::generator(0, 2)}, {Word::generator(0)}}, bound));
  }
  Word x = Word::generator(0), y = Word::generator(1);
  CHECK_FALSE(refute_sentence(Sentence{2, {conjugate(x, y) * x}, {x}}, 3));

  // Constants: x commuting with the constant a must be a power of a.
  Word a = Word::generator(1), b = Word::generator(2);
  auto with_constant = refute_sentence(Sentence{1, {commutator(x, a)}, {x}}, 2);
  REQUIRE(with_constant.has_value());
  CHECK(*with_constant == std::vector<Word>{Word::generator(0)});
  CHECK_FALSE(refute_sentence(Sentence{1, {commutator(x, a), commutator(x, b)}, {x}}, 3));
}

TEST_CASE("refute_sentence agrees with a direct search") {
  // Counterexamples to "[x,y] = 1 implies x = 1 or y = 1 or x y^-1 = 1 or x y = 1".
  Word x = Word::generator(0), y = Word::generator(1);
  Sentence s{2, {commutator(x, y)}, {x, y, x * y.inverse(), x * y}};
  auto ce = refute_sentence(s, 2);
  REQUIRE(ce.has_value());
  auto ball = support::ball(2, 2);
  bool brute = false;
  for (const auto& u : ball) {
    for (const auto& v : ball) {
      if (!(u * v == v * u) || u.empty() || v.empty() || u == v || u == v.inverse()) continue;
      brute = true;
    }
  }
  CHECK(brute);
  CHECK((*ce)[0] * (*ce)[1] == (*ce)[1] * (*ce)[0]);
}

TEST_CASE("certify_witness examples") {
  auto cases = corpus();
  auto find = [&](const char* name) -> const Case& {
    for (const auto& c : cases) {
      if (std::string(c.name) == name) return c;
    }
    throw std::logic_error(name);
  };
  const Case& f2z = find("F2xZ");
  auto ct = certify_witness(f2z.p, f2z.wp, 1000000);
  REQUIRE(ct.has_value());
  CHECK(ct->kind == WitnessKind::CommutationTransitivity);
  CHECK(ct->elements == std::vector<Word>{f2z.p.word("z"), f2z.p.word("[a,b]")});

  const Case& c2 = find("Z/2");
  auto tor = certify_witness(c2.p, c2.wp, 1000000);
  REQUIRE(tor.has_value());
  CHECK(tor->kind == WitnessKind::Torsion);
  CHECK(tor->elements == std::vector<Word>{c2.p.word("a")});

  const Case& kl = find("Klein");
  auto inv = certify_witness(kl.p, kl.wp, 1000000);
  REQUIRE(inv.has_value());
  CHECK(inv->kind == WitnessKind::Inversion);
  CHECK(inv->elements == std::vector<Word>{kl.p.word("a")});
}

TEST_CASE("witnesses are sound and checked") {
  for (const auto& c : corpus()) {
    if (c.truth != VerdictKind::NotLimit) continue;
    CAPTURE(c.name);
    auto w = certify_witness(c.p, c.wp, 1000000);
    REQUIRE(w.has_value());
    CHECK(check_witness(c.p, *w, *c.wp) == Tri::True);
    CHECK_FALSE(refute_sentence(sentence_of(c.p, *w), 3).has_value());

    Witness tampered = *w;
    tampered.elements.push_back(Word{});
    CHECK(check_witness(c.p, tampered, *c.wp) == Tri::False);

    Witness external = *w;
    external.schema = w->kind;
    external.kind = WitnessKind::External;
    CHECK(check_witness(c.p, external, *c.wp) == Tri::True);
    external.schema = WitnessKind::External;
    CHECK(check_witness(c.p, external, *c.wp) == Tri::False);
  }
  // A false premise is rejected.
  auto f2 = parse_presentation("< a, b | >");
  FreeOracle free2(2);
  Witness fake{WitnessKind::Torsion, WitnessKind::Torsion, {f2.word("a")}, {f2.word("a")}, 2};
  CHECK(check_witness(f2, fake, free2) == Tri::False);
}

TEST_CASE("recognize_limit on the ground-truth corpus") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    auto v = recognize_limit(c.p, c.wp);
    CHECK(v.kind == c.truth);
    CHECK(verify_verdict(c.p, v, *c.wp) == Tri::True);
    CHECK(v.steps_limit + v.steps_witness <= v.budget);
    if (v.kind == VerdictKind::NotLimit) {
      REQUIRE(v.witness.has_value());
      CHECK_FALSE(refute_sentence(sentence_of(c.p, *v.witness), 3).has_value());
    }
  }
}

TEST_CASE("the opposing branch does not fire") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    RecognizeOptions opts;
    opts.budget = 200000;
    opts.enumerate = c.truth == VerdictKind::NotLimit;
    opts.certify = c.truth == VerdictKind::Limit;
    CHECK(recognize_limit(c.p, c.wp, opts).kind == VerdictKind::Unknown);
  }
}

TEST_CASE("verdicts are monotone in the budget") {
  for (const auto& c : corpus()) {
    CAPTURE(c.name);
    VerdictKind seen = VerdictKind::Unknown;
    for (std::uint64_t budget : {100ull, 1000ull, 10000ull, 100000ull, 1000000ull}) {
      RecognizeOptions opts;
      opts.budget = budget;
      auto v = recognize_limit(c.p, c.wp, opts);
      if (seen != VerdictKind::Unknown) CHECK(v.kind == seen);
      if (v.kind != VerdictKind::Unknown) seen = v.kind;
    }
    CHECK(seen == c.truth);
  }
}

TEST_CASE("recognition rejects semi-decision oracles") {
  auto z2 = parse_presentation("< a, b | [a,b] >");
  CHECK_THROWS_AS(recognize_limit(z2, std::make_shared<DovetailOracle>(z2)), std::invalid_argument);
  CHECK_THROWS_AS(recognize_free(z2, std::make_shared<DovetailOracle>(z2)), std::invalid_argument);
  CHECK_THROWS_AS(recognize_limit(z2, std::make_shared<FreeOracle>(3)), std::invalid_argument);
}

TEST_CASE("budget from the environment") {
  ::setenv("LIMITFORGE_BUDGET", "1234", 1);
  CHECK(default_budget() == 1234);
  ::setenv("LIMITFORGE_BUDGET", "junk", 1);
  CHECK(default_budget() == 10000000);
  ::unsetenv("LIMITFORGE_BUDGET");
  CHECK(default_budget() == 10000000);
}

TEST_CASE("pinched amalgam oracle") {
  auto n = default_names(4);
  // u = a, v = c: the free group on a, b, d once c is replaced by a.
  PinchedOracle collapse({0, 0, 1, 1}, Word::generator(0), Word::generator(2));
  std::vector<Word> c_to_a{Word::generator(0), Word::generator(1), Word::generator(0), Word::generator(3)};
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Word w = support::random_word(rng, 4, 12);
    CHECK(collapse.trivial(w) == substitute(w, c_to_a).empty());
  }

  // Surface of genus 2: definite dovetail answers and consequences agree.
  auto surface = pinched_presentation(2, 2, parse_word("[a,b]", n), parse_word("[a,b]", n));
  CHECK(surface == parse_presentation("< a, b, c, d | [a,b]*[c,d]^-1 >"));
  auto detected = detect_pinched(surface);
  REQUIRE(detected != nullptr);
  DovetailOracle dove(surface, 20000, 4);
  for (int i = 0; i < 150; ++i) {
    Word w = support::random_word(rng, 4, 8);
    Answer d = dove.query(w);
    if (d != Answer::Unknown) CHECK(detected->query(w) == d);
  }
  for (int i = 0; i < 100; ++i) {
    Word w;
    for (int f = 0; f < 3; ++f) {
      w *= conjugate(surface.relators()[0].pow(f % 2 ? 1 : -1), support::random_word(rng, 4, 3));
    }
    CHECK(detected->trivial(w));
  }

  auto trefoil = pinched_presentation(2, 2, parse_word("a^2", n), parse_word("a^3", n));
  auto tw = detect_pinched(trefoil);
  REQUIRE(tw != nullptr);
  CHECK(tw->trivial(trefoil.word("[a^2, c]")));
  CHECK(tw->trivial(trefoil.word("[a^4, c^3]")));
  CHECK_FALSE(tw->trivial(trefoil.word("[a, c]")));
  CHECK_FALSE(tw->trivial(trefoil.word("a^3*c^-2")));
  CHECK(detect_pinched(parse_presentation("< a, b | [a,b] >")) == nullptr);
  CHECK_THROWS_AS(pinched_presentation(2, 2, Word{}, parse_word("a", n)), std::invalid_argument);
}

TEST_CASE("recognize_cyclically_pinched") {
  auto n = default_names(2);
  auto merged = recognize_cyclically_pinched(2, 2, parse_word("a", n), parse_word("a", n));
  CHECK(merged.kind == VerdictKind::Limit);
  CHECK(merged.chain->key == canonical_key(Presentation::free(3)));

  // a^2 = c^3 is central in <a, c>, which is not abelian.
  auto trefoil = recognize_cyclically_pinched(2, 2, parse_word("a^2", n), parse_word("a^3", n));
  CHECK(trefoil.kind == VerdictKind::NotLimit);
  REQUIRE(trefoil.witness.has_value());
  CHECK(trefoil.witness->kind == WitnessKind::CommutationTransitivity);

  RecognizeOptions small;
  small.budget = 100000;
  auto surface = recognize_cyclically_pinched(2, 2, parse_word("[a,b]", n), parse_word("[a,b]", n), small);
  CHECK(surface.kind != VerdictKind::NotLimit);
}

TEST_CASE("recognize_free") {
  auto p = parse_presentation("< a, b, c | c^-1*a*b >");
  auto free = recognize_free(p, std::make_shared<FreeOracle>(3) /* unused by branch (a) */);
  CHECK(free.kind == FreeKind::Free);
  REQUIRE(free.free_form.has_value());
  CHECK(canonical_key(replay(p, free.free_form->path)) == canonical_key(Presentation::free(2)));

  auto z2 = parse_presentation("< a, b | [a,b] >");
  auto ab = recognize_free(z2, std::make_shared<AbelianOracle>(z2));
  CHECK(ab.kind == FreeKind::NotFree);
  CHECK(ab.reason == "abelian, noncyclic");

  auto c2 = parse_presentation("< a | a^2 >");
  CHECK(recognize_free(c2, std::make_shared<FiniteOracle>(c2)).reason == "torsion in abelianization");

  auto klein = parse_presentation("< a, b | b*a*b^-1*a >");
  auto kv = recognize_free(klein, std::make_shared<KleinOracle>());
  CHECK(kv.kind == FreeKind::NotFree);

  auto surface = parse_presentation("< a, b, c, d | [a,b]*[c,d]^-1 >");
  RecognizeOptions small;
  small.budget = 100000;
  CHECK(recognize_free(surface, detect_pinched(surface), small).kind == FreeKind::Unknown);
}
