#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "limitforge/oracle.hpp"
#include "limitforge/oracle_factory.hpp"
#include "limitforge/presentation.hpp"
#include "limitforge/subgroup_graph.hpp"
#include "limitforge/tietze.hpp"
#include "support.hpp"

using namespace limitforge;

namespace {

// First `count` values of a process, ignoring pure work steps.
template <class T>
std::vector<T> take(Process<T>& proc, std::size_t count, std::uint64_t max_steps = 5000000) {
  std::vector<T> out;
  for (std::uint64_t i = 0; i < max_steps && out.size() < count; ++i) {
    auto step = proc.next();
    if (!step) break;
    if (step->value) out.push_back(std::move(*step->value));
  }
  return out;
}

Presentation random_presentation(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> rank(1, 4);
  std::uniform_int_distribution<int> count(0, 3);
  std::size_t n = rank(rng);
  std::vector<Word> rels;
  for (int i = count(rng); i > 0; --i) rels.push_back(support::random_word(rng, n, 8));
  return Presentation(default_names(n), rels);
}

// Random renaming, generator permutation, relator shuffling, rotation and inversion.
Presentation scramble(const Presentation& p, std::mt19937_64& rng) {
  std::vector<std::size_t> perm(p.rank());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<Word> images(p.rank());
  for (std::size_t i = 0; i < p.rank(); ++i) images[i] = Word::generator(perm[i]);
  std::vector<Word> rels;
  for (const auto& r : p.relators()) {
    Word w = substitute(r, images);
    std::uniform_int_distribution<std::size_t> cut(0, w.size());
    std::size_t k = cut(rng);
    w = w.subword(k, w.size() - k) * w.subword(0, k);
    if (std::bernoulli_distribution(0.5)(rng)) w = w.inverse();
    rels.push_back(w);
  }
  std::shuffle(rels.begin(), rels.end(), rng);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < p.rank(); ++i) names.push_back("g" + std::to_string(p.rank() - i));
  return Presentation(names, rels);
}

}  // namespace

TEST_CASE("parse and serialize") {
  auto p = parse_presentation("< a, b | [a,b] >");
  CHECK(p.generators() == std::vector<std::string>{"a", "b"});
  REQUIRE(p.relators().size() == 1);
  CHECK(p.relators()[0] == p.word("a^-1 b^-1 a b"));

  auto q = parse_presentation("< a | a^2 >");
  CHECK(q.rank() == 1);
  CHECK(q.relators() == std::vector<Word>{q.word("a a")});

  CHECK_THROWS_AS(parse_presentation("< a | b >"), ParseError);
  CHECK_THROWS_AS(parse_presentation("< a, a | >"), ParseError);
  CHECK_THROWS_AS(parse_presentation("< a | a"), ParseError);

  auto free2 = parse_presentation("< a, b | >");
  CHECK(free2.relators().empty());
  CHECK(serialize(free2) == "< a, b | >");
  CHECK(parse_presentation(serialize(Presentation::free(0))) == Presentation::free(0));
}

TEST_CASE("parse is inverse to serialize on random presentations") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    auto p = random_presentation(rng);
    CHECK(parse_presentation(serialize(p)) == p);
  }
}

TEST_CASE("tietze moves") {
  auto free2 = Presentation::free(2);
  auto with_c = tietze_step(free2, tietze::AddGenerator{"c", free2.word("a b")});
  CHECK(serialize(with_c) == "< a, b, c | c^-1*a*b >");
  auto back = tietze_step(with_c, tietze::RemoveGenerator{2, 0});
  CHECK(back == free2);

  auto z2 = parse_presentation("< a | a^2 >");
  CHECK_THROWS_AS(tietze_step(z2, tietze::RemoveRelator{0, {}}), IneligibleMove);

  // a^4 is a consequence of a^2: two copies.
  auto z2b = tietze_step(z2, tietze::AddRelator{z2.word("a^4"), {{Word{}, 0, 1}, {Word{}, 0, 1}}});
  CHECK(z2b.relators().size() == 2);
  CHECK_THROWS_AS(tietze_step(z2, tietze::AddRelator{z2.word("a^3"), {{Word{}, 0, 1}}}),
                  IneligibleMove);
  auto z2c = tietze_step(z2b, tietze::RemoveRelator{1, {{Word{}, 0, 2}}});
  CHECK(z2c == z2);
  // The generator occurs twice in a^2, so it cannot be eliminated with it.
  CHECK_THROWS_AS(tietze_step(z2, tietze::RemoveGenerator{0, 0}), IneligibleMove);
}

TEST_CASE("enumerate_presentations examples") {
  auto z = parse_presentation("< a | >");
  auto proc = enumerate_presentations(z);
  auto first = take(proc, 1);
  REQUIRE(first.size() == 1);
  CHECK(first[0].presentation == z);
  CHECK(first[0].path.empty());

  auto target = canonical_key(parse_presentation("< a, b | b >"));
  auto more = take(proc, 50);
  bool found = std::any_of(more.begin(), more.end(), [&](const TietzeEmission& e) {
    return canonical_key(e.presentation) == target;
  });
  CHECK(found);

  auto z2 = parse_presentation("< a, b | [a,b] >");
  auto target2 = canonical_key(parse_presentation("< x, y, z | [x,y], z^-1*x*y >"));
  auto proc2 = enumerate_presentations(z2);
  auto emitted = take(proc2, 400);
  auto hit = std::find_if(emitted.begin(), emitted.end(), [&](const TietzeEmission& e) {
    return canonical_key(e.presentation) == target2;
  });
  REQUIRE(hit != emitted.end());
  CHECK(replay(z2, hit->path) == hit->presentation);
}

TEST_CASE("tietze enumeration preserves abelianization and replays") {
  for (const char* text : {"< a, b | [a,b] >", "< a | a^3 >", "< a, b | a^2*b^-3 >"}) {
    auto p = parse_presentation(text);
    auto inv = abelianization(p);
    auto proc = enumerate_presentations(p, {4, 6});
    auto emitted = take(proc, 150);
    CHECK(emitted.size() > 20);
    std::set<std::string> keys;
    std::size_t last_weight = 0;
    for (const auto& e : emitted) {
      CHECK(abelianization(e.presentation) == inv);
      CHECK(replay(p, e.path) == e.presentation);
      CHECK(keys.insert(canonical_key(e.presentation)).second);
      CHECK(e.weight >= last_weight);
      last_weight = e.weight;
    }
  }
}

TEST_CASE("normalize examples") {
  CHECK(canonical_key(parse_presentation("< b, a | [b,a] >")) ==
        canonical_key(parse_presentation("< x, y | [x,y] >")));
  CHECK(canonical_key(parse_presentation("< a | a^2 >")) ==
        canonical_key(parse_presentation("< a | a^-2 >")));
  CHECK(canonical_key(parse_presentation("< a | a^2 >")) !=
        canonical_key(parse_presentation("< a | a^3 >")));
}

TEST_CASE("normalize is idempotent and invariant under scrambling") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    auto p = random_presentation(rng);
    auto n = normalize(p);
    REQUIRE(normalize(n) == n);
    REQUIRE(normalize(scramble(p, rng)) == n);
  }
}

TEST_CASE("consequence_stream examples") {
  auto z2 = parse_presentation("< a | a^2 >");
  auto proc = consequence_stream(z2);
  auto words = take(proc, 200);
  CHECK(std::find(words.begin(), words.end(), z2.word("a^2")) != words.end());
  CHECK(std::find(words.begin(), words.end(), z2.word("a^4")) != words.end());

  auto free2 = consequence_stream(Presentation::free(2));
  auto only = take(free2, 10);
  CHECK(only == std::vector<Word>{Word{}});

  auto ab = parse_presentation("< a, b | [a,b] >");
  auto proc2 = consequence_stream(ab);
  auto target = ab.word("[a^2,b]");
  bool found = false;
  for (std::uint64_t i = 0; i < 2000000 && !found; ++i) {
    auto step = proc2.next();
    if (!step) break;
    found = step->value && *step->value == target;
  }
  CHECK(found);
}

TEST_CASE("consequence_stream emits only trivial words") {
  auto z5 = parse_presentation("< a | a^5 >");
  auto s3 = parse_presentation("< a, b | a^2, b^3, (a b)^2 >");
  auto z2 = parse_presentation("< a, b | [a,b] >");
  std::vector<std::pair<Presentation, OraclePtr>> cases{
      {z5, std::make_shared<FiniteOracle>(z5)},
      {s3, std::make_shared<FiniteOracle>(s3)},
      {z2, std::make_shared<AbelianOracle>(z2)},
  };
  for (auto& [p, oracle] : cases) {
    auto proc = consequence_stream(p);
    auto words = take(proc, 300);
    CHECK(words.size() == 300);
    std::set<Word> seen;
    for (const auto& w : words) {
      CHECK(oracle->query(w) == Answer::Trivial);
      CHECK(seen.insert(w).second);
    }
  }
}

TEST_CASE("check_hom") {
  auto z2 = parse_presentation("< a | a^2 >");
  FreeOracle f1(1);
  CHECK(check_hom(z2, {Word::generator(0)}, f1) == Tri::False);

  auto s3 = parse_presentation("< a, b | a^2, b^3, (a b)^2 >");
  FiniteOracle s3o(s3);
  CHECK(check_hom(s3, {s3.word("a"), s3.word("b")}, s3o) == Tri::True);

  auto ab = parse_presentation("< a, b | [a,b] >");
  CHECK(check_hom(ab, {Word::generator(0), Word::generator(0, 2)}, f1) == Tri::True);
}

TEST_CASE("is_injective examples") {
  auto z = parse_presentation("< h | >");
  FreeOracle zo(1);
  ImageData image{Presentation::free(1), {Word::generator(0)}, {Word::generator(0)}};
  CHECK(is_injective(z, {Word::generator(0, 2)}, zo, image) == Injectivity::Injective);

  ImageData trivial{Presentation::free(0), {}, {Word{}}};
  CHECK(is_injective(z, {Word{}}, zo, trivial) == Injectivity::NotInjective);

  auto z2 = parse_presentation("< x, y | [x,y] >");
  AbelianOracle z2o(z2);
  ImageData collapsed{Presentation::free(1), {Word::generator(0)},
                      {Word::generator(0), Word::generator(0)}};
  CHECK(is_injective(z2, {Word::generator(0), Word::generator(0)}, z2o, collapsed) ==
        Injectivity::NotInjective);

  // A semi-decision source oracle can confirm but never refute.
  DovetailOracle semi(z2, 20000);
  ImageData iso{z2, {Word::generator(0), Word::generator(1)}, {Word::generator(0), Word::generator(1)}};
  CHECK(is_injective(z2, {Word::generator(0), Word::generator(1)}, semi, iso) ==
        Injectivity::ConfirmedInjective);
  CHECK(is_injective(z2, {Word::generator(0), Word::generator(0)}, semi, collapsed, 20000) ==
        Injectivity::Unknown);
}

TEST_CASE("is_injective agrees with the rank of the folded image") {
  std::mt19937_64 rng(17);
  int decided = 0;
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Word> images{support::random_word(rng, 2, 3), support::random_word(rng, 2, 3)};
    auto g = fold(2, images);
    // Express each basis element as a product of images by breadth-first search.
    std::map<Word, Word> reach{{Word{}, Word{}}};
    std::vector<Word> frontier{Word{}};
    for (int depth = 0; depth < 4; ++depth) {
      std::vector<Word> next;
      for (const auto& u : frontier) {
        for (std::size_t i = 0; i < 2; ++i) {
          for (int s : {1, -1}) {
            Word v = u * (s > 0 ? images[i] : images[i].inverse());
            if (reach.emplace(v, reach[u] * Word::generator(i, s)).second) next.push_back(v);
          }
        }
      }
      frontier = std::move(next);
    }
    std::vector<Word> gens_in_source;
    for (const auto& b : g.basis()) {
      auto it = reach.find(b);
      if (it == reach.end()) break;
      gens_in_source.push_back(it->second);
    }
    if (gens_in_source.size() != g.basis().size()) continue;
    ImageData data{Presentation::free(g.rank()), gens_in_source,
                   {*g.member(images[0]), *g.member(images[1])}};
    FreeOracle source(2);
    auto verdict = is_injective(Presentation::free(2), images, source, data);
    CHECK(verdict == (g.rank() == 2 ? Injectivity::Injective : Injectivity::NotInjective));
    ++decided;
  }
  CHECK(decided > 100);
}

TEST_CASE("abelianization") {
  CHECK(abelianization(parse_presentation("< a, b | [a,b] >")) == AbelianInvariants{2, {}});
  CHECK(abelianization(parse_presentation("< a | a^2 >")) == AbelianInvariants{0, {2}});
  CHECK(abelianization(parse_presentation("< a, b | a^2*b^-3 >")) == AbelianInvariants{1, {}});
  CHECK(abelianization(parse_presentation("< a, b | a^4, b^6 >")) == AbelianInvariants{0, {2, 12}});
  CHECK(smith_diagonal({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}) == std::vector<long long>{2, 6, 12});
}

TEST_CASE("oracle engines") {
  FreeOracle free2(2);
  CHECK(free2.query(parse_word("[a,b]", {"a", "b"})) == Answer::Nontrivial);

  auto z5 = parse_presentation("< a | a^5 >");
  FiniteOracle z5o(z5);
  CHECK(z5o.order() == 5);
  CHECK(z5o.query(z5.word("a^5")) == Answer::Trivial);
  CHECK(z5o.query(z5.word("a^3")) == Answer::Nontrivial);

  auto z2 = parse_presentation("< a, b | [a,b] >");
  DovetailOracle dove(z2);
  for (long k = 1; k <= 3; ++k) CHECK(dove.query(z2.word("[a,b]").pow(k)) == Answer::Trivial);
  CHECK(dove.query(z2.word("a")) == Answer::Nontrivial);

  auto klein = parse_presentation("< a, b | b*a*b^-1*a >");
  KleinOracle ko(klein);
  CHECK(ko.query(klein.word("b a b^-1 a")) == Answer::Trivial);
  CHECK(ko.query(klein.word("b^2 a b^-2 a^-1")) == Answer::Trivial);
  CHECK(ko.query(klein.word("[a,b]")) == Answer::Nontrivial);
  CHECK_THROWS_AS(KleinOracle{z2}, OracleError);
  CHECK_THROWS_AS(AbelianOracle(parse_presentation("< a, b | >")), OracleError);

  ProductOracle prod(3, {{{0, 1}, std::make_shared<FreeOracle>(2)},
                         {{2}, std::make_shared<FiniteOracle>(parse_presentation("< a | a^2 >"))}});
  auto names = default_names(3);
  CHECK(prod.query(parse_word("c a c", names)) == Answer::Nontrivial);
  CHECK(prod.query(parse_word("a c a^-1 c", names)) == Answer::Trivial);
  CHECK(prod.query(parse_word("[a,c]", names)) == Answer::Trivial);
  CHECK(prod.query(parse_word("[a,b]", names)) == Answer::Nontrivial);
}

TEST_CASE("the dovetail oracle agrees with finite oracles") {
  auto s3 = parse_presentation("< a, b | a^2, b^3, (a b)^2 >");
  FiniteOracle exact(s3);
  DovetailOracle dove(s3);
  std::mt19937_64 rng(29);
  for (int i = 0; i < 60; ++i) {
    Word w = support::random_word(rng, 2, 6);
    Answer a = dove.query(w);
    if (a != Answer::Unknown) CHECK(a == exact.query(w));
  }
}

TEST_CASE("subprocess oracle protocol") {
  auto names = default_names(2);
  SubprocessOracle nontrivial(names, "while read line; do echo 0; done");
  CHECK(nontrivial.query(parse_word("a b", names)) == Answer::Nontrivial);
  CHECK(nontrivial.query(parse_word("b", names)) == Answer::Nontrivial);

  SubprocessOracle bad(names, "while read line; do echo maybe; done");
  CHECK_THROWS_AS(bad.query(parse_word("a", names)), ProtocolError);
}

TEST_CASE("oracle_from strategies") {
  auto f2 = parse_presentation("< a, b | >");
  CHECK(oracle_from(f2, "builtin:free")->query(f2.word("[a,b]")) == Answer::Nontrivial);
  auto z5 = parse_presentation("< a | a^5 >");
  CHECK(oracle_from(z5, "builtin:finite")->query(z5.word("a^5")) == Answer::Trivial);
  auto z2 = parse_presentation("< a, b | [a,b] >");
  auto dove = oracle_from(z2, "dovetail");
  CHECK(dove->completeness() == Completeness::SemiDecision);
  for (long k = 1; k <= 3; ++k) CHECK(dove->query(z2.word("[a,b]").pow(k)) == Answer::Trivial);

  CHECK(oracle_from(z2, "builtin:auto")->name() == "abelian");
  CHECK(oracle_from(f2, "builtin:auto")->name() == "free");
  CHECK(oracle_from(parse_presentation("< a, b | b*a*b^-1*a >"), "builtin:auto")->name() == "klein");
  CHECK(oracle_from(parse_presentation("< a, b, c, d | [a,b]*[c,d]^-1 >"), "builtin:auto")->name() == "pinched");
  CHECK(oracle_from(parse_presentation("< a, b | a^2, b^3, (a b)^2 >"), "builtin:auto")->name() == "finite");

  auto f2z = parse_presentation("< a, b, z | [a,z], [b,z] >");
  auto prod = oracle_from(f2z, "builtin:product");
  CHECK(prod->name() == "product");
  CHECK(prod->query(f2z.word("[a,b]")) == Answer::Nontrivial);
  CHECK(prod->query(f2z.word("[a b^2, z^3]")) == Answer::Trivial);
  CHECK(oracle_from(f2z, "builtin:auto")->name() == "product");

  CHECK_THROWS_AS(oracle_from(z2, "builtin:free"), OracleError);
  CHECK_THROWS_AS(oracle_from(f2, "builtin:product"), OracleError);
  CHECK_THROWS_AS(oracle_from(z2, "builtin:pinched"), OracleError);
  CHECK_THROWS_AS(oracle_from(z2, "builtin:nope"), OracleError);
  CHECK_THROWS_AS(oracle_from(z2, "dovetail=x"), OracleError);
  CHECK_THROWS_AS(oracle_from(z2, "whatever"), OracleError);
  CHECK_THROWS_AS(oracle_from(z2, "builtin:ice=/nonexistent.json"), OracleError);
  CHECK(oracle_from(z2, "cmd:while read line; do echo 1; done")->query(z2.word("a")) == Answer::Trivial);
}

TEST_CASE("product_blocks") {
  using Blocks = std::vector<std::vector<std::size_t>>;
  CHECK(product_blocks(parse_presentation("< a, b | [a,b] >")) == Blocks{{0}, {1}});
  CHECK(product_blocks(parse_presentation("< a, b, z | [a,z], [b,z] >")) == Blocks{{0, 1}, {2}});
  CHECK(product_blocks(parse_presentation("< a, b, c | [a,b], [a,c], [b,c], a^2 >")) == Blocks{{0}, {1}, {2}});
  // A relator joining a and c keeps them together even though they commute.
  CHECK(product_blocks(parse_presentation("< a, b, c | [a,b], [b,c], [a,c], a c^-2 >")) == Blocks{{0, 2}, {1}});
  CHECK(product_blocks(parse_presentation("< a, b | >")) == Blocks{{0, 1}});
}
