// Recognition of limit groups and free groups by dovetailed semi-decisions.

#ifndef LIMITFORGE_RECOGNIZE_HPP_
#define LIMITFORGE_RECOGNIZE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "limitforge/ice.hpp"
#include "limitforge/oracle.hpp"
#include "limitforge/presentation.hpp"
#include "limitforge/tietze.hpp"

namespace limitforge {

//! Universal sentence over a free group: the equations imply that some
//! inequation word is trivial. Generators 0..variables-1 are variables;
//! generator variables + i is the constant letter i of the free group.
struct Sentence {
  std::size_t variables = 0;
  std::vector<Word> equations;
  std::vector<Word> inequations;
};

// Searches assignments of reduced words of length <= bound (over a free
// group of the given rank) satisfying every equation and no inequation.
std::optional<std::vector<Word>> refute_sentence(const Sentence& s, std::size_t bound,
                                                 std::size_t free_rank = 2);

enum class WitnessKind { CommutationTransitivity, Torsion, Inversion, External };
const char* to_string(WitnessKind k);

//! Nontrivial elements g_j of G with a certificate that every map from G to
//! a free group kills one of them. Certificate data by schema:
//!   commutation transitivity: {a, b, c}, [a,b] = [b,c] = 1, elements {b, [a,c]}
//!   torsion:                  {g}, g^n = 1, elements {g}
//!   inversion:                {g, h}, h g h^-1 g = 1, elements {g}
//! An External witness names its schema in `schema`.
struct Witness {
  WitnessKind kind = WitnessKind::Torsion;
  WitnessKind schema = WitnessKind::Torsion;
  std::vector<Word> elements;
  std::vector<Word> data;
  long n = 0;
};

// Checks the schema, the premises and the nontriviality of the elements.
Tri check_witness(const Presentation& p, const Witness& w, WordOracle& wp);
// Relators of p as equations, the witness elements as inequations.
Sentence sentence_of(const Presentation& p, const Witness& w);

struct WitnessSearchStats {
  std::uint64_t candidates = 0;
  std::uint64_t rejected = 0;  // passed the oracle but refuted at bound 2
};

//! Candidates by cost: torsion (g, n) with cost |g| + n - 1, then inversion
//! (g, h) with cost |g| + |h|, then commutation transitivity (a, b, c) with
//! cost |a| + |b| + |c|; within a kind, shortlex on the tuple.
Process<Witness> witness_search(Presentation p, OraclePtr wp,
                                std::shared_ptr<WitnessSearchStats> stats = nullptr);
std::optional<Witness> certify_witness(const Presentation& p, OraclePtr wp, std::uint64_t budget);

// ---------------------------------------------------------------------------

// 10^7, or LIMITFORGE_BUDGET when set to a positive integer.
std::uint64_t default_budget();

enum class VerdictKind { Limit, NotLimit, Unknown };
const char* to_string(VerdictKind k);

//! The chain behind a Limit verdict: the emission (tower, S, retraction and
//! retract presentation) and Tietze paths from the input and from the
//! emitted presentation to presentations with one canonical key.
struct LimitChain {
  LimitEmission emission;
  std::string key;
  std::vector<TietzeMove> input_path;
  std::vector<TietzeMove> emission_path;
};

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::optional<LimitChain> chain;
  std::optional<Witness> witness;
  std::uint64_t budget = 0;
  std::uint64_t steps_limit = 0;    // branch (a): enumeration and matching
  std::uint64_t steps_witness = 0;  // branch (b): certificate search
  std::uint64_t emissions = 0;
  std::uint64_t presentations = 0;  // Tietze emissions examined
  std::uint64_t candidates = 0;     // witness candidates examined
};

struct RecognizeOptions {
  std::uint64_t budget = default_budget();
  std::uint64_t slice = 1000;  // round-robin quantum between branches
  bool enumerate = true;       // branch (a)
  bool certify = true;         // branch (b)
};

// Throws std::invalid_argument when the oracle is not total.
Verdict recognize_limit(const Presentation& p, OraclePtr wp, RecognizeOptions opts = {});

// Re-checks a verdict from its witness alone.
Tri verify_verdict(const Presentation& p, const Verdict& v, WordOracle& wp);

// ---------------------------------------------------------------------------

//! F(A) *_{u = v} F(B) for a partition of the generators into two sides.
//! Normal forms over the cyclic edge group; membership in <u> uses roots.
class PinchedOracle final : public WordOracle {
 public:
  // side[g] is 0 or 1; u lies over side 0, v over side 1.
  PinchedOracle(std::vector<int> side, Word u, Word v);
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "pinched"; }

 protected:
  Answer decide(const Word& w) override;

 private:
  std::optional<long> edge_power(const Word& w, int side) const;

  std::vector<int> side_;
  Word edge_[2];
};

// The oracle for a one-relator presentation u v^-1 whose two halves use
// disjoint generators (up to cyclic rotation), or nullptr.
OraclePtr detect_pinched(const Presentation& p);

// <gens_1, gens_2 | u v^-1>, generators a, b, ... across both factors; v is
// given over the second factor's own generators 0..rank2-1.
Presentation pinched_presentation(std::size_t rank1, std::size_t rank2, const Word& u, const Word& v);
Verdict recognize_cyclically_pinched(std::size_t rank1, std::size_t rank2, const Word& u, const Word& v,
                                     RecognizeOptions opts = {});

// ---------------------------------------------------------------------------

enum class FreeKind { Free, NotFree, Unknown };
const char* to_string(FreeKind k);

struct FreeVerdict {
  FreeKind kind = FreeKind::Unknown;
  std::string reason;
  std::optional<Witness> witness;
  std::optional<TietzeEmission> free_form;  // relator-free presentation and its path
  std::uint64_t budget = 0;
  std::uint64_t steps = 0;
};

FreeVerdict recognize_free(const Presentation& p, OraclePtr wp, RecognizeOptions opts = {});

}  // namespace limitforge

#endif  // LIMITFORGE_RECOGNIZE_HPP_
