// Iterated centralizer extensions of free groups.
//
// Level 0 is the free group on the base generators. Level k is
//   G_{k-1} *_{C_k} (C_k x Z^{n_k}),   C_k = Z(g_k) in G_{k-1},
// with new generators t_{k,1..n_k} commuting with C_k and each other.

#ifndef LIMITFORGE_ICE_HPP_
#define LIMITFORGE_ICE_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "limitforge/oracle.hpp"
#include "limitforge/presentation.hpp"
#include "limitforge/process.hpp"
#include "limitforge/retract.hpp"

namespace limitforge {

struct ExtensionStep {
  Word g;                               // over the generators below this step
  std::size_t n = 1;                    // new generators
  std::vector<Word> centralizer_basis;  // basis of Z(g) one level down
};

enum class ElementKind { Parabolic, Hyperbolic };
const char* to_string(ElementKind k);

//! g = conjugator * core * conjugator^-1. Parabolic: core lies in the
//! maximal abelian subgroup of `level` (the extended centralizer
//! C_level x Z^n). Hyperbolic: core = root^exponent is cyclically reduced
//! over the splitting of `level` (free reduction at level 0) and Z(g) is
//! generated by conjugator * root * conjugator^-1.
struct ElementInfo {
  ElementKind kind = ElementKind::Hyperbolic;
  std::size_t level = 0;
  Word conjugator;
  Word core;
  Word root;
  long exponent = 1;
};

class IceTower {
 public:
  explicit IceTower(std::size_t base_rank = 1);
  ~IceTower();
  IceTower(const IceTower& other);
  IceTower& operator=(const IceTower& other);
  IceTower(IceTower&&) noexcept;
  IceTower& operator=(IceTower&&) noexcept;

  std::size_t base_rank() const noexcept { return base_rank_; }
  const std::vector<ExtensionStep>& steps() const noexcept { return steps_; }
  std::size_t height() const noexcept { return steps_.size(); }

  // Generators of the group at `level` (levels 0..height()).
  std::size_t rank(std::size_t level) const;
  std::size_t rank() const { return rank(height()); }
  // Index of the first generator added by step `level` (1-based).
  std::size_t first_new(std::size_t level) const { return rank(level - 1); }
  std::vector<std::string> names(std::size_t level) const;
  std::vector<std::string> names() const { return names(height()); }

  // Word problem at a level; words must lie over that level's generators.
  bool trivial(const Word& w, std::size_t level) const;
  bool trivial(const Word& w) const { return trivial(w, height()); }

  ElementInfo analyze(const Word& g, std::size_t level) const;
  ElementInfo analyze(const Word& g) const { return analyze(g, height()); }

  friend bool operator==(const IceTower& a, const IceTower& b) {
    if (a.base_rank_ != b.base_rank_ || a.steps_.size() != b.steps_.size()) return false;
    for (std::size_t i = 0; i < a.steps_.size(); ++i) {
      if (a.steps_[i].g != b.steps_[i].g || a.steps_[i].n != b.steps_[i].n) return false;
    }
    return true;
  }

 private:
  friend IceTower extend_centralizer(const IceTower& t, const Word& g, std::size_t n);
  class Engine;

  Engine& engine() const;

  std::size_t base_rank_;
  std::vector<ExtensionStep> steps_;
  mutable std::unique_ptr<Engine> engine_;
};

class TrivialElement : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws TrivialElement when g is trivial, AlphabetError when g is not a
// word over the tower's generators, invalid_argument when n == 0.
IceTower extend_centralizer(const IceTower& t, const Word& g, std::size_t n);

Presentation presentation_of(const IceTower& t);

bool wp_ice(const IceTower& t, const Word& w);
ElementInfo classify_element(const IceTower& t, const Word& g);  // throws on trivial g
std::vector<Word> centralizer_ice(const IceTower& t, const Word& g);

// Tower file: {"base_rank": r, "steps": [{"g": "<word>", "n": k}, ...]}.
IceTower tower_from_json(const std::string& text);
std::string tower_to_json(const IceTower& t);

// Exact word problem for the top level.
class IceOracle final : public WordOracle {
 public:
  explicit IceOracle(IceTower t);
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "ice"; }
  const IceTower& tower() const noexcept { return tower_; }

 protected:
  Answer decide(const Word& w) override;

 private:
  IceTower tower_;
};

// Nontriviality by specializations t_{k,i} -> g_k^{m}, |m| <= bound, composed
// down to the free base. Never answers Trivial except for the empty word.
class SpecializationOracle final : public WordOracle {
 public:
  explicit SpecializationOracle(IceTower t, long bound = 8);
  Completeness completeness() const override { return Completeness::SemiDecision; }
  std::string name() const override { return "specialization"; }

 protected:
  Answer decide(const Word& w) override;

 private:
  IceTower tower_;
  long bound_;
  std::vector<std::vector<Word>> maps_;  // images over the base, one map per exponent choice
};

// ---------------------------------------------------------------------------
// Enumeration.

//! Towers by weight base_rank + sum(|g_k| + n_k), then base rank, then the
//! step list in lexicographic order of (|g|, g, n) with g in shortlex order
//! of letter codes. Elements g trivial in the group below are skipped.
Process<IceTower> enumerate_ice();

struct LimitEmission {
  Presentation presentation;
  std::size_t tower_index = 0;  // position in enumerate_ice
  IceTower tower;
  std::vector<Word> S;          // over the tower's generators
  SubgroupResult subgroup;
};

struct LimitOptions {
  std::uint64_t quantum = 20000;  // search budget per scheduled turn
  bool dedup = false;             // drop presentations with a known canonical key
};

//! Pairs (tower i, subset j) enter at round i + 3j; subset 0 is the full
//! generating set, later subsets are the nontrivial reduced words ordered by
//! (total length, size, lexicographic). At each round a live pair receives a
//! quantum of search budget when its age is 0 or a power of two.
Process<LimitEmission> enumerate_limit_groups(LimitOptions opts = {});

SubgroupResult subgroup_presentation_limit(const IceTower& t, const std::vector<Word>& S,
                                           SubgroupOptions opts = {});

}  // namespace limitforge

#endif  // LIMITFORGE_ICE_HPP_
