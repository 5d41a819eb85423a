// Word-problem oracles and the homomorphism checks built on them.

#ifndef LIMITFORGE_ORACLE_HPP_
#define LIMITFORGE_ORACLE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "limitforge/presentation.hpp"
#include "limitforge/process.hpp"

namespace limitforge {

enum class Answer { Trivial, Nontrivial, Unknown };
enum class Completeness { Total, SemiDecision };

const char* to_string(Answer a);

class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class OracleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

//! Decides triviality of words over a fixed alphabet. Definitive answers
//! are cached so repeated queries are stable.
class WordOracle {
 public:
  explicit WordOracle(std::size_t rank) : rank_(rank) {}
  virtual ~WordOracle() = default;

  std::size_t rank() const noexcept { return rank_; }
  virtual Completeness completeness() const = 0;
  virtual std::string name() const = 0;

  Answer query(const Word& w);
  bool trivial(const Word& w) { return query(w) == Answer::Trivial; }
  bool equal(const Word& u, const Word& v) { return trivial(u * v.inverse()); }

  std::uint64_t queries() const noexcept { return queries_; }
  // Work units spent inside decide(), as reported by the engine.
  std::uint64_t work() const noexcept { return work_; }

 protected:
  virtual Answer decide(const Word& w) = 0;
  void add_work(std::uint64_t w) noexcept { work_ += w; }

 private:
  std::size_t rank_;
  std::unordered_map<Word, Answer> cache_;
  std::uint64_t queries_ = 0;
  std::uint64_t work_ = 0;
};

using OraclePtr = std::shared_ptr<WordOracle>;

class FreeOracle final : public WordOracle {
 public:
  explicit FreeOracle(std::size_t rank) : WordOracle(rank) {}
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "free"; }

 protected:
  Answer decide(const Word& w) override;
};

// Free abelian group: every pair of generators must commute by a relator.
class AbelianOracle final : public WordOracle {
 public:
  explicit AbelianOracle(const Presentation& p);
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "abelian"; }

 protected:
  Answer decide(const Word& w) override;
};

// Finite groups: the regular representation from coset enumeration.
class FiniteOracle final : public WordOracle {
 public:
  explicit FiniteOracle(const Presentation& p, std::size_t max_cosets = 200000);
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "finite"; }
  std::size_t order() const noexcept { return table_.size(); }

 protected:
  Answer decide(const Word& w) override;

 private:
  std::vector<std::vector<int>> table_;  // [coset][letter code]
};

// Direct product: blocks of generators with their own oracles.
class ProductOracle final : public WordOracle {
 public:
  struct Block {
    std::vector<std::size_t> generators;
    OraclePtr oracle;  // over the block's generators, in order
  };
  ProductOracle(std::size_t rank, std::vector<Block> blocks);
  Completeness completeness() const override;
  std::string name() const override { return "product"; }

 protected:
  Answer decide(const Word& w) override;

 private:
  std::vector<Block> blocks_;
};

// Fundamental group of the Klein bottle <a, b | b a b^-1 a>.
class KleinOracle final : public WordOracle {
 public:
  KleinOracle() : WordOracle(2) {}
  explicit KleinOracle(const Presentation& p);
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "klein"; }

 protected:
  Answer decide(const Word& w) override;
};

// Words over a source alphabet, decided after substituting images into
// another oracle's alphabet.
class PullbackOracle final : public WordOracle {
 public:
  PullbackOracle(OraclePtr target, std::vector<Word> images);
  Completeness completeness() const override { return target_->completeness(); }
  std::string name() const override { return "pullback(" + target_->name() + ")"; }

 protected:
  Answer decide(const Word& w) override;

 private:
  OraclePtr target_;
  std::vector<Word> images_;
};

// External decision procedure speaking the line protocol: one serialized
// word per line in, one line "1" (trivial) or "0" (nontrivial) out.
class SubprocessOracle final : public WordOracle {
 public:
  SubprocessOracle(std::vector<std::string> names, std::string command);
  ~SubprocessOracle() override;
  Completeness completeness() const override { return Completeness::Total; }
  std::string name() const override { return "cmd:" + command_; }

 protected:
  Answer decide(const Word& w) override;

 private:
  std::vector<std::string> names_;
  std::string command_;
  int pid_ = -1;
  int to_child_ = -1;
  int from_child_ = -1;
  std::string buffer_;
};

// Semi-decision: triviality from the consequence stream, nontriviality
// from permutation quotients found by low-index enumeration. Both searches
// are shared across queries; each query may spend at most its budget.
class DovetailOracle final : public WordOracle {
 public:
  explicit DovetailOracle(const Presentation& p, std::uint64_t per_query_budget = 200000,
                          std::size_t max_index = 6);
  ~DovetailOracle() override;
  Completeness completeness() const override { return Completeness::SemiDecision; }
  std::string name() const override { return "dovetail"; }

 protected:
  Answer decide(const Word& w) override;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

// ---------------------------------------------------------------------------

enum class Tri { True, False, Unknown };
const char* to_string(Tri t);

// Every source relator maps to a trivial word in the target.
Tri check_hom(const Presentation& source, const std::vector<Word>& images, WordOracle& target);

//! A presentation of the image f(H) together with how its generators and
//! the images f(x_i) are expressed in terms of each other.
struct ImageData {
  Presentation presentation;
  // generators_in_source[j]: image generator j as a word in the symbols
  // f(x_1), ..., f(x_n), i.e. over the source alphabet.
  std::vector<Word> generators_in_source;
  // images_in_generators[i]: f(x_i) over the image presentation's generators.
  std::vector<Word> images_in_generators;
};

enum class Injectivity { Injective, NotInjective, ConfirmedInjective, Unknown };
const char* to_string(Injectivity i);

// Builds the only candidate inverse of f and checks it against the source's
// word problem. A total oracle decides; a semi-decision oracle can only
// confirm (through the consequence stream, within the budget).
Injectivity is_injective(const Presentation& source, const std::vector<Word>& images,
                         WordOracle& wp_source, const ImageData& image,
                         std::uint64_t budget = 1000000);

}  // namespace limitforge

#endif  // LIMITFORGE_ORACLE_HPP_
