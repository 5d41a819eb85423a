// Tietze transformations and the enumerators built on them.

#ifndef LIMITFORGE_TIETZE_HPP_
#define LIMITFORGE_TIETZE_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "limitforge/presentation.hpp"
#include "limitforge/process.hpp"

namespace limitforge {

class IneligibleMove : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// One factor conjugator * r^exponent * conjugator^-1 of a derivation.
struct DerivationFactor {
  Word conjugator;
  std::size_t relator = 0;
  long exponent = 1;
  friend bool operator==(const DerivationFactor&, const DerivationFactor&) = default;
};
using Derivation = std::vector<DerivationFactor>;

Word evaluate(const Derivation& d, const std::vector<Word>& relators);

namespace tietze {

// Appends a relator; the derivation expresses it (up to conjugacy) as a
// product of conjugates of the current relators.
struct AddRelator {
  Word relator;
  Derivation derivation;
};
// Deletes relator `index`; the derivation uses only the other relators.
struct RemoveRelator {
  std::size_t index = 0;
  Derivation derivation;
};
// Appends a generator `name` together with the relator name^-1 * definition.
struct AddGenerator {
  std::string name;
  Word definition;
};
// Eliminates `generator` using `relator`, in which it occurs exactly once.
struct RemoveGenerator {
  std::size_t generator = 0;
  std::size_t relator = 0;
};

}  // namespace tietze

using TietzeMove = std::variant<tietze::AddRelator, tietze::RemoveRelator,
                                tietze::AddGenerator, tietze::RemoveGenerator>;

Presentation tietze_step(const Presentation& p, const TietzeMove& move);
std::string describe(const TietzeMove& move, const Presentation& before);

// For a RemoveGenerator move: the word the eliminated generator equals,
// over the generators of the input presentation.
Word eliminated_value(const Presentation& p, const tietze::RemoveGenerator& m);

// Images of the old generators after eliminating `generator` := value
// (value over the old generators, not involving `generator`).
std::vector<Word> elimination_images(std::size_t rank, std::size_t generator, const Word& value);

struct TietzeEmission {
  Presentation presentation;
  std::vector<TietzeMove> path;  // from the starting presentation
  std::size_t weight = 0;
};

struct EnumerateOptions {
  std::optional<std::size_t> max_generators;
  std::optional<std::size_t> max_relator_length;
};

// Fair enumeration of presentations reachable from p. Layers are ordered
// by weight (move count plus the length of the words each move introduces),
// each layer by (total relator length, serialized form). Presentations equal
// up to the symmetries of normalize are emitted once. Starts with p.
Process<TietzeEmission> enumerate_presentations(Presentation p, EnumerateOptions opts = {});

// Words trivial in <X | R>: products of conjugates of relators, ordered by
// cost (one per factor plus conjugator length), then shortlex. Every trivial
// word eventually appears; each appears once.
Process<Word> consequence_stream(Presentation p);

// Replays a path and checks each move.
Presentation replay(const Presentation& start, const std::vector<TietzeMove>& path);

// Elimination pass used after Reidemeister-Schreier rewriting and retraction:
// removes trivial and duplicate relators and eliminates generators occurring
// once in some relator while that does not lengthen the presentation.
struct Simplified {
  Presentation presentation;
  std::vector<TietzeMove> moves;
  // For each generator of the input, its value over the output generators.
  std::vector<Word> substitution;
};
Simplified simplify(const Presentation& p);

}  // namespace limitforge

#endif  // LIMITFORGE_TIETZE_HPP_
