// Finite presentations <X | R>.

#ifndef LIMITFORGE_PRESENTATION_HPP_
#define LIMITFORGE_PRESENTATION_HPP_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "limitforge/word.hpp"

namespace limitforge {

class Presentation {
 public:
  Presentation() = default;
  // Relators are cyclically reduced on the way in; empty ones are dropped.
  Presentation(std::vector<std::string> generators, std::vector<Word> relators);

  // Free group on the default names (a, b, c, ... or x1, x2, ... past 26).
  static Presentation free(std::size_t rank);

  std::size_t rank() const noexcept { return generators_.size(); }
  const std::vector<std::string>& generators() const noexcept { return generators_; }
  const std::vector<Word>& relators() const noexcept { return relators_; }
  std::size_t total_length() const noexcept;

  Word word(std::string_view text) const { return parse_word(text, generators_); }
  std::string format(const Word& w) const { return format_word(w, generators_); }

  friend bool operator==(const Presentation&, const Presentation&) = default;

 private:
  std::vector<std::string> generators_;
  std::vector<Word> relators_;
};

std::vector<std::string> default_names(std::size_t n);

// Grammar: < g1, g2, ... | w1, w2, ... >
Presentation parse_presentation(std::string_view text);
std::string serialize(const Presentation& p);

// Canonical representative under generator renaming and permutation,
// relator order, relator rotation and relator inversion. Generators are
// renamed x1..xn. The permutation search is skipped above 6 generators.
Presentation normalize(const Presentation& p);
std::string canonical_key(const Presentation& p);

struct AbelianInvariants {
  std::size_t free_rank = 0;
  std::vector<long long> torsion;  // invariant factors > 1, each dividing the next
  friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};
AbelianInvariants abelianization(const Presentation& p);

// Smith normal form diagonal of an integer matrix (nonzero entries only).
std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> m);

}  // namespace limitforge

#endif  // LIMITFORGE_PRESENTATION_HPP_
