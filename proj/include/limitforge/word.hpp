// Words in finitely generated free groups.
//
// Generators are interned to small integers. A letter is a nonzero integer:
// generator i (0-based) is the letter i+1 and its inverse is -(i+1). Names
// only exist at the parse/print boundary.

#ifndef LIMITFORGE_WORD_HPP_
#define LIMITFORGE_WORD_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace limitforge {

using Letter = std::int32_t;

constexpr Letter make_letter(std::size_t generator, int sign = 1) {
  auto l = static_cast<Letter>(generator + 1);
  return sign < 0 ? -l : l;
}
constexpr std::size_t generator_of(Letter l) {
  return static_cast<std::size_t>(l < 0 ? -l : l) - 1;
}
constexpr int sign_of(Letter l) { return l < 0 ? -1 : 1; }

// Position of a letter in the fixed total order a < a^-1 < b < b^-1 < ...
constexpr std::size_t letter_code(Letter l) {
  return 2 * generator_of(l) + (l < 0 ? 1 : 0);
}
constexpr Letter letter_from_code(std::size_t code) {
  return make_letter(code / 2, (code % 2) ? -1 : 1);
}

class AlphabetError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// A freely reduced word. Every constructor path reduces, so the invariant
// "no adjacent x x^-1" always holds.
class Word {
 public:
  Word() = default;

  static Word reduce(std::span<const Letter> raw);
  // Rejects letters whose generator index is >= rank.
  static Word reduce(std::span<const Letter> raw, std::size_t rank);
  static Word reduce(std::initializer_list<Letter> raw) {
    return reduce(std::span<const Letter>(raw.begin(), raw.size()));
  }
  static Word letter(Letter l) { return reduce({l}); }
  static Word generator(std::size_t g, long exponent = 1);

  const std::vector<Letter>& letters() const noexcept { return letters_; }
  std::size_t size() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  auto begin() const noexcept { return letters_.begin(); }
  auto end() const noexcept { return letters_.end(); }

  Word inverse() const;
  Word pow(long n) const;
  Word subword(std::size_t pos, std::size_t len) const;
  // One past the largest generator index used (0 for the empty word).
  std::size_t support_rank() const noexcept;
  bool uses_generator(std::size_t g) const noexcept;

  Word& operator*=(const Word& rhs);
  friend Word operator*(Word lhs, const Word& rhs) { return lhs *= rhs; }

  friend bool operator==(const Word&, const Word&) = default;
  // Shortlex order with the letter order given by letter_code.
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

 private:
  std::vector<Letter> letters_;
};

Word commutator(const Word& u, const Word& v);  // u^-1 v^-1 u v
Word conjugate(const Word& w, const Word& by);  // by * w * by^-1

struct CyclicReduction {
  Word core;
  Word conjugator;  // w == conjugator * core * conjugator^-1
};
CyclicReduction cyclic_reduce(const Word& w);
bool is_cyclically_reduced(const Word& w);

// Least cyclic permutation of w or w^-1; w must be cyclically reduced.
Word cyclic_canonical(const Word& w);
// True when u is a cyclic rotation of v (both cyclically reduced).
bool is_rotation_of(const Word& u, const Word& v);

struct Root {
  Word root;
  long exponent = 1;
};
// w == root^exponent with exponent maximal. Throws on the identity.
Root primitive_root(const Word& w);

struct WholeGroup {
  friend bool operator==(const WholeGroup&, const WholeGroup&) = default;
};
// The centralizer of w in a free group is cyclic, generated by the maximal
// root of w. The identity centralizes everything.
std::variant<WholeGroup, Word> centralizer_free(const Word& w);

// All reduced words of exactly the given length, in shortlex order.
std::vector<Word> words_of_length(std::size_t rank, std::size_t length);

// Odometer over the reduced words of one length, in lexicographic order of
// letter codes (a, a^-1, b, b^-1, ...).
class ReducedWords {
 public:
  ReducedWords(std::size_t rank, std::size_t length);
  bool next(Word& out);

 private:
  bool ok(std::size_t i) const { return i == 0 || (codes_[i] ^ 1) != codes_[i - 1]; }
  void advance();

  std::size_t rank_;
  std::vector<std::size_t> codes_;
  bool done_ = false;
};

// ---------------------------------------------------------------------------
// Names and syntax

// Identifier syntax: [A-Za-z][A-Za-z0-9_]*
bool is_identifier(std::string_view s);

// Parses the word syntax: identifiers, powers (a^-1, a^3), concatenation by
// '*' or whitespace, commutators [u,v] = u^-1 v^-1 u v, parentheses, and '1'
// for the empty word.
Word parse_word(std::string_view text, const std::vector<std::string>& names);
std::string format_word(const Word& w, const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Homomorphisms between free groups

class FreeHom {
 public:
  FreeHom(std::size_t source_rank, std::size_t target_rank,
          std::vector<Word> images);
  static FreeHom identity(std::size_t rank);

  std::size_t source_rank() const noexcept { return source_rank_; }
  std::size_t target_rank() const noexcept { return target_rank_; }
  const std::vector<Word>& images() const noexcept { return images_; }

  Word operator()(const Word& w) const;

 private:
  std::size_t source_rank_;
  std::size_t target_rank_;
  std::vector<Word> images_;
};

// Substitute images[g] for every occurrence of generator g.
Word substitute(const Word& w, std::span<const Word> images);

}  // namespace limitforge

template <>
struct std::hash<limitforge::Word> {
  std::size_t operator()(const limitforge::Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto l : w.letters()) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(l));
      h *= 1099511628211ull;
    }
    return h;
  }
};

#endif  // LIMITFORGE_WORD_HPP_
