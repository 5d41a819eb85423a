#include "limitforge/word.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace limitforge {

Word Word::reduce(std::span<const Letter> raw) {
  Word out;
  out.letters_.reserve(raw.size());
  for (Letter l : raw) {
    if (l == 0) throw AlphabetError("letter 0 is not a generator");
    if (!out.letters_.empty() && out.letters_.back() == -l) {
      out.letters_.pop_back();
    } else {
      out.letters_.push_back(l);
    }
  }
  return out;
}

Word Word::reduce(std::span<const Letter> raw, std::size_t rank) {
  for (Letter l : raw) {
    if (l == 0 || generator_of(l) >= rank) {
      throw AlphabetError("generator index " + std::to_string(l) +
                          " outside alphabet of rank " + std::to_string(rank));
    }
  }
  return reduce(raw);
}

Word Word::generator(std::size_t g, long exponent) {
  Word w;
  Letter l = make_letter(g, exponent < 0 ? -1 : 1);
  w.letters_.assign(static_cast<std::size_t>(exponent < 0 ? -exponent : exponent), l);
  return w;
}

Word Word::inverse() const {
  Word w;
  w.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    w.letters_.push_back(-*it);
  }
  return w;
}

Word Word::pow(long n) const {
  if (n < 0) return inverse().pow(-n);
  if (n == 0 || empty()) return {};
  // Cancellation only happens at the seams, between the tail and head of the
  // cyclic reduction, so build from the cyclic core.
  auto [core, conj] = cyclic_reduce(*this);
  Word body;
  body.letters_.reserve(core.size() * static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    body.letters_.insert(body.letters_.end(), core.letters_.begin(),
                         core.letters_.end());
  }
  return conj * body * conj.inverse();
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  pos = std::min(pos, letters_.size());
  len = std::min(len, letters_.size() - pos);
  Word w;
  w.letters_.assign(letters_.begin() + static_cast<long>(pos),
                    letters_.begin() + static_cast<long>(pos + len));
  return w;
}

std::size_t Word::support_rank() const noexcept {
  std::size_t r = 0;
  for (Letter l : letters_) r = std::max(r, generator_of(l) + 1);
  return r;
}

bool Word::uses_generator(std::size_t g) const noexcept {
  return std::any_of(letters_.begin(), letters_.end(),
                     [g](Letter l) { return generator_of(l) == g; });
}

Word& Word::operator*=(const Word& rhs) {
  std::size_t k = 0;
  while (k < rhs.size() && !letters_.empty() && letters_.back() == -rhs[k]) {
    letters_.pop_back();
    ++k;
  }
  letters_.insert(letters_.end(), rhs.letters_.begin() + static_cast<long>(k),
                  rhs.letters_.end());
  return *this;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() <=> b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto ca = letter_code(a[i]);
    auto cb = letter_code(b[i]);
    if (ca != cb) return ca <=> cb;
  }
  return std::strong_ordering::equal;
}

Word commutator(const Word& u, const Word& v) {
  return u.inverse() * v.inverse() * u * v;
}

Word conjugate(const Word& w, const Word& by) { return by * w * by.inverse(); }

CyclicReduction cyclic_reduce(const Word& w) {
  const auto& l = w.letters();
  std::size_t i = 0;
  std::size_t j = l.size();
  while (j - i >= 2 && l[i] == -l[j - 1]) {
    ++i;
    --j;
  }
  return {w.subword(i, j - i), w.subword(0, i)};
}

bool is_cyclically_reduced(const Word& w) {
  return w.size() < 2 || w[0] != -w[w.size() - 1];
}

namespace {

Word rotate(const Word& w, std::size_t k) {
  std::vector<Letter> v(w.begin(), w.end());
  std::rotate(v.begin(), v.begin() + static_cast<long>(k), v.end());
  return Word::reduce(v);
}

}  // namespace

Word cyclic_canonical(const Word& w) {
  if (w.empty()) return w;
  Word best = w;
  Word inv = w.inverse();
  for (std::size_t k = 0; k < w.size(); ++k) {
    best = std::min({best, rotate(w, k), rotate(inv, k)});
  }
  return best;
}

bool is_rotation_of(const Word& u, const Word& v) {
  if (u.size() != v.size()) return false;
  if (u.empty()) return true;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (rotate(v, k) == u) return true;
  }
  return false;
}

Root primitive_root(const Word& w) {
  if (w.empty()) throw std::invalid_argument("primitive_root of the identity");
  auto [core, conj] = cyclic_reduce(w);
  const std::size_t n = core.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d) continue;
    bool periodic = true;
    for (std::size_t i = d; i < n && periodic; ++i) {
      periodic = core[i] == core[i - d];
    }
    if (periodic) {
      return {conjugate(core.subword(0, d), conj), static_cast<long>(n / d)};
    }
  }
  return {w, 1};  // unreachable: d = n always succeeds
}

std::variant<WholeGroup, Word> centralizer_free(const Word& w) {
  if (w.empty()) return WholeGroup{};
  return primitive_root(w).root;
}

std::vector<Word> words_of_length(std::size_t rank, std::size_t length) {
  std::vector<Word> out;
  if (length == 0) {
    out.emplace_back();
    return out;
  }
  if (rank == 0) return out;
  std::vector<Letter> cur;
  auto rec = [&](auto&& self) -> void {
    if (cur.size() == length) {
      out.push_back(Word::reduce(cur));
      return;
    }
    for (std::size_t c = 0; c < 2 * rank; ++c) {
      Letter l = letter_from_code(c);
      if (!cur.empty() && cur.back() == -l) continue;
      cur.push_back(l);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

// ---------------------------------------------------------------------------

bool is_identifier(std::string_view s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

namespace {

class WordParser {
 public:
  WordParser(std::string_view text, const std::vector<std::string>& names)
      : text_(text), names_(names) {}

  Word parse() {
    Word w = expr();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  [[noreturn]] void fail(const std::string& what) { throw ParseError(what, pos_); }

  void skip() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool starts_term() {
    skip();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return std::isalpha(static_cast<unsigned char>(c)) || c == '1' ||
           c == '(' || c == '[';
  }

  Word expr() {
    if (!starts_term()) fail("expected a word");
    Word w = term();
    for (;;) {
      skip();
      if (pos_ < text_.size() && text_[pos_] == '*') {
        ++pos_;
        if (!starts_term()) fail("expected a word after '*'");
        w *= term();
      } else if (starts_term()) {
        w *= term();
      } else {
        return w;
      }
    }
  }

  Word term() {
    Word base = atom();
    skip();
    while (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      skip();
      base = base.pow(integer());
      skip();
    }
    return base;
  }

  long integer() {
    std::size_t start = pos_;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
    std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (digits == pos_) {
      pos_ = start;
      fail("expected an exponent");
    }
    long value = 0;
    const char* first = text_.data() + digits;
    auto [ptr, ec] = std::from_chars(first, text_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    (void)ptr;
    return text_[start] == '-' ? -value : value;
  }

  Word atom() {
    skip();
    char c = text_[pos_];
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (c == '(') {
      ++pos_;
      Word w = expr();
      expect(')');
      return w;
    }
    if (c == '[') {
      ++pos_;
      Word u = expr();
      expect(',');
      Word v = expr();
      expect(']');
      return commutator(u, v);
    }
    std::size_t start = pos_;
    ++pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view name = text_.substr(start, pos_ - start);
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      pos_ = start;
      fail("unknown generator '" + std::string(name) + "'");
    }
    return Word::letter(make_letter(static_cast<std::size_t>(it - names_.begin())));
  }

  void expect(char c) {
    skip();
    if (pos_ >= text_.size() || text_[pos_] != c) {
      fail(std::string("expected '") + c + "'");
    }
    ++pos_;
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Word parse_word(std::string_view text, const std::vector<std::string>& names) {
  return WordParser(text, names).parse();
}

std::string format_word(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::string out;
  std::size_t i = 0;
  while (i < w.size()) {
    std::size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    std::size_t g = generator_of(w[i]);
    if (g >= names.size()) throw AlphabetError("no name for generator " + std::to_string(g));
    if (!out.empty()) out += '*';
    out += names[g];
    long e = static_cast<long>(j - i) * sign_of(w[i]);
    if (e != 1) out += "^" + std::to_string(e);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------

FreeHom::FreeHom(std::size_t source_rank, std::size_t target_rank,
                 std::vector<Word> images)
    : source_rank_(source_rank), target_rank_(target_rank), images_(std::move(images)) {
  if (images_.size() != source_rank_) {
    throw AlphabetError("homomorphism needs one image per source generator");
  }
  for (const auto& w : images_) {
    if (w.support_rank() > target_rank_) {
      throw AlphabetError("image word outside target alphabet");
    }
  }
}

FreeHom FreeHom::identity(std::size_t rank) {
  std::vector<Word> images;
  for (std::size_t g = 0; g < rank; ++g) images.push_back(Word::generator(g));
  return FreeHom(rank, rank, std::move(images));
}

Word FreeHom::operator()(const Word& w) const {
  if (w.support_rank() > source_rank_) {
    throw AlphabetError("word outside source alphabet");
  }
  return substitute(w, images_);
}

Word substitute(const Word& w, std::span<const Word> images) {
  Word out;
  for (Letter l : w) {
    std::size_t g = generator_of(l);
    if (g >= images.size()) throw AlphabetError("no image for generator " + std::to_string(g));
    out *= l > 0 ? images[g] : images[g].inverse();
  }
  return out;
}

ReducedWords::ReducedWords(std::size_t rank, std::size_t length) : rank_(rank), codes_(length, 0) {
  if (length > 0 && rank == 0) {
    done_ = true;
    return;
  }
  for (std::size_t i = 1; i < length; ++i) {
    while (!ok(i)) ++codes_[i];
  }
}

bool ReducedWords::next(Word& out) {
  if (done_) return false;
  std::vector<Letter> letters;
  letters.reserve(codes_.size());
  for (auto c : codes_) letters.push_back(letter_from_code(c));
  out = Word::reduce(letters);
  advance();
  return true;
}

void ReducedWords::advance() {
  std::size_t i = codes_.size();
  while (i > 0) {
    --i;
    do {
      ++codes_[i];
    } while (codes_[i] < 2 * rank_ && !ok(i));
    if (codes_[i] < 2 * rank_) {
      for (std::size_t j = i + 1; j < codes_.size(); ++j) {
        codes_[j] = 0;
        while (!ok(j)) ++codes_[j];
      }
      return;
    }
  }
  done_ = true;
}

}  // namespace limitforge
