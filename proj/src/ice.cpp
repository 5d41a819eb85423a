#include "limitforge/ice.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "json.hpp"

namespace limitforge {

namespace {

using Vec = std::vector<long>;

bool is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](long x) { return x == 0; });
}

void add_to(Vec& a, const Vec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
}

// Exponent vectors in [-radius, radius]^dim by max norm, then lexicographic.
std::vector<Vec> box(std::size_t dim, long radius) {
  std::vector<Vec> out{Vec(dim, 0)};
  for (long r = 1; r <= radius; ++r) {
    Vec v(dim, -r);
    while (true) {
      long norm = 0;
      for (long x : v) norm = std::max(norm, std::labs(x));
      if (norm == r) out.push_back(v);
      std::size_t i = dim;
      while (i > 0 && v[i - 1] == r) v[--i] = -r;
      if (i == 0) break;
      ++v[i - 1];
    }
  }
  return out;
}

// Edge-group search radius by the rank of the edge group.
long search_radius(std::size_t rank) {
  switch (rank) {
    case 0:
    case 1: return 6;
    case 2: return 3;
    case 3: return 2;
    default: return 1;
  }
}

}  // namespace

const char* to_string(ElementKind k) {
  return k == ElementKind::Parabolic ? "parabolic" : "hyperbolic";
}

// Normal forms for G_{K-1} *_{C} (C x Z^n). A word at level K is a_0 t^{v_1}
// a_1 ... t^{v_m} a_m with a_i over level K-1 and v_i in Z^n \ 0; it is
// reduced when no interior a_i lies in C. Membership of a in C = Z(g_K) is
// the word problem for [a, g_K] one level down.
class IceTower::Engine {
 public:
  Engine(std::size_t base_rank, std::vector<ExtensionStep> steps)
      : steps_(std::move(steps)), offset_(steps_.size() + 1), trivial_(steps_.size() + 1),
        edge_(steps_.size() + 1), info_(steps_.size() + 1), g_info_(steps_.size() + 1) {
    offset_[0] = base_rank;
    for (std::size_t k = 1; k <= steps_.size(); ++k) offset_[k] = offset_[k - 1] + steps_[k - 1].n;
  }

  bool trivial(const Word& w, std::size_t level) {
    if (w.empty()) return true;
    if (level == 0) return false;
    auto& memo = trivial_[level];
    if (auto it = memo.find(w); it != memo.end()) return it->second;
    Form f = reduce(w, level);
    bool out = f.v.empty() && trivial(f.a[0], level - 1);
    memo.emplace(w, out);
    return out;
  }

  ElementInfo analyze(const Word& w, std::size_t level) {
    auto& memo = info_[level];
    if (auto it = memo.find(w); it != memo.end()) return it->second;
    ElementInfo out = level == 0 ? analyze_free(w) : analyze_amalgam(w, level);
    memo.emplace(w, out);
    return out;
  }

 private:
  struct Form {
    std::vector<Word> a;  // a.size() == v.size() + 1
    std::vector<Vec> v;
  };

  std::size_t first_new(std::size_t level) const { return offset_[level - 1]; }
  std::size_t new_count(std::size_t level) const { return steps_[level - 1].n; }

  Word t_word(const Vec& v, std::size_t level) const {
    Word out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) out *= Word::generator(first_new(level) + i, v[i]);
    }
    return out;
  }

  Word to_word(const Form& f, std::size_t level) const {
    Word out = f.a[0];
    for (std::size_t i = 0; i < f.v.size(); ++i) {
      out *= t_word(f.v[i], level);
      out *= f.a[i + 1];
    }
    return out;
  }

  bool in_edge(const Word& a, std::size_t level) {
    if (a.empty()) return true;
    auto& memo = edge_[level];
    if (auto it = memo.find(a); it != memo.end()) return it->second;
    bool out = trivial(commutator(a, steps_[level - 1].g), level - 1);
    memo.emplace(a, out);
    return out;
  }

  Form reduce(const Word& w, std::size_t level) {
    const std::size_t lo = first_new(level);
    const std::size_t n = new_count(level);
    // Raw syllables.
    std::vector<Word> raw_a{Word{}};
    std::vector<Vec> raw_v;
    std::vector<Letter> current;
    bool in_t = false;
    for (Letter l : w) {
      std::size_t g = generator_of(l);
      if (g >= lo + n) throw AlphabetError("letter outside the tower level");
      if (g >= lo) {
        if (!in_t) {
          raw_a.back() = Word::reduce(current);
          current.clear();
          raw_v.emplace_back(n, 0);
          in_t = true;
        }
        raw_v.back()[g - lo] += sign_of(l);
      } else {
        if (in_t) {
          raw_a.emplace_back();
          in_t = false;
        }
        current.push_back(l);
      }
    }
    if (!in_t) raw_a.back() = Word::reduce(current);
    else raw_a.emplace_back();

    Form f;
    f.a.push_back(raw_a[0]);
    for (std::size_t i = 0; i < raw_v.size(); ++i) {
      const Vec& v = raw_v[i];
      const Word& a = raw_a[i + 1];
      if (is_zero(v)) {
        f.a.back() *= a;
        continue;
      }
      if (!f.v.empty() && in_edge(f.a.back(), level)) {
        Word c = f.a.back();
        f.a.pop_back();
        f.a.back() *= c;
        add_to(f.v.back(), v);
        if (is_zero(f.v.back())) {
          f.v.pop_back();
          f.a.back() *= a;
        } else {
          f.a.push_back(a);
        }
      } else {
        f.v.push_back(v);
        f.a.push_back(a);
      }
    }
    return f;
  }

  // w = h * form * h^-1 with form cyclically reduced: either a single
  // syllable of A, or ending in a t-syllable with a_0 outside C when m >= 2.
  std::pair<Form, Word> cyclic_form(const Word& w, std::size_t level) {
    Form f = reduce(w, level);
    Word h;
    while (true) {
      std::size_t m = f.v.size();
      if (m == 0) break;
      if (!f.a[m].empty()) {
        h *= f.a[m].inverse();
        f.a[0] = f.a[m] * f.a[0];
        f.a[m] = Word{};
      }
      if (m >= 2 && in_edge(f.a[0], level)) {
        h *= t_word(f.v[m - 1], level).inverse();
        add_to(f.v[0], f.v[m - 1]);
        f.v.pop_back();
        f.a.pop_back();
        if (is_zero(f.v[0])) {
          f.a[0] *= f.a[1];
          f.v.erase(f.v.begin());
          f.a.erase(f.a.begin() + 1);
        }
        continue;
      }
      break;
    }
    return {std::move(f), std::move(h)};
  }

  ElementInfo analyze_free(const Word& w) {
    auto cr = cyclic_reduce(w);
    auto r = primitive_root(cr.core);
    return ElementInfo{ElementKind::Hyperbolic, 0, cr.conjugator, cr.core, r.root, r.exponent};
  }

  std::vector<Word> edge_elements(std::size_t level) const {
    const auto& basis = steps_[level - 1].centralizer_basis;
    std::vector<Word> out;
    for (const auto& e : box(basis.size(), search_radius(basis.size()))) {
      Word c;
      for (std::size_t i = 0; i < e.size(); ++i) c *= basis[i].pow(e[i]);
      out.push_back(c);
    }
    return out;
  }

  const ElementInfo& g_info(std::size_t level) {
    auto& slot = g_info_[level];
    if (!slot) slot = analyze(steps_[level - 1].g, level - 1);
    return *slot;
  }

  // v with v x v^-1 = y^{sign}, for primitive hyperbolic roots at `level`.
  std::optional<std::pair<Word, int>> conjugate_roots(const Word& x, const Word& y, std::size_t level) {
    for (int sign : {1, -1}) {
      Word target = sign > 0 ? y : y.inverse();
      if (level == 0) {
        if (x.size() != target.size()) continue;
        for (std::size_t i = 0; i < x.size(); ++i) {
          Word p = x.subword(0, i);
          if (x.subword(i, x.size() - i) * p == target) return std::pair{p.inverse(), sign};
        }
        continue;
      }
      auto [fx, hx] = cyclic_form(x, level);
      auto [fy, hy] = cyclic_form(target, level);
      std::size_t m = fx.v.size();
      if (m == 0 || m != fy.v.size()) continue;
      Word fy_word = to_word(fy, level);
      for (std::size_t i = 0; i < m; ++i) {
        bool same = true;
        for (std::size_t j = 0; j < m && same; ++j) same = fx.v[(i + j) % m] == fy.v[j];
        if (!same) continue;
        Word p;
        for (std::size_t j = 0; j < i; ++j) p *= fx.a[j] * t_word(fx.v[j], level);
        Word rot = p.inverse() * to_word(fx, level) * p;
        for (const auto& c : edge_elements(level)) {
          if (trivial(c * rot * c.inverse() * fy_word.inverse(), level)) {
            return std::pair{hy * c * p.inverse() * hx.inverse(), sign};
          }
        }
      }
    }
    return std::nullopt;
  }

  // u, c with a = u c u^-1 and c in C_level, when a (over level-1) is
  // conjugate into the edge group.
  std::optional<std::pair<Word, Word>> conjugate_into_edge(const ElementInfo& ia, std::size_t level) {
    const ElementInfo& ig = g_info(level);
    if (ia.kind != ig.kind || ia.level != ig.level) return std::nullopt;
    if (ia.kind == ElementKind::Parabolic) {
      return std::pair{ia.conjugator * ig.conjugator.inverse(), conjugate(ia.core, ig.conjugator)};
    }
    auto v = conjugate_roots(ia.root, ig.root, ia.level);
    if (!v) return std::nullopt;
    Word u = ia.conjugator * v->first.inverse() * ig.conjugator.inverse();
    Word c = conjugate(ig.root.pow(v->second * ia.exponent), ig.conjugator);
    return std::pair{u, c};
  }

  ElementInfo analyze_amalgam(const Word& w, std::size_t level) {
    auto [f, h] = cyclic_form(w, level);
    const std::size_t m = f.v.size();
    if (m == 0) {
      if (trivial(f.a[0], level - 1)) throw TrivialElement("trivial element has no centralizer");
      ElementInfo ia = analyze(f.a[0], level - 1);
      if (auto uc = conjugate_into_edge(ia, level)) {
        return ElementInfo{ElementKind::Parabolic, level, h * uc->first, uc->second, Word{}, 1};
      }
      ia.conjugator = h * ia.conjugator;
      return ia;
    }
    Word core = to_word(f, level);
    if (m == 1 && in_edge(f.a[0], level)) {
      return ElementInfo{ElementKind::Parabolic, level, h, core, Word{}, 1};
    }
    // The t-vectors of a reduced form are canonical, so a k-th root repeats
    // them with period m / k and differs from the prefix by an edge element.
    for (std::size_t k = m; k >= 2; --k) {
      if (m % k != 0) continue;
      std::size_t l = m / k;
      bool periodic = true;
      for (std::size_t i = l; i < m && periodic; ++i) periodic = f.v[i] == f.v[i - l];
      if (!periodic) continue;
      Word p;
      for (std::size_t i = 0; i < l; ++i) p *= f.a[i] * t_word(f.v[i], level);
      for (const auto& c : edge_elements(level)) {
        Word r = p * c;
        if (trivial(r.pow(static_cast<long>(k)) * core.inverse(), level)) {
          return ElementInfo{ElementKind::Hyperbolic, level, h, core, r, static_cast<long>(k)};
        }
      }
    }
    return ElementInfo{ElementKind::Hyperbolic, level, h, core, core, 1};
  }

  std::vector<ExtensionStep> steps_;
  std::vector<std::size_t> offset_;  // rank per level
  std::vector<std::unordered_map<Word, bool>> trivial_;
  std::vector<std::unordered_map<Word, bool>> edge_;
  std::vector<std::unordered_map<Word, ElementInfo>> info_;
  std::vector<std::optional<ElementInfo>> g_info_;
};

// ---------------------------------------------------------------------------

IceTower::IceTower(std::size_t base_rank) : base_rank_(base_rank) {}
IceTower::~IceTower() = default;
IceTower::IceTower(const IceTower& other) : base_rank_(other.base_rank_), steps_(other.steps_) {}
IceTower& IceTower::operator=(const IceTower& other) {
  if (this != &other) {
    base_rank_ = other.base_rank_;
    steps_ = other.steps_;
    engine_.reset();
  }
  return *this;
}
IceTower::IceTower(IceTower&&) noexcept = default;
IceTower& IceTower::operator=(IceTower&&) noexcept = default;

IceTower::Engine& IceTower::engine() const {
  if (!engine_) engine_ = std::make_unique<Engine>(base_rank_, steps_);
  return *engine_;
}

std::size_t IceTower::rank(std::size_t level) const {
  if (level > steps_.size()) throw std::out_of_range("tower level");
  std::size_t r = base_rank_;
  for (std::size_t k = 0; k < level; ++k) r += steps_[k].n;
  return r;
}

std::vector<std::string> IceTower::names(std::size_t level) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < base_rank_; ++i) {
    out.push_back(base_rank_ <= 19 ? std::string(1, static_cast<char>('a' + i))
                                   : "a" + std::to_string(i + 1));
  }
  const std::string late = "tuvwxyz";
  for (std::size_t i = 0; out.size() < rank(level); ++i) {
    out.push_back(i < late.size() ? std::string(1, late[i]) : "t" + std::to_string(i + 1));
  }
  return out;
}

bool IceTower::trivial(const Word& w, std::size_t level) const {
  if (w.support_rank() > rank(level)) throw AlphabetError("word outside the tower level");
  return engine().trivial(w, level);
}

ElementInfo IceTower::analyze(const Word& g, std::size_t level) const {
  if (trivial(g, level)) throw TrivialElement("trivial element has no centralizer");
  return engine().analyze(g, level);
}

IceTower extend_centralizer(const IceTower& t, const Word& g, std::size_t n) {
  if (n == 0) throw std::invalid_argument("extension needs at least one new generator");
  ExtensionStep step{g, n, centralizer_ice(t, g)};
  IceTower out(t.base_rank_);
  out.steps_ = t.steps_;
  out.steps_.push_back(std::move(step));
  return out;
}

Presentation presentation_of(const IceTower& t) {
  std::vector<Word> relators;
  for (std::size_t k = 1; k <= t.height(); ++k) {
    const auto& step = t.steps()[k - 1];
    std::size_t lo = t.first_new(k);
    for (std::size_t i = 0; i < step.n; ++i) {
      for (const auto& c : step.centralizer_basis) relators.push_back(commutator(c, Word::generator(lo + i)));
    }
    for (std::size_t i = 0; i < step.n; ++i) {
      for (std::size_t j = i + 1; j < step.n; ++j) {
        relators.push_back(commutator(Word::generator(lo + i), Word::generator(lo + j)));
      }
    }
  }
  return Presentation(t.names(), std::move(relators));
}

bool wp_ice(const IceTower& t, const Word& w) { return t.trivial(w); }

ElementInfo classify_element(const IceTower& t, const Word& g) { return t.analyze(g); }

std::vector<Word> centralizer_ice(const IceTower& t, const Word& g) {
  ElementInfo info = t.analyze(g);
  std::vector<Word> out;
  if (info.kind == ElementKind::Hyperbolic) {
    out.push_back(conjugate(info.root, info.conjugator));
    return out;
  }
  const auto& step = t.steps()[info.level - 1];
  for (const auto& c : step.centralizer_basis) out.push_back(conjugate(c, info.conjugator));
  for (std::size_t i = 0; i < step.n; ++i) {
    out.push_back(conjugate(Word::generator(t.first_new(info.level) + i), info.conjugator));
  }
  return out;
}

IceTower tower_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("tower file: ") + e.what());
  }
  if (!j.is_object() || !j.contains("base_rank") || !j["base_rank"].is_number_unsigned()) {
    throw std::invalid_argument("tower file: base_rank must be a nonnegative integer");
  }
  IceTower t(j["base_rank"].get<std::size_t>());
  if (j.contains("steps")) {
    for (const auto& s : j["steps"]) {
      if (!s.contains("g") || !s["g"].is_string()) throw std::invalid_argument("tower file: step needs g");
      std::size_t n = s.value("n", std::size_t{1});
      t = extend_centralizer(t, parse_word(s["g"].get<std::string>(), t.names()), n);
    }
  }
  return t;
}

std::string tower_to_json(const IceTower& t) {
  nlohmann::ordered_json j;
  j["base_rank"] = t.base_rank();
  j["steps"] = nlohmann::ordered_json::array();
  for (std::size_t k = 1; k <= t.height(); ++k) {
    const auto& s = t.steps()[k - 1];
    nlohmann::ordered_json step;
    step["g"] = format_word(s.g, t.names(k - 1));
    step["n"] = s.n;
    j["steps"].push_back(step);
  }
  return j.dump();
}

IceOracle::IceOracle(IceTower t) : WordOracle(t.rank()), tower_(std::move(t)) {}

Answer IceOracle::decide(const Word& w) {
  add_work(w.size());
  return tower_.trivial(w) ? Answer::Trivial : Answer::Nontrivial;
}

SpecializationOracle::SpecializationOracle(IceTower t, long bound)
    : WordOracle(t.rank()), tower_(std::move(t)), bound_(bound) {
  constexpr std::size_t kMaxMaps = 4096;
  std::size_t extra = tower_.rank() - tower_.base_rank();
  long radius = bound_;
  while (radius > 1 && std::pow(2.0 * static_cast<double>(radius), static_cast<double>(extra)) > kMaxMaps) {
    --radius;
  }
  std::vector<Vec> exponents;
  for (auto& e : box(extra, radius)) {
    if (std::any_of(e.begin(), e.end(), [](long x) { return x == 0; }) && extra > 0) continue;
    exponents.push_back(std::move(e));
    if (exponents.size() >= kMaxMaps) break;
  }
  for (const auto& e : exponents) {
    std::vector<Word> images;
    for (std::size_t i = 0; i < tower_.base_rank(); ++i) images.push_back(Word::generator(i));
    std::size_t next = 0;
    for (const auto& step : tower_.steps()) {
      Word g = substitute(step.g, images);
      for (std::size_t i = 0; i < step.n; ++i) images.push_back(g.pow(e[next++]));
    }
    maps_.push_back(std::move(images));
  }
}

Answer SpecializationOracle::decide(const Word& w) {
  if (w.empty()) return Answer::Trivial;
  for (const auto& m : maps_) {
    add_work(w.size());
    if (!substitute(w, m).empty()) return Answer::Nontrivial;
  }
  return Answer::Unknown;
}

}  // namespace limitforge
