#include "limitforge/coset.hpp"

#include <algorithm>
#include <stdexcept>

namespace limitforge {

CosetTable::CosetTable(std::size_t rank, std::vector<std::vector<int>> rows,
                       std::vector<Word> subgroup_generators)
    : rank_(rank), rows_(std::move(rows)), subgens_(std::move(subgroup_generators)) {
  for (const auto& row : rows_) {
    if (row.size() != 2 * rank_) throw std::invalid_argument("coset table row has wrong width");
  }
}

int CosetTable::trace(int coset, const Word& w) const {
  for (Letter l : w) {
    if (coset == kUndefined) return kUndefined;
    coset = rows_[coset][letter_code(l)];
  }
  return coset;
}

bool CosetTable::complete() const {
  for (const auto& row : rows_) {
    if (std::find(row.begin(), row.end(), kUndefined) != row.end()) return false;
  }
  return true;
}

bool CosetTable::valid_for(const Presentation& p) const {
  if (p.rank() != rank_ || !complete()) return false;
  const int n = static_cast<int>(rows_.size());
  for (int c = 0; c < n; ++c) {
    for (std::size_t code = 0; code < 2 * rank_; ++code) {
      int d = rows_[c][code];
      if (d < 0 || d >= n || rows_[d][code ^ 1] != c) return false;
    }
  }
  for (const auto& r : p.relators()) {
    for (int c = 0; c < n; ++c) {
      if (trace(c, r) != c) return false;
    }
  }
  for (const auto& s : subgens_) {
    if (trace(0, s) != 0) return false;
  }
  return true;
}

CosetTable CosetTable::standardized() const {
  const std::size_t n = rows_.size();
  std::vector<int> number(n, kUndefined);
  std::vector<int> order{0};
  number[0] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int d : rows_[order[head]]) {
      if (d != kUndefined && number[d] == kUndefined) {
        number[d] = static_cast<int>(order.size());
        order.push_back(d);
      }
    }
  }
  std::vector<std::vector<int>> out(order.size(), std::vector<int>(2 * rank_, kUndefined));
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t code = 0; code < 2 * rank_; ++code) {
      int d = rows_[order[i]][code];
      out[i][code] = d == kUndefined ? kUndefined : number[d];
    }
  }
  return CosetTable(rank_, std::move(out), subgens_);
}

// ---------------------------------------------------------------------------

namespace {

// HLT enumeration with union-find coincidence handling.
class Enumerator {
 public:
  Enumerator(const Presentation& p, CosetOptions opts)
      : width_(2 * p.rank()), opts_(opts) {
    for (const auto& r : p.relators()) rels_.push_back(codes(r));
    new_coset();
  }

  static std::vector<std::size_t> codes(const Word& w) {
    std::vector<std::size_t> out;
    for (Letter l : w) out.push_back(letter_code(l));
    return out;
  }

  bool run(const std::vector<Word>& subgens) {
    for (const auto& s : subgens) {
      if (!scan_and_fill(0, codes(s))) return false;
    }
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (!live(c)) continue;
      for (const auto& r : rels_) {
        if (!scan_and_fill(static_cast<int>(c), r)) return false;
        if (!live(c)) break;
      }
      if (!live(c)) continue;
      for (std::size_t x = 0; x < width_ && live(c); ++x) {
        if (table_[c][x] == CosetTable::kUndefined && !define(static_cast<int>(c), x)) {
          return false;
        }
      }
    }
    return true;
  }

  // Live cosets in order, with entries renumbered.
  std::vector<std::vector<int>> compact() const {
    std::vector<int> number(table_.size(), CosetTable::kUndefined);
    int k = 0;
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (live(c)) number[c] = k++;
    }
    std::vector<std::vector<int>> out;
    for (std::size_t c = 0; c < table_.size(); ++c) {
      if (!live(c)) continue;
      std::vector<int> row(width_);
      for (std::size_t x = 0; x < width_; ++x) row[x] = number[table_[c][x]];
      out.push_back(std::move(row));
    }
    return out;
  }

 private:
  bool live(std::size_t c) const { return parent_[c] == static_cast<int>(c); }

  int new_coset() {
    table_.emplace_back(width_, CosetTable::kUndefined);
    parent_.push_back(static_cast<int>(parent_.size()));
    ++live_count_;
    return static_cast<int>(table_.size() - 1);
  }

  bool define(int c, std::size_t x) {
    // Dead rows are never reused; bound the total as well as the live count.
    if (table_.size() >= 16 * opts_.max_cosets + 1024) return false;
    if (live_count_ >= opts_.max_cosets) {
      if (!opts_.lookahead || !lookahead() || live_count_ >= opts_.max_cosets) return false;
      if (!live(static_cast<std::size_t>(c)) || table_[c][x] != CosetTable::kUndefined) {
        return true;
      }
    }
    int d = new_coset();
    table_[c][x] = d;
    table_[d][x ^ 1] = c;
    return true;
  }

  // Deductions only, from every live coset. Returns true if anything merged.
  bool lookahead() {
    std::size_t before = live_count_;
    for (std::size_t c = 0; c < table_.size(); ++c) {
      for (const auto& r : rels_) {
        if (!live(c)) break;
        scan(static_cast<int>(c), r, false);
      }
    }
    return live_count_ < before;
  }

  int rep(int c) {
    int r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      int next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(int a, int b, std::vector<int>& queue) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    --live_count_;
    queue.push_back(b);
  }

  void coincidence(int a, int b) {
    std::vector<int> queue;
    merge(a, b, queue);
    for (std::size_t i = 0; i < queue.size(); ++i) {
      int e = queue[i];
      for (std::size_t x = 0; x < width_; ++x) {
        int f = table_[e][x];
        if (f == CosetTable::kUndefined) continue;
        if (table_[f][x ^ 1] == e) table_[f][x ^ 1] = CosetTable::kUndefined;
        int e1 = rep(e);
        int f1 = rep(f);
        if (table_[e1][x] != CosetTable::kUndefined) {
          merge(f1, table_[e1][x], queue);
        } else if (table_[f1][x ^ 1] != CosetTable::kUndefined) {
          merge(e1, table_[f1][x ^ 1], queue);
        } else {
          table_[e1][x] = f1;
          table_[f1][x ^ 1] = e1;
        }
      }
    }
  }

  bool scan_and_fill(int c, const std::vector<std::size_t>& r) { return scan(c, r, true); }

  // Traces r from c forwards and backwards; fills gaps when `fill`.
  bool scan(int c, const std::vector<std::size_t>& r, bool fill) {
    if (r.empty()) return true;
    for (;;) {
      int f = c;
      int b = c;
      std::size_t i = 0;
      std::size_t j = r.size();
      while (i < j && table_[f][r[i]] != CosetTable::kUndefined) f = table_[f][r[i++]];
      if (i == j) {
        if (f != b) coincidence(f, b);
        return true;
      }
      while (j > i && table_[b][r[j - 1] ^ 1] != CosetTable::kUndefined) {
        b = table_[b][r[--j] ^ 1];
      }
      if (j == i) {
        coincidence(f, b);
        return true;
      }
      if (j == i + 1) {
        table_[f][r[i]] = b;
        table_[b][r[i] ^ 1] = f;
        return true;
      }
      if (!fill) return true;
      if (!define(f, r[i])) return false;
      if (!live(static_cast<std::size_t>(c))) return true;
    }
  }

  std::size_t width_;
  CosetOptions opts_;
  std::vector<std::vector<std::size_t>> rels_;
  std::vector<std::vector<int>> table_;
  std::vector<int> parent_;
  std::size_t live_count_ = 0;
};

}  // namespace

std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgens,
                                       CosetOptions opts) {
  if (opts.max_cosets < 1) throw std::invalid_argument("max_cosets must be at least 1");
  for (const auto& s : subgens) {
    if (s.support_rank() > p.rank()) throw AlphabetError("subgroup generator outside alphabet");
  }
  Enumerator e(p, opts);
  if (!e.run(subgens)) return std::nullopt;
  CosetTable t = CosetTable(p.rank(), e.compact(), subgens).standardized();
  if (!t.valid_for(p)) throw std::logic_error("coset enumeration produced an invalid table");
  return t;
}

}  // namespace limitforge
