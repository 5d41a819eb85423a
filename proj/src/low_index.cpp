#include <algorithm>

#include "limitforge/coset.hpp"

namespace limitforge {

namespace {

class PartialTable {
 public:
  PartialTable(const Presentation& p, std::size_t n)
      : width_(2 * p.rank()), rows_(n, std::vector<int>(2 * p.rank(), CosetTable::kUndefined)) {
    for (const auto& r : p.relators()) {
      std::vector<std::size_t> codes;
      for (Letter l : r) codes.push_back(letter_code(l));
      rels_.push_back(std::move(codes));
    }
  }

  std::size_t count = 1;

  std::size_t trail_size() const { return trail_.size(); }
  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      auto [c, x] = trail_.back();
      rows_[c][x] = CosetTable::kUndefined;
      trail_.pop_back();
    }
  }

  int get(std::size_t c, std::size_t x) const { return rows_[c][x]; }

  void set(std::size_t c, std::size_t x, int d) {
    rows_[c][x] = d;
    rows_[d][x ^ 1] = static_cast<int>(c);
    trail_.push_back({c, x});
    trail_.push_back({static_cast<std::size_t>(d), x ^ 1});
  }

  // First undefined entry in row-major order, or nullopt when complete.
  std::optional<std::pair<std::size_t, std::size_t>> first_gap() const {
    for (std::size_t c = 0; c < count; ++c) {
      for (std::size_t x = 0; x < width_; ++x) {
        if (rows_[c][x] == CosetTable::kUndefined) return std::make_pair(c, x);
      }
    }
    return std::nullopt;
  }

  // Closes relator cycles. False on a contradiction.
  bool deduce(std::uint64_t& work) {
    for (bool changed = true; changed;) {
      changed = false;
      for (std::size_t c = 0; c < count; ++c) {
        for (const auto& r : rels_) {
          ++work;
          int f = static_cast<int>(c);
          int b = static_cast<int>(c);
          std::size_t i = 0;
          std::size_t j = r.size();
          while (i < j && rows_[f][r[i]] != CosetTable::kUndefined) f = rows_[f][r[i++]];
          if (i == j) {
            if (f != b) return false;
            continue;
          }
          while (j > i && rows_[b][r[j - 1] ^ 1] != CosetTable::kUndefined) {
            b = rows_[b][r[--j] ^ 1];
          }
          if (j == i) return false;
          if (j == i + 1) {
            if (rows_[b][r[i] ^ 1] != CosetTable::kUndefined) return false;
            set(static_cast<std::size_t>(f), r[i], b);
            changed = true;
          }
        }
      }
    }
    return true;
  }

  CosetTable table(std::size_t rank) const {
    return CosetTable(rank, std::vector<std::vector<int>>(rows_.begin(), rows_.begin() + static_cast<long>(count)));
  }

 private:
  std::size_t width_;
  std::vector<std::vector<int>> rows_;
  std::vector<std::vector<std::size_t>> rels_;
  std::vector<std::pair<std::size_t, std::size_t>> trail_;
};

struct Frame {
  std::size_t c;
  std::size_t x;
  std::size_t next_choice;  // candidate coset to try next
  std::size_t mark;
  std::size_t count;
};

}  // namespace

Process<CosetTable> low_index(Presentation p, std::size_t n) {
  if (n < 1) throw std::invalid_argument("low_index needs n >= 1");
  if (p.rank() == 0) {
    std::vector<std::vector<int>> rows(1);
    Step<CosetTable> only{1, CosetTable(0, std::move(rows))};
    co_yield std::move(only);
    co_return;
  }
  PartialTable t(p, n);
  std::uint64_t work = 0;
  if (!t.deduce(work)) co_return;
  auto gap = t.first_gap();
  if (!gap) {
    Step<CosetTable> only{work + 1, t.table(p.rank())};
    co_yield std::move(only);
    co_return;
  }
  std::vector<Frame> stack{{gap->first, gap->second, 0, t.trail_size(), t.count}};
  while (!stack.empty()) {
    Frame& fr = stack.back();
    t.undo(fr.mark);
    t.count = fr.count;
    if (fr.next_choice > fr.count || fr.next_choice >= n) {
      stack.pop_back();
      continue;
    }
    std::size_t d = fr.next_choice++;
    if (d < fr.count && t.get(d, fr.x ^ 1) != CosetTable::kUndefined) continue;
    if (d == fr.count) ++t.count;
    t.set(fr.c, fr.x, static_cast<int>(d));
    ++work;
    if (!t.deduce(work)) continue;
    auto next = t.first_gap();
    if (!next) {
      CosetTable table = t.table(p.rank());
      if (!table.valid_for(p)) throw std::logic_error("low_index produced an invalid table");
      Step<CosetTable> found{work, std::move(table)};
      co_yield std::move(found);
      work = 0;
      continue;
    }
    stack.push_back({next->first, next->second, 0, t.trail_size(), t.count});
    if (work > 512) {
      Step<CosetTable> tick{work, std::nullopt};
      co_yield std::move(tick);
      work = 0;
    }
  }
}

std::vector<CosetTable> low_index_all(const Presentation& p, std::size_t n) {
  std::vector<CosetTable> out;
  auto proc = low_index(p, n);
  while (auto step = proc.next()) {
    if (step->value) out.push_back(std::move(*step->value));
  }
  return out;
}

}  // namespace limitforge
