// Coset enumeration, low-index subgroups and Reidemeister-Schreier.

#ifndef LIMITFORGE_COSET_HPP_
#define LIMITFORGE_COSET_HPP_

#include <cstddef>
#include <optional>
#include <vector>

#include "limitforge/presentation.hpp"
#include "limitforge/process.hpp"
#include "limitforge/tietze.hpp"

namespace limitforge {

//! Action of the generators on the cosets of a subgroup. Coset 0 is the
//! subgroup itself; cosets are numbered in the order a breadth-first scan
//! from coset 0 meets them (letters in the order a, a^-1, b, b^-1, ...).
class CosetTable {
 public:
  static constexpr int kUndefined = -1;

  CosetTable() = default;
  CosetTable(std::size_t rank, std::vector<std::vector<int>> rows,
             std::vector<Word> subgroup_generators = {});

  std::size_t rank() const noexcept { return rank_; }
  std::size_t size() const noexcept { return rows_.size(); }
  std::size_t index() const noexcept { return rows_.size(); }
  int act(int coset, Letter l) const { return rows_[coset][letter_code(l)]; }
  // Coset reached from `coset` by reading w, or kUndefined.
  int trace(int coset, const Word& w) const;
  bool contains(const Word& w) const { return trace(0, w) == 0; }

  const std::vector<std::vector<int>>& rows() const noexcept { return rows_; }
  const std::vector<Word>& subgroup_generators() const noexcept { return subgens_; }

  bool complete() const;
  // Generator columns are permutations and every relator closes at every coset.
  bool valid_for(const Presentation& p) const;

  // Breadth-first renumbering from coset 0.
  CosetTable standardized() const;

  friend bool operator==(const CosetTable& a, const CosetTable& b) {
    return a.rank_ == b.rank_ && a.rows_ == b.rows_;
  }

 private:
  std::size_t rank_ = 0;
  std::vector<std::vector<int>> rows_;  // [coset][letter code]
  std::vector<Word> subgens_;
};

struct CosetOptions {
  std::size_t max_cosets = 100000;
  // On overflow, scan every live coset for deductions before giving up.
  bool lookahead = false;
};

// Complete table for the cosets of <subgens>, or nullopt on overflow.
std::optional<CosetTable> todd_coxeter(const Presentation& p, const std::vector<Word>& subgens,
                                       CosetOptions opts = {});

// Every subgroup of index <= n exactly once, as a standardized table.
Process<CosetTable> low_index(Presentation p, std::size_t n);
std::vector<CosetTable> low_index_all(const Presentation& p, std::size_t n);

//! Schreier transversal and generators of a complete table. Schreier
//! generators are the non-tree edges (coset c, generator x), ordered by x
//! and then c; generator i is u_c x u_{cx}^-1.
struct SchreierData {
  std::vector<Word> transversal;             // per coset
  std::vector<std::vector<int>> generator;   // [coset][gen] -> id or -1 (tree edge)
  std::vector<Word> words;                   // per Schreier generator
};
SchreierData schreier_data(const CosetTable& t);

// w over the raw Schreier generators, or nullopt if w leaves coset 0.
std::optional<Word> rewrite_in_subgroup(const CosetTable& t, const Word& w);

//! Presentation of a finite-index subgroup with its embedding.
struct SubgroupPresentation {
  Presentation presentation;       // simplified
  std::vector<Word> embedding;     // per presentation generator, over the ambient
  CosetTable table;
  Presentation raw;                // before simplification
  std::vector<Word> schreier_words;
  std::vector<Word> schreier_to_pres;  // raw generator -> word over presentation
  std::vector<TietzeMove> moves;       // raw -> presentation

  // Ambient word over the simplified generators, or nullopt.
  std::optional<Word> rewrite(const Word& w) const;
};

SubgroupPresentation rs_presentation(const Presentation& p, const CosetTable& t);

}  // namespace limitforge

#endif  // LIMITFORGE_COSET_HPP_
