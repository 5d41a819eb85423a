#include <cstdlib>
#include <numeric>

#include "limitforge/presentation.hpp"

namespace limitforge {

std::vector<long long> smith_diagonal(std::vector<std::vector<long long>> m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  std::vector<long long> diag;
  std::size_t t = 0;
  while (t < rows && t < cols) {
    // Pivot: smallest nonzero absolute value in the remaining block.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i) {
      for (std::size_t j = t; j < cols; ++j) {
        if (m[i][j] && (pr == rows || std::llabs(m[i][j]) < std::llabs(m[pr][pc]))) {
          pr = i;
          pc = j;
        }
      }
    }
    if (pr == rows) break;
    std::swap(m[t], m[pr]);
    for (auto& row : m) std::swap(row[t], row[pc]);

    bool clean = false;
    while (!clean) {
      clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        long long q = m[i][t] / m[t][t];
        if (q) {
          for (std::size_t j = t; j < cols; ++j) m[i][j] -= q * m[t][j];
        }
        if (m[i][t]) {
          std::swap(m[t], m[i]);
          clean = false;
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        long long q = m[t][j] / m[t][t];
        if (q) {
          for (std::size_t i = t; i < rows; ++i) m[i][j] -= q * m[i][t];
        }
        if (m[t][j]) {
          for (auto& row : m) std::swap(row[t], row[j]);
          clean = false;
        }
      }
      if (clean) {
        // The pivot must divide the rest of the block.
        for (std::size_t i = t + 1; i < rows && clean; ++i) {
          for (std::size_t j = t + 1; j < cols && clean; ++j) {
            if (m[i][j] % m[t][t]) {
              for (std::size_t k = t; k < cols; ++k) m[t][k] += m[i][k];
              clean = false;
            }
          }
        }
      }
    }
    diag.push_back(std::llabs(m[t][t]));
    ++t;
  }
  return diag;
}

AbelianInvariants abelianization(const Presentation& p) {
  std::vector<std::vector<long long>> m;
  for (const auto& r : p.relators()) {
    std::vector<long long> row(p.rank(), 0);
    for (Letter l : r) row[generator_of(l)] += sign_of(l);
    m.push_back(std::move(row));
  }
  auto diag = smith_diagonal(std::move(m));
  AbelianInvariants inv;
  inv.free_rank = p.rank() - diag.size();
  for (long long d : diag) {
    if (d > 1) inv.torsion.push_back(d);
  }
  return inv;
}

}  // namespace limitforge
