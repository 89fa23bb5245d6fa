#pragma once

#include <cstdint>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "torsyz/rational.hpp"

namespace torsyz {

/// Dense matrix rank over F_prime. Entries arrive reduced; the elimination
/// keeps rows unreduced between pivot steps, which is safe for primes below
/// 2^20 and fewer than ~2^22 rows (row values stay under 2^63).
class DenseModMatrix {
 public:
  DenseModMatrix(std::size_t rows, std::size_t cols, std::uint64_t prime)
      : rows_(rows), cols_(cols), p_(prime), a_(rows * cols, 0) {
    if (prime < 2 || prime >= (1ull << 20)) throw std::invalid_argument("prime out of range");
  }

  void set(std::size_t r, std::size_t c, int value) {
    a_[r * cols_ + c] = value >= 0 ? static_cast<std::uint64_t>(value)
                                   : p_ - static_cast<std::uint64_t>(-value) % p_;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  /// Destructive rank computation.
  std::size_t rank() {
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols_ && rank < rows_; ++col) {
      std::size_t piv = rows_;
      for (std::size_t r = rank; r < rows_; ++r) {
        std::uint64_t v = a_[r * cols_ + col] % p_;
        a_[r * cols_ + col] = v;
        if (v != 0 && piv == rows_) piv = r;
      }
      if (piv == rows_) continue;
      if (piv != rank) swap_rows(piv, rank);
      std::uint64_t* prow = &a_[rank * cols_];
      for (std::size_t c = col; c < cols_; ++c) prow[c] %= p_;
      std::uint64_t inv = mod_inv(prow[col]);
      if (inv != 1)
        for (std::size_t c = col; c < cols_; ++c) prow[c] = prow[c] * inv % p_;
      for (std::size_t r = rank + 1; r < rows_; ++r) {
        std::uint64_t f = a_[r * cols_ + col] % p_;
        if (f == 0) {
          a_[r * cols_ + col] = 0;
          continue;
        }
        std::uint64_t mult = p_ - f;
        std::uint64_t* row = &a_[r * cols_];
        for (std::size_t c = col; c < cols_; ++c) row[c] += mult * prow[c];
      }
      ++rank;
    }
    return rank;
  }

 private:
  void swap_rows(std::size_t i, std::size_t j) {
    std::uint64_t* ri = &a_[i * cols_];
    std::uint64_t* rj = &a_[j * cols_];
    for (std::size_t c = 0; c < cols_; ++c) std::swap(ri[c], rj[c]);
  }

  std::uint64_t mod_inv(std::uint64_t x) const {
    // Fermat
    std::uint64_t e = p_ - 2, acc = 1;
    while (e) {
      if (e & 1) acc = acc * x % p_;
      x = x * x % p_;
      e >>= 1;
    }
    return acc;
  }

  std::size_t rows_, cols_;
  std::uint64_t p_;
  std::vector<std::uint64_t> a_;
};

/// Exact rank over Q by fraction-facing Gaussian elimination; intended for
/// oracle-sized blocks.
inline std::size_t rank_exact(std::vector<std::vector<Rat>>& m) {
  if (m.empty()) return 0;
  std::size_t rows = m.size(), cols = m[0].size(), rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t piv = rows;
    for (std::size_t r = rank; r < rows; ++r)
      if (m[r][col] != 0) { piv = r; break; }
    if (piv == rows) continue;
    if (piv != rank) std::swap(m[piv], m[rank]);
    for (std::size_t r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (std::size_t c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

}  // namespace torsyz
