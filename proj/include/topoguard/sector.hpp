#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "topoguard/pauli.hpp"

namespace topoguard {

/// Block of the X-basis Hilbert space with fixed column parities q_j.
///
/// An X-basis bitstring b (bit 0 <-> sigma_x eigenvalue +1) belongs to the
/// sector iff for every column j the product of x-eigenvalues equals q_j,
/// i.e. popcount(b & column_mask(j)) is even for q_j = +1 and odd for -1.
///
/// Rank/unrank is O(1): the bits of rows 1..n-1 are free, the row-0 bit of
/// each column is fixed by the parity constraint.
class SectorBasis {
 public:
  SectorBasis(Lattice lat, std::vector<int> parities);

  const Lattice& lattice() const { return lattice_; }
  const std::vector<int>& parities() const { return parities_; }
  std::uint64_t dim() const { return dim_; }

  /// Sector index -> full-space X-basis bitstring.
  std::uint64_t unrank(std::uint64_t k) const;
  /// Full-space X-basis bitstring -> sector index (precondition: admissible).
  std::uint64_t rank(std::uint64_t bits) const;
  bool contains(std::uint64_t bits) const;

  /// Free-bit position of site (i, j), i >= 1.
  int free_bit(int i, int j) const { return (i - 1) * lattice_.n + j; }

 private:
  Lattice lattice_;
  std::vector<int> parities_;  // +1 / -1 per column
  std::uint64_t dim_;
  std::vector<std::uint64_t> free_col_mask_;  // per column, mask of free bits
};

SectorBasis sector_decompose(const Lattice& lat, const std::vector<int>& parities);

}  // namespace topoguard
