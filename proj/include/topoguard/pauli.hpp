#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "topoguard/errors.hpp"

namespace topoguard {

using Complex = std::complex<double>;

/// Square lattice of spin-1/2 sites. Site (row i, column j) maps to bit i*n+j.
struct Lattice {
  int n = 0;

  explicit Lattice(int linear_size) : n(linear_size) {
    if (n < 1 || n > 5) throw InvalidLattice("lattice size must be in [1,5]");
  }
  int site_count() const { return n * n; }
  int site_index(int i, int j) const { return i * n + j; }
  std::uint64_t dim() const { return std::uint64_t{1} << site_count(); }
  std::uint64_t row_mask(int i) const {
    std::uint64_t m = 0;
    for (int j = 0; j < n; ++j) m |= std::uint64_t{1} << site_index(i, j);
    return m;
  }
  std::uint64_t column_mask(int j) const {
    std::uint64_t m = 0;
    for (int i = 0; i < n; ++i) m |= std::uint64_t{1} << site_index(i, j);
    return m;
  }
  bool operator==(const Lattice&) const = default;
};

enum class PauliLetter : std::uint8_t { X, Y, Z };

/// coefficient * product of single-site Pauli letters (identity elsewhere).
struct PauliString {
  Complex coefficient{1.0, 0.0};
  std::map<int, PauliLetter> letters;  // site -> letter, sites distinct

  PauliString() = default;
  PauliString(Complex c, std::map<int, PauliLetter> l)
      : coefficient(c), letters(std::move(l)) {}

  bool is_identity() const { return letters.empty(); }
  void validate(const Lattice& lat) const {
    for (const auto& [site, letter] : letters) {
      (void)letter;
      if (site < 0 || site >= lat.site_count())
        throw InvalidOperator("pauli letter site out of lattice range");
    }
  }
};

/// Weighted sum of Pauli strings on one lattice.
struct OperatorSum {
  Lattice lattice{1};
  std::vector<PauliString> terms;
  bool hermitian = false;
  // Set by builders whose output is invariant under any permutation of the
  // lattice columns; lets the sector scan collapse equal-weight parity sectors.
  bool column_permutation_invariant = false;

  OperatorSum(Lattice lat, std::vector<PauliString> t, bool herm)
      : lattice(lat), terms(std::move(t)), hermitian(herm) {
    for (const auto& p : terms) p.validate(lattice);
    if (hermitian) check_hermitian();
  }

  OperatorSum& operator+=(const OperatorSum& other);
  OperatorSum scaled(Complex factor) const;

 private:
  void check_hermitian() const;
};

/// Bit-level kernel form of one Pauli string acting on Z-basis amplitudes:
///   out[i ^ x_mask] += coeff * i^{n_y} * (-1)^{popcount(i & z_mask)} * in[i]
/// (Y = i X Z per the global phase convention Y|0> = i|1>.)
struct PauliKernel {
  std::uint64_t x_mask = 0;
  std::uint64_t z_mask = 0;
  Complex factor{1.0, 0.0};  // coefficient * i^{n_y}
};

PauliKernel make_kernel(const PauliString& p);

}  // namespace topoguard
