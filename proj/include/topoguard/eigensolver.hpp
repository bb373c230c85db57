#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "topoguard/hamiltonians.hpp"
#include "topoguard/symmetries.hpp"

namespace topoguard {

struct SpectrumResult {
  std::vector<double> eigenvalues;  // sorted ascending
  int ground_degeneracy = 0;        // count within tolerance of E0
  double gap = 0.0;                 // E_{above doublet} - E0
  std::vector<double> residuals;    // ||Hv - lambda v|| per reported pair
  // Parity labels per eigenvalue, one vector of +-1 per entry (sector runs).
  std::vector<std::vector<int>> sector_labels;
  double degeneracy_tol = 1e-8;
};

struct LanczosOptions {
  int k = 2;
  double tol = 1e-9;
  int max_iter = 3000;
  std::uint64_t seed = 1234;
  // Clustered spectra (e.g. the short-range model at N=5) need a wide
  // restart space; smaller problems converge before the basis fills anyway.
  int max_basis = 200;   // thick-restart basis cap
  int keep = 64;         // Ritz vectors kept at restart
};

/// Full spectrum by dense Hermitian diagonalization (dim <= 4096).
SpectrumResult dense_spectrum(const OperatorSum& op);
SpectrumResult dense_spectrum(const SectorOperator& op);

/// Lowest-k eigenvalues via thick-restart Lanczos with full
/// reorthogonalization. Deterministic per seed.
SpectrumResult lanczos_extremal(const OperatorSum& op, const LanczosOptions& opts);
SpectrumResult lanczos_extremal(const SectorOperator& op, const LanczosOptions& opts);

/// Lowest-2 eigenvalues of a full-space operator that does not decompose into
/// Q sectors (noise runs). Subspace-refined so near-degenerate pairs are
/// resolved well below the residual tolerance.
std::pair<double, double> lowest_two(const OperatorSum& op, const LanczosOptions& opts);

struct SectorScanOptions {
  int k_per_sector = 3;
  LanczosOptions lanczos;
  std::uint64_t dense_threshold = 4096;
};

/// Merge per-sector spectra of a Q-commuting operator into one SpectrumResult.
/// Exploits the q <-> -q degeneracy, and for column-permutation-invariant
/// operators collapses all sectors of equal parity weight.
SpectrumResult sector_scan(const OperatorSum& op, const SectorScanOptions& opts = {});

enum class Model { LRI, SRI };

struct DoubletResult {
  std::vector<StateVector> states;  // 2 orthonormal states (may be more/fewer)
  SpectrumResult spectrum;
  int degeneracy = 2;
  bool unexpected_degeneracy = false;
};

/// Ground doublet and gap. Full-space dense for n <= 3, sector-embedded
/// (X-basis sector states) for n >= 4.
DoubletResult ground_doublet(const Lattice& lat, const CouplingParams& params,
                             Model model);

}  // namespace topoguard
