#pragma once

#include <vector>

#include "topoguard/errors.hpp"

namespace topoguard {

struct IonSpecies {
  double mass = 40 * 1.66053906660e-27;  // kg (defaults: generic alkaline earth)
  double charge = 1.602176634e-19;       // C
};

/// Linear chain in a harmonic axial trap; lengths in units of the Coulomb
/// length l = (q^2 / (4 pi eps0 M w^2))^(1/3), frequencies in units of the
/// axial trap frequency.
struct ChainModel {
  int n_ions = 0;
  std::vector<double> positions;         // antisymmetric, increasing
  std::vector<double> mode_frequencies;  // sorted; first two are {1, sqrt(3)}
};

/// Equilibrium positions from force balance via damped Newton.
std::vector<double> chain_equilibrium(int n_ions, double tol = 1e-12);

/// Axial normal modes from the dynamical matrix at equilibrium.
ChainModel chain_modes(int n_ions);

struct ChainGapResult {
  int n_ions = 0;
  double nu = 0.0;    // trap (COM) frequency, Hz
  double nu1 = 0.0;   // breathing mode, Hz
  double gap = 0.0;   // nu1 - nu, Hz
};

/// Trap frequency such that the minimum inter-ion spacing equals a_min,
/// and the resulting COM/breathing gap.
ChainGapResult chain_gap_fixed_spacing(int n_ions, double a_min_m,
                                       const IonSpecies& ion = {});

/// Fit gap ~ size^(-alpha) where size is the array linear dimension
/// N = sqrt(n_ions) (a chain of N^2 ions implements an N x N array).
double chain_gap_scaling_exponent(const std::vector<ChainGapResult>& sweep);

struct ArrayModel {
  int n = 0;             // linear size of the n x n microtrap array
  double spacing = 0.0;  // m
  double trap_frequency = 0.0;            // Hz
  std::vector<double> mode_frequencies;   // 2 n^2 in-plane modes, Hz, sorted
  double com_frequency = 0.0;             // == trap_frequency
  double gap = 0.0;      // |nu - nu1|, distance from COM to nearest other mode
};

/// In-plane modes of an n x n array of isotropic microtraps with Coulomb
/// coupling expanded to quadratic order around the lattice sites.
/// Throws UnstableConfiguration on a negative eigenvalue.
ArrayModel array_modes(int n, double spacing_m, double trap_frequency_hz,
                       const IonSpecies& ion = {});

}  // namespace topoguard
