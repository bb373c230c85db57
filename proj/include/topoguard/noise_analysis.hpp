#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topoguard/eigensolver.hpp"

namespace topoguard {

struct SplittingSample {
  int trial = 0;
  std::uint64_t seed = 0;
  double e0 = 0.0;
  double e1 = 0.0;
  double delta_e = 0.0;
};

struct SplittingStats {
  std::vector<SplittingSample> samples;
  double median = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double b_max = 0.0;
  int trials = 0;
  std::uint64_t seed = 0;
};

/// Monte Carlo doublet splitting: per trial, sample a noise field, diagonalize
/// H_LRI + noise exactly (dense for n <= 3, Lanczos on the full 2^16 space for
/// n = 4) and record deltaE = E1 - E0. Deterministic per seed.
SplittingStats doublet_splitting(const Lattice& lat, const CouplingParams& params,
                                 double b_max, int trials, std::uint64_t seed);

/// deltaE under a single-site sigma_z perturbation of strength eps.
double single_site_z_splitting(const Lattice& lat, const CouplingParams& params,
                               int site, double eps);

/// Log-log scaling exponent of deltaE(eps); infinity when every splitting is
/// below floor (exact protection).
double splitting_scaling_exponent(const std::vector<double>& eps,
                                  const std::vector<double>& delta_e,
                                  double floor = 1e-12);

struct ProtectionParams {
  double gamma0 = 1.0;   // single-ion decoherence rate, Hz
  double alpha_n = 1.0;  // O(1) numerical constant
  double b_max = 0.0;    // dominant noise amplitude, Hz
  double delta_gap = 0.0;  // spectral gap, Hz
  int n = 0;             // protection order (array linear size)
};

/// Gamma_p = alpha_N * Gamma_0 * (b_max / Delta)^(N-1).
double decoherence_rate(const ProtectionParams& p);

struct LifetimeRow {
  std::string label;
  ProtectionParams params;
  double gamma_eff = 0.0;
  double tau = 0.0;
  // alpha_N * Gamma_0 value a reference rate would imply, when provided.
  double implied_alpha_gamma0 = 0.0;
};

std::vector<LifetimeRow> lifetime_table(const std::vector<LifetimeRow>& configs);

/// The three array configurations with Delta = gap * J (J and gaps as used in
/// the feasibility estimates), b_max = 500 Hz, configurable alpha_N * Gamma_0.
std::vector<LifetimeRow> reference_lifetime_configs(double alpha_n, double gamma0);

}  // namespace topoguard
