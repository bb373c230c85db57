#include <doctest.h>

#include <cmath>

#include "topoguard/noise_analysis.hpp"

using namespace topoguard;

TEST_CASE("splitting runs are deterministic per seed") {
  const Lattice lat{2};
  const SplittingStats a = doublet_splitting(lat, {1.0, 1.0}, 0.1, 4, 2024);
  const SplittingStats b = doublet_splitting(lat, {1.0, 1.0}, 0.1, 4, 2024);
  REQUIRE(a.samples.size() == 4);
  for (int t = 0; t < 4; ++t) {
    CHECK(a.samples[t].delta_e == b.samples[t].delta_e);
    CHECK(a.samples[t].seed == b.samples[t].seed);
    CHECK(a.samples[t].delta_e >= 0.0);
  }
  const SplittingStats c = doublet_splitting(lat, {1.0, 1.0}, 0.1, 4, 2025);
  CHECK(a.median != c.median);
}

TEST_CASE("zero-noise control leaves the doublet degenerate") {
  const SplittingStats s = doublet_splitting(Lattice{3}, {1.0, 1.0}, 0.0, 1, 1);
  CHECK(s.max < 1e-10);
}

TEST_CASE("N=2 single-site sigma_z is exactly protected") {
  // one P and one Q survive a single-site sz perturbation and anticommute,
  // so the doublet stays exactly degenerate at every order
  std::vector<double> eps{1e-1, 1e-2, 1e-3};
  std::vector<double> de;
  for (double e : eps)
    de.push_back(single_site_z_splitting(Lattice{2}, {1.0, 1.0}, 0, e));
  for (double d : de) CHECK(d < 1e-10);
  CHECK(std::isinf(splitting_scaling_exponent(eps, de)));
}

TEST_CASE("N=3 single-site sigma_z splitting scales with a high power") {
  std::vector<double> eps{2e-1, 1e-1, 5e-2};
  std::vector<double> de;
  for (double e : eps)
    de.push_back(single_site_z_splitting(Lattice{3}, {1.0, 1.0}, 4, e));
  CHECK(splitting_scaling_exponent(eps, de) >= 2.0);
}

TEST_CASE("decoherence rate follows the stated power law exactly") {
  ProtectionParams p{2.0, 0.5, 400.0, 1e4, 4};
  const double full = decoherence_rate(p);
  p.b_max /= 2;
  CHECK(decoherence_rate(p) * std::pow(2.0, p.n - 1) == full);
  CHECK_THROWS_AS(decoherence_rate(ProtectionParams{1, 1, 0, 1e4, 3}),
                  InvalidOperator);
}

TEST_CASE("lifetime table identities and implied constants") {
  const auto rows = reference_lifetime_configs(1.0, 1.0);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.tau == 1.0 / r.gamma_eff);
  // alpha_N * Gamma_0 implied by the published rates
  CHECK(rows[0].implied_alpha_gamma0 == doctest::Approx(2.52e-2).epsilon(1e-6));
  CHECK(rows[1].implied_alpha_gamma0 == doctest::Approx(2.7648e-2).epsilon(1e-6));
  CHECK(rows[2].implied_alpha_gamma0 == doctest::Approx(1.245184e-2).epsilon(1e-6));
}
