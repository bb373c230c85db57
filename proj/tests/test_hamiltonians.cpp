#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "topoguard/eigensolver.hpp"

using namespace topoguard;

TEST_CASE("LRI term count and constant") {
  const Lattice lat{3};
  const OperatorSum h = build_lri(lat, {1.0, 1.0});
  // identity + n * C(n,2) XX pairs + n * C(n,2) YY pairs
  CHECK(h.terms.size() == 1 + 9 + 9);
  CHECK(h.terms.front().letters.empty());
  CHECK(h.terms.front().coefficient.real() == doctest::Approx(-18.0));
  CHECK(h.column_permutation_invariant);
}

TEST_CASE("N=2 SRI with normalization 2 equals LRI up to the constant") {
  // each 2-site row satisfies (s1 + s2)^2 = 2I + 2 s1 s2
  const Lattice lat{2};
  const Eigen::MatrixXcd lri = dense_matrix(build_lri(lat, {1.0, 1.0}));
  const Eigen::MatrixXcd sri =
      dense_matrix(build_sri(lat, {1.0, 1.0}, Boundary::OPEN, 2.0));
  const Eigen::MatrixXcd shift =
      -8.0 * Eigen::MatrixXcd::Identity(lat.dim(), lat.dim());
  CHECK((lri - sri - shift).norm() < 1e-12);
}

TEST_CASE("periodic SRI has n bonds per line") {
  const Lattice lat{3};
  const OperatorSum open = build_sri(lat, {1.0, 1.0}, Boundary::OPEN);
  const OperatorSum per = build_sri(lat, {1.0, 1.0}, Boundary::PERIODIC);
  CHECK(open.terms.size() == 2u * 3 * 2);
  CHECK(per.terms.size() == 2u * 3 * 3);
}

TEST_CASE("external field ground state is the x-polarized product") {
  const Lattice lat{2};
  const OperatorSum h = build_external_field(lat, +1, 1.0);
  const StateVector plus = StateVector::x_polarized(lat, +1);
  CHECK(expectation(plus, h) == doctest::Approx(-4.0).epsilon(1e-12));
  const StateVector hpsi = apply_operator(plus, h);
  for (std::uint64_t i = 0; i < lat.dim(); ++i)
    CHECK(std::abs(hpsi.amplitudes[i] + 4.0 * plus.amplitudes[i]) < 1e-12);
}

TEST_CASE("noise sampling is deterministic and bounded") {
  const Lattice lat{3};
  const NoiseField a = sample_noise(lat, 0.1, 42);
  const NoiseField b = sample_noise(lat, 0.1, 42);
  const NoiseField c = sample_noise(lat, 0.1, 43);
  bool differs = false;
  for (int s = 0; s < lat.site_count(); ++s)
    for (int ax = 0; ax < 3; ++ax) {
      CHECK(a.at(s, ax) == b.at(s, ax));
      CHECK(std::abs(a.at(s, ax)) <= 0.1);
      if (a.at(s, ax) != c.at(s, ax)) differs = true;
    }
  CHECK(differs);
}

TEST_CASE("parameter validation") {
  const Lattice lat{2};
  CHECK_THROWS_AS(build_lri(lat, {0.0, 0.0}), InvalidOperator);
  CHECK_THROWS_AS(build_external_field(lat, 2, 1.0), InvalidOperator);
  CHECK_THROWS_AS(sample_noise(lat, 0.0, 1), InvalidOperator);
  CHECK_THROWS_AS(Lattice{0}, InvalidLattice);
}
