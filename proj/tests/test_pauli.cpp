#include <doctest.h>

#include <random>

#include "topoguard/hamiltonians.hpp"
#include "topoguard/state.hpp"

using namespace topoguard;

namespace {
PauliString single(int site, PauliLetter l, Complex c = {1, 0}) {
  return PauliString{c, {{site, l}}};
}
}  // namespace

TEST_CASE("kernel encodes Y = iXZ") {
  const PauliKernel k = make_kernel(single(0, PauliLetter::Y));
  CHECK(k.x_mask == 1);
  CHECK(k.z_mask == 1);
  CHECK(k.factor == Complex{0, 1});
}

TEST_CASE("single-site pauli algebra: XY = iZ") {
  const Lattice lat{2};
  for (std::uint64_t z = 0; z < lat.dim(); ++z) {
    const StateVector psi = StateVector::computational(lat, z);
    const StateVector xy =
        apply_pauli_string(apply_pauli_string(psi, single(1, PauliLetter::Y)),
                           single(1, PauliLetter::X));
    const StateVector iz = apply_pauli_string(psi, single(1, PauliLetter::Z, {0, 1}));
    for (std::uint64_t i = 0; i < lat.dim(); ++i)
      CHECK(std::abs(xy.amplitudes[i] - iz.amplitudes[i]) < 1e-14);
  }
}

TEST_CASE("paulis square to identity") {
  const Lattice lat{2};
  std::mt19937_64 rng(7);  // any state
  StateVector psi = StateVector::zero_full(lat, Basis::Z_BASIS);
  std::normal_distribution<double> g;
  for (auto& a : psi.amplitudes) a = Complex{g(rng), g(rng)};
  psi.normalize();
  for (PauliLetter l : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
    const StateVector twice =
        apply_pauli_string(apply_pauli_string(psi, single(2, l)), single(2, l));
    for (std::uint64_t i = 0; i < lat.dim(); ++i)
      CHECK(std::abs(twice.amplitudes[i] - psi.amplitudes[i]) < 1e-14);
  }
}

TEST_CASE("apply_operator is linear and matches dense matrix") {
  const Lattice lat{2};
  const OperatorSum h = build_lri(lat, {1.0, 0.7});
  const Eigen::MatrixXcd m = dense_matrix(h);

  std::mt19937_64 rng(99);
  std::normal_distribution<double> g;
  StateVector a = StateVector::zero_full(lat, Basis::Z_BASIS);
  StateVector b = a;
  for (auto& x : a.amplitudes) x = Complex{g(rng), g(rng)};
  for (auto& x : b.amplitudes) x = Complex{g(rng), g(rng)};

  const Complex alpha{0.3, -1.1};
  StateVector combo = a;
  for (std::uint64_t i = 0; i < lat.dim(); ++i)
    combo.amplitudes[i] = a.amplitudes[i] + alpha * b.amplitudes[i];

  const StateVector ha = apply_operator(a, h);
  const StateVector hb = apply_operator(b, h);
  const StateVector hc = apply_operator(combo, h);
  for (std::uint64_t i = 0; i < lat.dim(); ++i) {
    CHECK(std::abs(hc.amplitudes[i] - ha.amplitudes[i] - alpha * hb.amplitudes[i]) <
          1e-12);
    Complex dense_row{0, 0};
    for (std::uint64_t j = 0; j < lat.dim(); ++j)
      dense_row += m(i, j) * a.amplitudes[j];
    CHECK(std::abs(ha.amplitudes[i] - dense_row) < 1e-12);
  }
}

TEST_CASE("hermitian flag rejects a lone iX term") {
  const Lattice lat{2};
  CHECK_THROWS_AS(OperatorSum(lat, {single(0, PauliLetter::X, {0, 1})}, true),
                  InvalidOperator);
  CHECK_NOTHROW(OperatorSum(lat, {single(0, PauliLetter::X)}, true));
}

TEST_CASE("change_basis round trip and x_polarized") {
  const Lattice lat{2};
  StateVector plus = StateVector::x_polarized(lat, +1);
  CHECK(plus.norm() == doctest::Approx(1.0).epsilon(1e-12));

  const StateVector x_rep = change_basis(plus, Basis::X_BASIS);
  // |+x>^4 is the all-zeros X-basis string (bit 0 <-> sigma_x = +1)
  CHECK(std::abs(x_rep.amplitudes[0] - Complex{1, 0}) < 1e-12);
  for (std::uint64_t i = 1; i < lat.dim(); ++i)
    CHECK(std::abs(x_rep.amplitudes[i]) < 1e-12);

  const StateVector back = change_basis(x_rep, Basis::Z_BASIS);
  for (std::uint64_t i = 0; i < lat.dim(); ++i)
    CHECK(std::abs(back.amplitudes[i] - plus.amplitudes[i]) < 1e-13);
}

TEST_CASE("expectation of H in a product X state") {
  // <+x| H_LRI |+x>: every Y pair has zero expectation, X rows are aligned
  const Lattice lat{2};
  const StateVector plus = StateVector::x_polarized(lat, +1);
  const OperatorSum h = build_lri(lat, {1.0, 1.0});
  // -(jx+jy) n^2 - 2 jx * (rows * pairs) = -8 - 2*2 = -12
  CHECK(expectation(plus, h) == doctest::Approx(-12.0).epsilon(1e-12));
}

TEST_CASE("operators validate sites against the lattice") {
  const Lattice lat{2};
  CHECK_THROWS_AS(apply_pauli_string(StateVector::computational(lat, 0),
                                     single(4, PauliLetter::X)),
                  InvalidOperator);
}
