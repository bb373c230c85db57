#pragma once

#include <Eigen/Dense>
#include <memory>
#include <optional>
#include <vector>

#include "topoguard/pauli.hpp"
#include "topoguard/sector.hpp"

namespace topoguard {

enum class Basis { Z_BASIS, X_BASIS };

/// Complex amplitude vector over the full 2^(n^2) space or a parity sector.
struct StateVector {
  std::vector<Complex> amplitudes;
  Basis basis = Basis::Z_BASIS;
  Lattice lattice{1};
  std::shared_ptr<const SectorBasis> sector;  // null for FULL space

  static StateVector zero_full(const Lattice& lat, Basis b = Basis::Z_BASIS);
  /// Z-basis computational state |bits> (bit b=0 <-> sigma_z eigenvalue +1).
  static StateVector computational(const Lattice& lat, std::uint64_t bits);
  /// Product state of single-site X eigenstates, sign=+1 -> |+x>^(n^2).
  static StateVector x_polarized(const Lattice& lat, int sign);

  std::uint64_t dim() const {
    return sector ? sector->dim() : lattice.dim();
  }
  bool is_full() const { return sector == nullptr; }

  double norm() const;
  void normalize();
  Complex dot(const StateVector& other) const;  // <this|other>
};

/// p|psi>; Z-basis full-space kernel. Input unmodified.
StateVector apply_pauli_string(const StateVector& state, const PauliString& p);

/// (sum_k c_k P_k)|psi> on the full Z-basis space.
StateVector apply_operator(const StateVector& state, const OperatorSum& op);

/// <psi|op|psi> for hermitian op; imaginary part available as diagnostic.
double expectation(const StateVector& state, const OperatorSum& op,
                   double* imag_diag = nullptr);

/// Dense matrix of op on the full space (dim <= 4096).
Eigen::MatrixXcd dense_matrix(const OperatorSum& op);

/// Map a full-space state between Z and X basis conventions
/// (per-site Hadamard; |+x> = (|0>+|1>)/sqrt(2)).
StateVector change_basis(const StateVector& state, Basis target);

/// Embed a sector X-basis state into the full space (X basis amplitudes).
StateVector embed_full(const StateVector& sector_state);

}  // namespace topoguard
