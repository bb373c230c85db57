#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "topoguard/hamiltonians.hpp"
#include "topoguard/sector.hpp"
#include "topoguard/state.hpp"

namespace topoguard {

/// Non-local symmetry operators P_i = prod_j sy_ij (rows) and
/// Q_j = prod_i sx_ij (columns).
struct SymmetrySet {
  std::vector<PauliString> p_ops;
  std::vector<PauliString> q_ops;
};

SymmetrySet make_symmetries(const Lattice& lat);

struct AlgebraReport {
  double max_commutator_pp = 0.0;
  double max_commutator_qq = 0.0;
  double max_anticommutator_pq = 0.0;
  double max_involution = 0.0;      // ||P^2 - I||, ||Q^2 - I||
  double max_h_commutator = 0.0;    // [H_LRI, P], [H_LRI, Q]
  bool exhaustive = false;          // complete basis vs random vectors
  double max_residual() const;
};

/// Verify the P/Q algebra and [H_LRI, P_i] = [H_LRI, Q_j] = 0 by operator
/// application to a complete basis (n <= 3) or random vectors.
/// Throws AlgebraViolation if any residual exceeds 1e-10.
AlgebraReport verify_algebra(const Lattice& lat);

/// Matrix-free operator restricted to one Q-parity sector, in the X basis.
/// X letters are diagonal (sigma_x eigenvalue +1 for bit 0); Y and Z letters
/// flip bits, with Y contributing -i(-1)^b and Z contributing +1.
class SectorOperator {
 public:
  SectorOperator(std::shared_ptr<const SectorBasis> basis,
                 Eigen::VectorXd diag, bool real);

  std::uint64_t dim() const { return basis_->dim(); }
  const SectorBasis& basis() const { return *basis_; }
  std::shared_ptr<const SectorBasis> basis_ptr() const { return basis_; }
  bool is_real() const { return real_; }

  void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const;
  void apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const;
  Eigen::MatrixXd dense() const;  // dim <= 4096

  struct FlipTerm {
    std::uint64_t free_mask;   // sector-index XOR mask
    std::uint32_t phase_mask;  // full-space mask for (-1)^popcount(bits & m)
    Complex factor;
  };
  void add_flip_term(FlipTerm t);

 private:
  std::shared_ptr<const SectorBasis> basis_;
  Eigen::VectorXd diag_;
  std::vector<FlipTerm> flips_;
  std::vector<std::uint32_t> bits_;  // sector index -> full X-basis bitstring
  bool real_;
};

/// Restrict op to the sector. Every term must flip an even number of bits in
/// each column (i.e. commute with all Q_j); otherwise SymmetryMismatch.
SectorOperator project_operator(const OperatorSum& op,
                                std::shared_ptr<const SectorBasis> sector);

}  // namespace topoguard
