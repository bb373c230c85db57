#include "topoguard/pauli.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

#include "topoguard/sector.hpp"
#include "topoguard/state.hpp"

namespace topoguard {

namespace {
const Complex kImagPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
}

PauliKernel make_kernel(const PauliString& p) {
  PauliKernel k;
  int n_y = 0;
  for (const auto& [site, letter] : p.letters) {
    const std::uint64_t bit = std::uint64_t{1} << site;
    switch (letter) {
      case PauliLetter::X:
        k.x_mask |= bit;
        break;
      case PauliLetter::Z:
        k.z_mask |= bit;
        break;
      case PauliLetter::Y:
        k.x_mask |= bit;
        k.z_mask |= bit;
        ++n_y;
        break;
    }
  }
  k.factor = p.coefficient * kImagPowers[n_y % 4];
  return k;
}

void OperatorSum::check_hermitian() const {
  // A term c * P is Hermitian iff c * i^{n_y} is real up to the Z-first
  // ordering; in kernel form P = factor * X(x) Z(z) with X(x)Z(z) Hermitian
  // up to the sign (-1)^{popcount(x & z)} ... simplest check: pair each
  // kernel with its adjoint among the terms.
  std::vector<PauliKernel> kernels;
  kernels.reserve(terms.size());
  for (const auto& t : terms) kernels.push_back(make_kernel(t));
  std::vector<bool> used(kernels.size(), false);
  for (std::size_t a = 0; a < kernels.size(); ++a) {
    if (used[a]) continue;
    // adjoint of factor * X(x)Z(z) is conj(factor) * Z(z)X(x)
    //   = conj(factor) * (-1)^{popcount(x&z)} X(x)Z(z)
    const auto& ka = kernels[a];
    const int sign = (std::popcount(ka.x_mask & ka.z_mask) & 1) ? -1 : 1;
    const Complex adj = std::conj(ka.factor) * static_cast<double>(sign);
    if (std::abs(adj - ka.factor) < 1e-14 * (1.0 + std::abs(ka.factor))) {
      used[a] = true;
      continue;
    }
    bool paired = false;
    for (std::size_t b = a + 1; b < kernels.size(); ++b) {
      if (used[b]) continue;
      const auto& kb = kernels[b];
      if (kb.x_mask == ka.x_mask && kb.z_mask == ka.z_mask &&
          std::abs(kb.factor - adj) < 1e-14 * (1.0 + std::abs(adj))) {
        used[a] = used[b] = true;
        paired = true;
        break;
      }
    }
    if (!paired)
      throw InvalidOperator("hermitian flag set but term list is not closed under conjugation");
  }
}

OperatorSum& OperatorSum::operator+=(const OperatorSum& other) {
  if (!(lattice == other.lattice))
    throw InvalidOperator("cannot add operators on different lattices");
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  hermitian = hermitian && other.hermitian;
  column_permutation_invariant =
      column_permutation_invariant && other.column_permutation_invariant;
  return *this;
}

OperatorSum OperatorSum::scaled(Complex factor) const {
  OperatorSum out = *this;
  for (auto& t : out.terms) t.coefficient *= factor;
  if (factor.imag() != 0.0) out.hermitian = false;
  return out;
}

StateVector StateVector::zero_full(const Lattice& lat, Basis b) {
  StateVector s;
  s.lattice = lat;
  s.basis = b;
  s.amplitudes.assign(lat.dim(), Complex{0, 0});
  return s;
}

StateVector StateVector::computational(const Lattice& lat, std::uint64_t bits) {
  StateVector s = zero_full(lat, Basis::Z_BASIS);
  s.amplitudes[bits] = Complex{1, 0};
  return s;
}

StateVector StateVector::x_polarized(const Lattice& lat, int sign) {
  // |+-x>^(n^2): amplitude 2^{-n^2/2} * sign^{popcount(z)} in the Z basis.
  StateVector s = zero_full(lat, Basis::Z_BASIS);
  const double amp = std::pow(2.0, -0.5 * lat.site_count());
  for (std::uint64_t z = 0; z < lat.dim(); ++z) {
    const int par = std::popcount(z) & 1;
    s.amplitudes[z] = amp * ((sign < 0 && par) ? -1.0 : 1.0);
  }
  return s;
}

double StateVector::norm() const {
  double s = 0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::normalize() {
  const double n = norm();
  if (n == 0) throw InvalidOperator("cannot normalize zero state");
  for (auto& a : amplitudes) a /= n;
}

Complex StateVector::dot(const StateVector& other) const {
  if (amplitudes.size() != other.amplitudes.size())
    throw BasisMismatch("dot of states with different dimensions");
  Complex s{0, 0};
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    s += std::conj(amplitudes[i]) * other.amplitudes[i];
  return s;
}

StateVector apply_pauli_string(const StateVector& state, const PauliString& p) {
  if (!state.is_full() || state.basis != Basis::Z_BASIS)
    throw BasisMismatch("apply_pauli_string expects a full-space Z-basis state");
  p.validate(state.lattice);
  const PauliKernel k = make_kernel(p);
  StateVector out = StateVector::zero_full(state.lattice, state.basis);
  const std::uint64_t dim = state.lattice.dim();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const double sign = (std::popcount(i & k.z_mask) & 1) ? -1.0 : 1.0;
    out.amplitudes[i ^ k.x_mask] += k.factor * sign * state.amplitudes[i];
  }
  return out;
}

StateVector apply_operator(const StateVector& state, const OperatorSum& op) {
  if (!state.is_full() || state.basis != Basis::Z_BASIS)
    throw BasisMismatch("apply_operator expects a full-space Z-basis state; project Q-commuting operators for sector states");
  if (!(op.lattice == state.lattice))
    throw BasisMismatch("operator and state lattices differ");
  const std::uint64_t dim = state.lattice.dim();
  std::vector<PauliKernel> kernels;
  kernels.reserve(op.terms.size());
  for (const auto& t : op.terms) kernels.push_back(make_kernel(t));
  StateVector out = StateVector::zero_full(state.lattice, state.basis);
  for (std::uint64_t o = 0; o < dim; ++o) {
    Complex acc{0, 0};
    for (const auto& k : kernels) {
      const std::uint64_t i = o ^ k.x_mask;
      const double sign = (std::popcount(i & k.z_mask) & 1) ? -1.0 : 1.0;
      acc += k.factor * sign * state.amplitudes[i];
    }
    out.amplitudes[o] = acc;
  }
  return out;
}

double expectation(const StateVector& state, const OperatorSum& op,
                   double* imag_diag) {
  if (!op.hermitian) throw InvalidOperator("expectation requires a hermitian operator");
  const StateVector hpsi = apply_operator(state, op);
  const Complex v = state.dot(hpsi);
  if (imag_diag) *imag_diag = v.imag();
  return v.real();
}

Eigen::MatrixXcd dense_matrix(const OperatorSum& op) {
  const std::uint64_t dim = op.lattice.dim();
  if (dim > 4096) throw DimensionExceeded("dense_matrix limited to dim <= 4096");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : op.terms) {
    const PauliKernel k = make_kernel(t);
    for (std::uint64_t i = 0; i < dim; ++i) {
      const double sign = (std::popcount(i & k.z_mask) & 1) ? -1.0 : 1.0;
      m(i ^ k.x_mask, i) += k.factor * sign;
    }
  }
  return m;
}

StateVector change_basis(const StateVector& state, Basis target) {
  if (!state.is_full()) throw BasisMismatch("change_basis expects a full-space state");
  if (state.basis == target) return state;
  // Per-site Hadamard: fast Walsh-Hadamard transform, self-inverse.
  StateVector out = state;
  out.basis = target;
  auto& a = out.amplitudes;
  const std::uint64_t dim = state.lattice.dim();
  for (std::uint64_t h = 1; h < dim; h <<= 1) {
    for (std::uint64_t i = 0; i < dim; i += h << 1) {
      for (std::uint64_t j = i; j < i + h; ++j) {
        const Complex u = a[j], v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
  const double scale = std::pow(2.0, -0.5 * state.lattice.site_count());
  for (auto& x : a) x *= scale;
  return out;
}

StateVector embed_full(const StateVector& sector_state) {
  if (sector_state.is_full()) return sector_state;
  const SectorBasis& sb = *sector_state.sector;
  if (sb.lattice().site_count() > 20)
    throw DimensionExceeded("full-space embedding limited to n <= 4");
  StateVector out = StateVector::zero_full(sb.lattice(), Basis::X_BASIS);
  for (std::uint64_t k = 0; k < sb.dim(); ++k)
    out.amplitudes[sb.unrank(k)] = sector_state.amplitudes[k];
  return out;
}

}  // namespace topoguard
