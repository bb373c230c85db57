#include "topoguard/symmetries.hpp"

#include <bit>
#include <cmath>
#include <random>

namespace topoguard {

SectorBasis::SectorBasis(Lattice lat, std::vector<int> parities)
    : lattice_(lat), parities_(std::move(parities)) {
  if (static_cast<int>(parities_.size()) != lattice_.n)
    throw SymmetryMismatch("need one Q parity per column");
  for (int q : parities_)
    if (q != 1 && q != -1) throw SymmetryMismatch("parities must be +-1");
  const int free_bits = lattice_.site_count() - lattice_.n;
  dim_ = std::uint64_t{1} << free_bits;
  free_col_mask_.resize(lattice_.n);
  for (int j = 0; j < lattice_.n; ++j) {
    std::uint64_t m = 0;
    for (int i = 1; i < lattice_.n; ++i)
      m |= std::uint64_t{1} << free_bit(i, j);
    free_col_mask_[j] = m;
  }
}

std::uint64_t SectorBasis::unrank(std::uint64_t k) const {
  const int n = lattice_.n;
  std::uint64_t bits = 0;
  for (int j = 0; j < n; ++j) {
    int parity = (parities_[j] < 0) ? 1 : 0;
    for (int i = 1; i < n; ++i) {
      const std::uint64_t b = (k >> free_bit(i, j)) & 1;
      parity ^= static_cast<int>(b);
      bits |= b << lattice_.site_index(i, j);
    }
    bits |= static_cast<std::uint64_t>(parity) << lattice_.site_index(0, j);
  }
  return bits;
}

std::uint64_t SectorBasis::rank(std::uint64_t bits) const {
  const int n = lattice_.n;
  std::uint64_t k = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 1; i < n; ++i)
      k |= ((bits >> lattice_.site_index(i, j)) & 1) << free_bit(i, j);
  return k;
}

bool SectorBasis::contains(std::uint64_t bits) const {
  for (int j = 0; j < lattice_.n; ++j) {
    const int parity = std::popcount(bits & lattice_.column_mask(j)) & 1;
    if (parity != ((parities_[j] < 0) ? 1 : 0)) return false;
  }
  return true;
}

SectorBasis sector_decompose(const Lattice& lat, const std::vector<int>& parities) {
  return SectorBasis(lat, parities);
}

SymmetrySet make_symmetries(const Lattice& lat) {
  SymmetrySet s;
  for (int i = 0; i < lat.n; ++i) {
    std::map<int, PauliLetter> letters;
    for (int j = 0; j < lat.n; ++j) letters[lat.site_index(i, j)] = PauliLetter::Y;
    s.p_ops.push_back(PauliString{Complex{1, 0}, std::move(letters)});
  }
  for (int j = 0; j < lat.n; ++j) {
    std::map<int, PauliLetter> letters;
    for (int i = 0; i < lat.n; ++i) letters[lat.site_index(i, j)] = PauliLetter::X;
    s.q_ops.push_back(PauliString{Complex{1, 0}, std::move(letters)});
  }
  return s;
}

double AlgebraReport::max_residual() const {
  return std::max({max_commutator_pp, max_commutator_qq, max_anticommutator_pq,
                   max_involution, max_h_commutator});
}

namespace {

double diff_norm(const StateVector& a, const StateVector& b, double sign) {
  double s = 0;
  for (std::size_t i = 0; i < a.amplitudes.size(); ++i)
    s += std::norm(a.amplitudes[i] + sign * b.amplitudes[i]);
  return std::sqrt(s);
}

std::vector<StateVector> probe_states(const Lattice& lat, bool exhaustive,
                                      int n_random, std::uint64_t seed) {
  std::vector<StateVector> probes;
  if (exhaustive) {
    for (std::uint64_t z = 0; z < lat.dim(); ++z)
      probes.push_back(StateVector::computational(lat, z));
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int r = 0; r < n_random; ++r) {
      StateVector s = StateVector::zero_full(lat, Basis::Z_BASIS);
      for (auto& a : s.amplitudes) a = Complex{g(rng), g(rng)};
      s.normalize();
      probes.push_back(std::move(s));
    }
  }
  return probes;
}

}  // namespace

AlgebraReport verify_algebra(const Lattice& lat) {
  AlgebraReport rep;
  rep.exhaustive = lat.n <= 3;
  const SymmetrySet sym = make_symmetries(lat);
  const OperatorSum h = build_lri(lat, CouplingParams{1.0, 1.0});
  const auto probes = probe_states(lat, rep.exhaustive, 8, 20240817);

  auto ap = [](const StateVector& s, const PauliString& p) {
    return apply_pauli_string(s, p);
  };

  for (const auto& psi : probes) {
    for (std::size_t a = 0; a < sym.p_ops.size(); ++a) {
      for (std::size_t b = 0; b < sym.p_ops.size(); ++b) {
        rep.max_commutator_pp =
            std::max(rep.max_commutator_pp,
                     diff_norm(ap(ap(psi, sym.p_ops[a]), sym.p_ops[b]),
                               ap(ap(psi, sym.p_ops[b]), sym.p_ops[a]), -1.0));
        rep.max_commutator_qq =
            std::max(rep.max_commutator_qq,
                     diff_norm(ap(ap(psi, sym.q_ops[a]), sym.q_ops[b]),
                               ap(ap(psi, sym.q_ops[b]), sym.q_ops[a]), -1.0));
        rep.max_anticommutator_pq =
            std::max(rep.max_anticommutator_pq,
                     diff_norm(ap(ap(psi, sym.p_ops[a]), sym.q_ops[b]),
                               ap(ap(psi, sym.q_ops[b]), sym.p_ops[a]), +1.0));
      }
      rep.max_involution = std::max(
          rep.max_involution, diff_norm(ap(ap(psi, sym.p_ops[a]), sym.p_ops[a]), psi, -1.0));
      rep.max_involution = std::max(
          rep.max_involution, diff_norm(ap(ap(psi, sym.q_ops[a]), sym.q_ops[a]), psi, -1.0));
    }
    const StateVector hpsi = apply_operator(psi, h);
    for (const auto& ops : {sym.p_ops, sym.q_ops}) {
      for (const auto& p : ops) {
        rep.max_h_commutator = std::max(
            rep.max_h_commutator,
            diff_norm(ap(hpsi, p), apply_operator(ap(psi, p), h), -1.0));
      }
    }
  }
  if (rep.max_residual() > 1e-10)
    throw AlgebraViolation("symmetry algebra residual exceeds 1e-10");
  return rep;
}

SectorOperator::SectorOperator(std::shared_ptr<const SectorBasis> basis,
                               Eigen::VectorXd diag, bool real)
    : basis_(std::move(basis)), diag_(std::move(diag)), real_(real) {
  bits_.resize(basis_->dim());
  for (std::uint64_t k = 0; k < basis_->dim(); ++k)
    bits_[k] = static_cast<std::uint32_t>(basis_->unrank(k));
}

void SectorOperator::add_flip_term(FlipTerm t) {
  if (std::abs(t.factor.imag()) > 0) real_ = false;
  flips_.push_back(t);
}

void SectorOperator::apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
  if (!real_) throw InvalidOperator("sector operator has complex terms; use the complex apply");
  const std::uint64_t dim = basis_->dim();
  out = diag_.cwiseProduct(in);
  for (const auto& f : flips_) {
    const double c = f.factor.real();
    const std::uint64_t m = f.free_mask;
    const std::uint32_t pm = f.phase_mask;
    for (std::uint64_t k = 0; k < dim; ++k) {
      const std::uint64_t i = k ^ m;
      const double sign = (std::popcount(bits_[i] & pm) & 1) ? -1.0 : 1.0;
      out[k] += c * sign * in[i];
    }
  }
}

void SectorOperator::apply(const Eigen::VectorXcd& in, Eigen::VectorXcd& out) const {
  const std::uint64_t dim = basis_->dim();
  out = diag_.cast<Complex>().cwiseProduct(in);
  for (const auto& f : flips_) {
    const std::uint64_t m = f.free_mask;
    const std::uint32_t pm = f.phase_mask;
    for (std::uint64_t k = 0; k < dim; ++k) {
      const std::uint64_t i = k ^ m;
      const double sign = (std::popcount(bits_[i] & pm) & 1) ? -1.0 : 1.0;
      out[k] += f.factor * sign * in[i];
    }
  }
}

Eigen::MatrixXd SectorOperator::dense() const {
  if (dim() > 4096) throw DimensionExceeded("dense sector matrix limited to dim <= 4096");
  if (!real_) throw InvalidOperator("dense() requires a real sector operator");
  const std::uint64_t d = dim();
  Eigen::MatrixXd m = diag_.asDiagonal();
  for (const auto& f : flips_) {
    for (std::uint64_t i = 0; i < d; ++i) {
      const double sign = (std::popcount(bits_[i] & f.phase_mask) & 1) ? -1.0 : 1.0;
      m(i ^ f.free_mask, i) += f.factor.real() * sign;
    }
  }
  return m;
}

SectorOperator project_operator(const OperatorSum& op,
                                std::shared_ptr<const SectorBasis> sector) {
  const Lattice& lat = op.lattice;
  if (!(lat == sector->lattice()))
    throw SymmetryMismatch("operator and sector lattices differ");
  const int n = lat.n;
  const std::uint64_t dim = sector->dim();

  // X-basis representation per term: X -> (-1)^b phase, Z -> flip,
  // Y -> -i (-1)^b flip (consequence of Y|0> = i|1> and |+-x> = (|0>+-|1>)/sqrt2).
  static const Complex kNegIPow[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};

  struct XTerm {
    std::uint64_t flip = 0;
    std::uint64_t phase = 0;
    Complex factor;
  };
  std::vector<XTerm> xterms;
  for (const auto& t : op.terms) {
    t.validate(lat);
    XTerm xt;
    int n_y = 0;
    for (const auto& [site, letter] : t.letters) {
      const std::uint64_t bit = std::uint64_t{1} << site;
      switch (letter) {
        case PauliLetter::X: xt.phase |= bit; break;
        case PauliLetter::Z: xt.flip |= bit; break;
        case PauliLetter::Y: xt.flip |= bit; xt.phase |= bit; ++n_y; break;
      }
    }
    for (int j = 0; j < n; ++j)
      if (std::popcount(xt.flip & lat.column_mask(j)) & 1)
        throw SymmetryMismatch("term does not commute with Q on column " + std::to_string(j));
    xt.factor = t.coefficient * kNegIPow[n_y % 4];
    xterms.push_back(xt);
  }

  // Diagonal: all pure-phase terms folded into one vector.
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(dim);
  std::vector<double> diag_imag_acc(1, 0.0);
  Eigen::VectorXd diag_im = Eigen::VectorXd::Zero(dim);
  for (const auto& xt : xterms) {
    if (xt.flip != 0) continue;
    for (std::uint64_t k = 0; k < dim; ++k) {
      const std::uint64_t b = sector->unrank(k);
      const double sign = (std::popcount(b & xt.phase) & 1) ? -1.0 : 1.0;
      diag[k] += sign * xt.factor.real();
      diag_im[k] += sign * xt.factor.imag();
    }
  }
  if (diag_im.cwiseAbs().maxCoeff() > 1e-12)
    throw InvalidOperator("projected operator has a non-real diagonal");

  SectorOperator sop(sector, std::move(diag), true);
  for (const auto& xt : xterms) {
    if (xt.flip == 0) continue;
    std::uint64_t free_mask = 0;
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if ((xt.flip >> lat.site_index(i, j)) & 1)
          free_mask |= std::uint64_t{1} << sector->free_bit(i, j);
    sop.add_flip_term({free_mask, static_cast<std::uint32_t>(xt.phase), xt.factor});
  }
  return sop;
}

}  // namespace topoguard
