#include "topoguard/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "topoguard/symmetries.hpp"

namespace topoguard {

namespace {
constexpr double kPi = 3.14159265358979323846;
const Complex kI{0.0, 1.0};
}  // namespace

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with adaptive step size

Eigen::VectorXcd evolve(const Eigen::VectorXcd& psi0, const TimeDependentOp& h,
                        double t0, double t_final, const StepControl& ctrl,
                        const std::function<void(double, const Eigen::VectorXcd&)>&
                            observer) {
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  static const double b5[7] = {35.0 / 384,     0, 500.0 / 1113, 125.0 / 192,
                               -2187.0 / 6784, 11.0 / 84, 0};
  static const double b4[7] = {5179.0 / 57600,  0,           7571.0 / 16695,
                               393.0 / 640,     -92097.0 / 339200,
                               187.0 / 2100,    1.0 / 40};

  const Eigen::Index dim = psi0.size();
  Eigen::VectorXcd y = psi0, hy(dim), ynew(dim), y4(dim);
  std::array<Eigen::VectorXcd, 7> k;
  for (auto& v : k) v.resize(dim);

  auto rhs = [&](double t, const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
    h(t, in, hy);
    out = -kI * hy;
  };

  double t = t0;
  double dt = ctrl.initial_dt;
  if (dt <= 0) {
    rhs(t0, y, k[0]);
    const double f0 = k[0].norm();
    dt = (f0 > 0) ? std::min(0.01 * y.norm() / f0, t_final - t0)
                  : 1e-3 * (t_final - t0);
  }
  if (observer) observer(t, y);

  bool fsal_valid = false;
  while (t < t_final) {
    dt = std::min(dt, t_final - t);
    if (!fsal_valid) rhs(t, y, k[0]);
    for (int s = 1; s < 7; ++s) {
      ynew = y;
      for (int j = 0; j < s; ++j)
        if (a[s][j] != 0) ynew += (dt * a[s][j]) * k[j];
      rhs(t + c[s] * dt, ynew, k[s]);
    }
    // k[6] was evaluated at the 5th-order solution stored in ynew (b5 == a[6])
    y4 = y;
    for (int s = 0; s < 7; ++s)
      if (b4[s] != 0) y4 += (dt * b4[s]) * k[s];

    double err = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double scale =
          ctrl.atol + ctrl.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = std::abs(ynew[i] - y4[i]) / scale;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      t += dt;
      y.swap(ynew);
      k[0].swap(k[6]);  // FSAL
      fsal_valid = true;
      if (observer) observer(t, y);
    } else {
      fsal_valid = false;
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-12), -0.2), 0.2, 5.0);
    dt *= factor;
    if (dt < ctrl.min_dt)
      throw IntegrationFailure("step size underflow at t = " + std::to_string(t));
  }
  return y;
}

// ---------------------------------------------------------------------------
// Molmer-Sorensen

namespace {

struct SpinOps {
  Eigen::MatrixXcd jx, jy, jplus;  // collective, dim 2^n
};

SpinOps collective_spin(int n_ions) {
  const int ds = 1 << n_ions;
  SpinOps ops;
  ops.jx = Eigen::MatrixXcd::Zero(ds, ds);
  ops.jy = Eigen::MatrixXcd::Zero(ds, ds);
  // bit = 0 is |g>, sigma+ = |e><g|
  for (int s = 0; s < ds; ++s) {
    for (int q = 0; q < n_ions; ++q) {
      const int flipped = s ^ (1 << q);
      const bool raising = !((s >> q) & 1);
      ops.jx(flipped, s) += 0.5;
      ops.jy(flipped, s) += raising ? Complex{0, 0.5} : Complex{0, -0.5};
    }
  }
  ops.jplus = ops.jx + kI * ops.jy;
  return ops;
}

enum class Fock { CARRIER, CREATE, ANNIHILATE };

// out += coeff * (S (x) fock_op) in, combined index s * df + f
void apply_term(const Eigen::MatrixXcd& spin, Fock mode, Complex coeff, int df,
                const Eigen::VectorXcd& in, Eigen::VectorXcd& out) {
  const int ds = static_cast<int>(spin.rows());
  for (int sp = 0; sp < ds; ++sp) {
    for (int s = 0; s < ds; ++s) {
      const Complex m = coeff * spin(sp, s);
      if (m == Complex{0, 0}) continue;
      switch (mode) {
        case Fock::CARRIER:
          for (int f = 0; f < df; ++f) out[sp * df + f] += m * in[s * df + f];
          break;
        case Fock::CREATE:
          for (int f = 0; f + 1 < df; ++f)
            out[sp * df + f + 1] += m * std::sqrt(f + 1.0) * in[s * df + f];
          break;
        case Fock::ANNIHILATE:
          for (int f = 1; f < df; ++f)
            out[sp * df + f - 1] += m * std::sqrt(static_cast<double>(f)) * in[s * df + f];
          break;
      }
    }
  }
}

struct MsObservables {
  double fidelity;
  double purity;
  double leakage;
};

MsObservables ms_observe(const Eigen::VectorXcd& psi, const Eigen::VectorXcd& eff_spin,
                         int ds, int df) {
  // column s of m is the Fock vector attached to spin component s
  Eigen::Map<const Eigen::MatrixXcd> m(psi.data(), df, ds);
  const Eigen::MatrixXcd rho_ph = m * m.adjoint();
  const Eigen::MatrixXcd rho_spin = (m.adjoint() * m).conjugate();
  MsObservables obs;
  obs.purity = (rho_ph * rho_ph).trace().real();
  obs.fidelity = (eff_spin.adjoint() * rho_spin * eff_spin).value().real();
  double leak = 0;
  for (int s = 0; s < ds; ++s)
    for (int f = std::max(0, df - 2); f < df; ++f) leak += std::norm(psi[s * df + f]);
  obs.leakage = leak;
  return obs;
}

MsResult ms_run_once(const MsParams& p, int n_max) {
  const int ds = 1 << p.n_ions;
  const int df = n_max + 1;
  const SpinOps spin = collective_spin(p.n_ions);
  const Complex eiphi = std::exp(kI * p.phase);
  const Eigen::MatrixXcd A = eiphi * spin.jplus;
  const Eigen::MatrixXcd Ad = A.adjoint();
  const double g = p.eta * p.omega / std::sqrt(2.0);

  // Two-tone interaction picture Hamiltonian, counter-rotating terms kept:
  //   H = 2 Om cos((nu+delta)t) A
  //     + i g [(e^{-i delta t} + e^{i(2nu+delta)t}) A a+
  //            + (e^{-i(2nu+delta)t} + e^{i delta t}) A a] + h.c.
  TimeDependentOp h = [&](double t, const Eigen::VectorXcd& in,
                          Eigen::VectorXcd& out) {
    out.setZero();
    const double u = 2.0 * p.omega * std::cos((p.nu + p.delta) * t);
    const Complex v1 =
        kI * g * (std::exp(-kI * (p.delta * t)) + std::exp(kI * ((2 * p.nu + p.delta) * t)));
    const Complex v2 =
        kI * g * (std::exp(-kI * ((2 * p.nu + p.delta) * t)) + std::exp(kI * (p.delta * t)));
    apply_term(A, Fock::CARRIER, u, df, in, out);
    apply_term(Ad, Fock::CARRIER, u, df, in, out);
    apply_term(A, Fock::CREATE, v1, df, in, out);
    apply_term(Ad, Fock::ANNIHILATE, std::conj(v1), df, in, out);
    apply_term(A, Fock::ANNIHILATE, v2, df, in, out);
    apply_term(Ad, Fock::CREATE, std::conj(v2), df, in, out);
  };

  MsResult res;
  res.chi = p.eta * p.eta * p.omega * p.omega / p.delta;
  res.tau = 2 * kPi * p.k_return / p.delta;
  res.n_max_used = n_max;

  // effective squeezing axis: J.n = sqrt2 (sin(phi) Jx + cos(phi) Jy)
  const Eigen::MatrixXcd jn =
      std::sqrt(2.0) * (std::sin(p.phase) * spin.jx + std::cos(p.phase) * spin.jy);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jn * jn);

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(ds * df);
  psi[0] = 1.0;  // |g..g> (x) |0>
  Eigen::VectorXcd spin0 = Eigen::VectorXcd::Zero(ds);
  spin0[0] = 1.0;

  StepControl ctrl;
  ctrl.rtol = 1e-9;
  ctrl.atol = 1e-12;
  const int n_points = 160;
  double max_leak = 0;
  double t = 0;
  for (int step = 1; step <= n_points; ++step) {
    const double t_next = res.tau * step / n_points;
    psi = evolve(psi, h, t, t_next, ctrl);
    t = t_next;
    Eigen::VectorXcd eff =
        es.eigenvectors() *
        ((-kI * res.chi * t * es.eigenvalues().array()).exp() *
         (es.eigenvectors().adjoint() * spin0).array())
            .matrix();
    const MsObservables obs = ms_observe(psi, eff, ds, df);
    max_leak = std::max(max_leak, obs.leakage);
    res.trajectory.push_back({t, obs.fidelity, obs.purity, obs.leakage});
    if (step == n_points) {
      res.spin_fidelity = obs.fidelity;
      res.phonon_purity = obs.purity;
    }
  }
  res.fock_leakage = max_leak;
  res.leakage_flag = max_leak >= 1e-4;
  return res;
}

}  // namespace

MsResult ms_simulate(const MsParams& p) {
  if (p.n_ions < 1 || p.n_ions > 4)
    throw DimensionExceeded("ms_simulate supports 1..4 ions");
  if (p.delta <= 0 || p.nu <= 0 || p.omega < 0 || p.n_max < 2)
    throw InvalidOperator("invalid drive parameters");
  int n_max = p.n_max;
  for (;;) {
    MsResult res = ms_run_once(p, n_max);
    if (!res.leakage_flag || !p.auto_cutoff || n_max >= 255) return res;
    n_max = std::min(2 * n_max + 1, 255);
  }
}

// ---------------------------------------------------------------------------
// Adiabatic preparation

namespace {

std::vector<PauliKernel> kernels_of(const OperatorSum& op) {
  std::vector<PauliKernel> ks;
  ks.reserve(op.terms.size());
  for (const auto& t : op.terms) ks.push_back(make_kernel(t));
  return ks;
}

void apply_kernels(const std::vector<PauliKernel>& ks, const Eigen::VectorXcd& in,
                   Eigen::VectorXcd& out) {
  const std::uint64_t dim = in.size();
  for (const auto& k : ks) {
    for (std::uint64_t o = 0; o < dim; ++o) {
      const std::uint64_t i = o ^ k.x_mask;
      const double sign = (std::popcount(i & k.z_mask) & 1) ? -1.0 : 1.0;
      out[o] += k.factor * sign * in[i];
    }
  }
}

double q_expectation(const Eigen::VectorXcd& psi, std::uint64_t col_mask) {
  // Q_j = prod sigma_x over a column: pure bit flip in the Z basis
  Complex v{0, 0};
  for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(psi.size()); ++i)
    v += std::conj(psi[static_cast<Eigen::Index>(i ^ col_mask)]) * psi[i];
  return v.real() / psi.squaredNorm();
}

}  // namespace

PrepareResult adiabatic_prepare(const Lattice& lat, const CouplingParams& params,
                                const RampSchedule& schedule,
                                const StepControl& ctrl) {
  if (lat.n > 3)
    throw DimensionExceeded("adiabatic preparation integrates the full space; n <= 3");
  if (schedule.total_time <= 0) throw InvalidOperator("ramp time must be positive");
  const auto h_lri = kernels_of(build_lri(lat, params));
  const auto h_ext =
      kernels_of(build_external_field(lat, schedule.sign, schedule.strength));
  const double T = schedule.total_time;
  auto ramp = [&](double t) {
    const double s = std::clamp(t / T, 0.0, 1.0);
    return schedule.shape == RampShape::LINEAR ? 1.0 - s
                                               : 0.5 * (1.0 + std::cos(kPi * s));
  };
  Eigen::VectorXcd scratch;
  TimeDependentOp h = [&](double t, const Eigen::VectorXcd& in,
                          Eigen::VectorXcd& out) {
    out.setZero();
    apply_kernels(h_lri, in, out);
    const double lam = ramp(t);
    if (lam != 0.0) {
      scratch.setZero(in.size());
      apply_kernels(h_ext, in, scratch);
      out += lam * scratch;
    }
  };

  const StateVector psi0 = StateVector::x_polarized(lat, schedule.sign);
  Eigen::VectorXcd psi =
      Eigen::Map<const Eigen::VectorXcd>(psi0.amplitudes.data(), lat.dim());

  PrepareResult res;
  for (int j = 0; j < lat.n; ++j)
    res.q_initial.push_back(q_expectation(psi, lat.column_mask(j)));

  // The ramp accumulates global error over many periods of the strong initial
  // field; cap the per-step tolerance so the norm stays within 1e-8 overall.
  StepControl tight = ctrl;
  tight.rtol = std::min(ctrl.rtol, 1e-11);
  tight.atol = std::min(ctrl.atol, 1e-13);

  const int checkpoints = 50;
  double t = 0;
  for (int step = 1; step <= checkpoints; ++step) {
    const double t_next = T * step / checkpoints;
    psi = evolve(psi, h, t, t_next, tight);
    t = t_next;
    for (int j = 0; j < lat.n; ++j)
      res.q_drift = std::max(
          res.q_drift,
          std::abs(q_expectation(psi, lat.column_mask(j)) - res.q_initial[j]));
  }
  res.norm_drift = std::abs(psi.norm() - 1.0);
  for (int j = 0; j < lat.n; ++j)
    res.q_final.push_back(q_expectation(psi, lat.column_mask(j)));

  res.final_state = StateVector::zero_full(lat, Basis::Z_BASIS);
  for (std::uint64_t i = 0; i < lat.dim(); ++i)
    res.final_state.amplitudes[i] = psi[static_cast<Eigen::Index>(i)];

  const DoubletResult doublet = ground_doublet(lat, params, Model::LRI);
  double overlap = 0;
  for (const auto& g : doublet.states) {
    StateVector gz = g.basis == Basis::Z_BASIS ? g : change_basis(g, Basis::Z_BASIS);
    overlap += std::norm(gz.dot(res.final_state));
  }
  res.doublet_overlap = overlap;
  return res;
}

// ---------------------------------------------------------------------------
// Projective measurement

std::vector<std::uint64_t> measure_sample(const StateVector& state,
                                          MeasureBasis basis, int shots,
                                          std::uint64_t seed) {
  if (shots < 1) throw InvalidOperator("shots must be >= 1");
  StateVector full = state.is_full() ? state : embed_full(state);
  StateVector work = full;
  if (basis == MeasureBasis::X) {
    if (work.basis != Basis::X_BASIS) work = change_basis(work, Basis::X_BASIS);
  } else {
    if (work.basis != Basis::Z_BASIS) work = change_basis(work, Basis::Z_BASIS);
  }
  if (basis == MeasureBasis::Y) {
    // per-site rotation to the sigma_y eigenbasis; bit 0 <-> eigenvalue +1
    auto& a = work.amplitudes;
    const std::uint64_t dim = work.lattice.dim();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::uint64_t h = 1; h < dim; h <<= 1) {
      for (std::uint64_t i = 0; i < dim; i += h << 1) {
        for (std::uint64_t j = i; j < i + h; ++j) {
          const Complex u = a[j], v = a[j + h];
          a[j] = (u - kI * v) * inv_sqrt2;
          a[j + h] = (u + kI * v) * inv_sqrt2;
        }
      }
    }
  }

  std::vector<double> cdf(work.amplitudes.size());
  double acc = 0;
  for (std::size_t i = 0; i < work.amplitudes.size(); ++i) {
    acc += std::norm(work.amplitudes[i]);
    cdf[i] = acc;
  }
  if (std::abs(acc - 1.0) > 1e-8)
    throw InvalidOperator("state must be normalized before measurement");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, acc);
  std::vector<std::uint64_t> out;
  out.reserve(shots);
  for (int s = 0; s < shots; ++s) {
    const double r = dist(rng);
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), r);
    out.push_back(static_cast<std::uint64_t>(it - cdf.begin()));
  }
  return out;
}

}  // namespace topoguard
