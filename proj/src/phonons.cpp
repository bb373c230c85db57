#include "topoguard/phonons.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace topoguard {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kCoulomb = 8.9875517923e9;  // 1 / (4 pi eps0), SI

// Force balance F_i = u_i - sum_{k<i} (u_i - u_k)^-2 + sum_{k>i} (u_k - u_i)^-2
// and its Jacobian, which doubles as the axial dynamical matrix.
Eigen::MatrixXd chain_jacobian(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const double inv3 = 2.0 / std::pow(std::abs(u[i] - u[k]), 3);
      a(i, i) += inv3;
      a(i, k) -= inv3;
    }
  }
  return a;
}

Eigen::VectorXd chain_force(const Eigen::VectorXd& u) {
  const int n = static_cast<int>(u.size());
  Eigen::VectorXd f = u;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      const double d = u[i] - u[k];
      f[i] -= (d > 0 ? 1.0 : -1.0) / (d * d);
    }
  return f;
}

}  // namespace

std::vector<double> chain_equilibrium(int n_ions, double tol) {
  if (n_ions < 1) throw InvalidLattice("need at least one ion");
  Eigen::VectorXd u(n_ions);
  for (int i = 0; i < n_ions; ++i) u[i] = 1.0 * (i - 0.5 * (n_ions - 1));
  for (int iter = 0; iter < 200; ++iter) {
    const Eigen::VectorXd f = chain_force(u);
    if (f.cwiseAbs().maxCoeff() < tol) break;
    const Eigen::VectorXd step = chain_jacobian(u).ldlt().solve(f);
    double damping = 1.0;
    // keep the ordering strictly increasing
    for (;;) {
      const Eigen::VectorXd trial = u - damping * step;
      bool ordered = true;
      for (int i = 1; i < n_ions; ++i)
        if (trial[i] <= trial[i - 1]) ordered = false;
      if (ordered || n_ions == 1) {
        u = trial;
        break;
      }
      damping *= 0.5;
      if (damping < 1e-8) throw NotConverged("chain equilibrium damping underflow", 0);
    }
  }
  if (chain_force(u).cwiseAbs().maxCoeff() > 1e-9)
    throw NotConverged("chain equilibrium did not converge", 0);
  return {u.data(), u.data() + n_ions};
}

ChainModel chain_modes(int n_ions) {
  ChainModel m;
  m.n_ions = n_ions;
  m.positions = chain_equilibrium(n_ions);
  Eigen::VectorXd u = Eigen::Map<const Eigen::VectorXd>(m.positions.data(), n_ions);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(chain_jacobian(u));
  for (int i = 0; i < n_ions; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam < -1e-9) throw UnstableConfiguration("negative axial mode eigenvalue");
    m.mode_frequencies.push_back(std::sqrt(std::max(lam, 0.0)));
  }
  std::sort(m.mode_frequencies.begin(), m.mode_frequencies.end());
  return m;
}

ChainGapResult chain_gap_fixed_spacing(int n_ions, double a_min_m,
                                       const IonSpecies& ion) {
  if (a_min_m <= 0) throw InvalidOperator("spacing must be positive");
  if (n_ions < 2) throw InvalidLattice("gap needs >= 2 ions");
  const std::vector<double> u = chain_equilibrium(n_ions);
  double d_min = u[1] - u[0];
  for (int i = 2; i < n_ions; ++i) d_min = std::min(d_min, u[i] - u[i - 1]);
  // spacings scale with the Coulomb length l = (k q^2 / (M w^2))^(1/3);
  // pinning the central spacing to a_min fixes w directly.
  const double l = a_min_m / d_min;
  const double omega =
      std::sqrt(kCoulomb * ion.charge * ion.charge / (ion.mass * l * l * l));
  ChainGapResult r;
  r.n_ions = n_ions;
  r.nu = omega / (2 * kPi);
  r.nu1 = std::sqrt(3.0) * r.nu;
  r.gap = r.nu1 - r.nu;
  return r;
}

double chain_gap_scaling_exponent(const std::vector<ChainGapResult>& sweep) {
  if (sweep.size() < 2) throw InvalidOperator("scaling fit needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& r : sweep) {
    const double x = std::log(std::sqrt(static_cast<double>(r.n_ions)));
    const double y = std::log(r.gap);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(sweep.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return -slope;  // gap ~ size^-alpha
}

ArrayModel array_modes(int n, double spacing_m, double trap_frequency_hz,
                       const IonSpecies& ion) {
  if (n < 1) throw InvalidLattice("array size must be >= 1");
  if (spacing_m <= 0 || trap_frequency_hz <= 0)
    throw InvalidOperator("spacing and trap frequency must be positive");
  const int sites = n * n;
  const double wt = 2 * kPi * trap_frequency_hz;
  Eigen::MatrixXd d = wt * wt * Eigen::MatrixXd::Identity(2 * sites, 2 * sites);

  // In-plane Coulomb Hessian per pair: k q^2 (3 rhat rhat^T - I) / r^3,
  // coupling u_a - u_b; microtraps pinned at the exact lattice sites.
  const double kq2 = kCoulomb * ion.charge * ion.charge;
  for (int a = 0; a < sites; ++a) {
    const double ax = (a % n) * spacing_m, ay = (a / n) * spacing_m;
    for (int b = a + 1; b < sites; ++b) {
      const double bx = (b % n) * spacing_m, by = (b / n) * spacing_m;
      const double dx = ax - bx, dy = ay - by;
      const double r = std::hypot(dx, dy);
      const double c = kq2 / (ion.mass * r * r * r);
      Eigen::Matrix2d h;
      h << c * (3 * dx * dx / (r * r) - 1), c * 3 * dx * dy / (r * r),
          c * 3 * dx * dy / (r * r), c * (3 * dy * dy / (r * r) - 1);
      d.block<2, 2>(2 * a, 2 * a) += h;
      d.block<2, 2>(2 * b, 2 * b) += h;
      d.block<2, 2>(2 * a, 2 * b) -= h;
      d.block<2, 2>(2 * b, 2 * a) -= h;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  ArrayModel m;
  m.n = n;
  m.spacing = spacing_m;
  m.trap_frequency = trap_frequency_hz;
  m.com_frequency = trap_frequency_hz;
  for (int i = 0; i < 2 * sites; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam < -1e-6 * wt * wt)
      throw UnstableConfiguration("array mode with imaginary frequency; increase trap stiffness or spacing");
    m.mode_frequencies.push_back(std::sqrt(std::max(lam, 0.0)) / (2 * kPi));
  }
  std::sort(m.mode_frequencies.begin(), m.mode_frequencies.end());

  // COM pair sits exactly at the trap frequency; the gap is the distance from
  // it to the nearest remaining mode.
  double gap = std::numeric_limits<double>::infinity();
  int com_seen = 0;
  for (double f : m.mode_frequencies) {
    if (com_seen < 2 && std::abs(f - trap_frequency_hz) < 1e-6 * trap_frequency_hz) {
      ++com_seen;
      continue;
    }
    gap = std::min(gap, std::abs(f - trap_frequency_hz));
  }
  m.gap = (com_seen && std::isfinite(gap)) ? gap : 0.0;
  return m;
}

}  // namespace topoguard
