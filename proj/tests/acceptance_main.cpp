// Acceptance gate: one criterion per invocation, a single PASS/FAIL line per
// criterion plus sub-check diagnostics on stdout. Exit 0 iff the criterion
// holds.

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "topoguard/dynamics.hpp"
#include "topoguard/eigensolver.hpp"
#include "topoguard/noise_analysis.hpp"
#include "topoguard/phonons.hpp"
#include "topoguard/runner.hpp"

using namespace topoguard;

namespace {

bool g_ok = true;

void sub(bool ok, const std::string& what) {
  std::printf("  %s  %s\n", ok ? "[ok]  " : "[FAIL]", what.c_str());
  g_ok = g_ok && ok;
}

double table_gap(int n, Model model, double normalization = 2.0) {
  const Lattice lat{n};
  const OperatorSum op = model == Model::LRI
                             ? build_lri(lat, {1.0, 1.0})
                             : build_sri(lat, {1.0, 1.0}, Boundary::OPEN,
                                         normalization);
  SpectrumResult r;
  if (n <= 3) {
    r = dense_spectrum(op);
  } else {
    SectorScanOptions so;
    so.dense_threshold = 1024;  // sector Lanczos for n >= 4
    r = sector_scan(op, so);
  }
  return r.gap / 2.0;  // units of 2 Jx, the convention matching the reference
}

// 1. reference LRI gaps 0.84, 0.96, 0.92, 0.80 within +-0.02
void criterion_1() {
  const double want[] = {0, 0, 0.84, 0.96, 0.92, 0.80};
  for (int n = 2; n <= 5; ++n) {
    const double g = table_gap(n, Model::LRI);
    char buf[128];
    std::snprintf(buf, sizeof buf, "LRI N=%d gap %.4f vs %.2f (tol 0.02)", n, g,
                  want[n]);
    sub(std::abs(g - want[n]) <= 0.02, buf);
  }
}

// 2. reference SRI gaps under at least one normalization convention, else a
// reported finding plus monotone decrease
void criterion_2() {
  const double want[] = {0, 0, 0.84, 0.58, 0.32, 0.20};
  // H_SRI is linear in the normalization constant, so the norm=1 row is
  // exactly half the norm=2 row; one scan covers both conventions.
  std::vector<double> gaps_norm2;
  for (int n = 2; n <= 5; ++n) {
    const Lattice lat{n};
    const OperatorSum op = build_sri(lat, {1.0, 1.0}, Boundary::OPEN, 2.0);
    SpectrumResult r;
    if (n <= 3) {
      r = dense_spectrum(op);
    } else {
      SectorScanOptions so;
      so.dense_threshold = 1024;
      // gap needed to ~1e-3 only; the clustered N=5 spectrum converges much
      // faster at this residual than at the library default
      so.lanczos.tol = 1e-6;
      r = sector_scan(op, so);
    }
    gaps_norm2.push_back(r.gap / 2.0);
  }
  bool any_convention = false;
  for (double norm : {1.0, 2.0}) {
    const double scale = norm / 2.0;
    bool all = true;
    for (int n = 2; n <= 5; ++n)
      if (std::abs(scale * gaps_norm2[n - 2] - want[n]) > 0.02) all = false;
    std::printf("  convention norm=%.0f: gaps %.4f %.4f %.4f %.4f\n", norm,
                scale * gaps_norm2[0], scale * gaps_norm2[1],
                scale * gaps_norm2[2], scale * gaps_norm2[3]);
    if (all) any_convention = true;
  }
  if (any_convention) {
    sub(true, "a documented convention matches the reference row");
    return;
  }
  std::printf(
      "  finding: neither normalization reproduces the reference SRI row; "
      "closest (norm=2) deviates at N=3,5\n");
  bool monotone = true;
  for (std::size_t i = 1; i < gaps_norm2.size(); ++i)
    if (gaps_norm2[i] >= gaps_norm2[i - 1]) monotone = false;
  sub(monotone, "gap decreases monotonically with N (required for the finding path)");
}

// 3. symmetry algebra, exhaustive for N=2,3
void criterion_3() {
  for (int n : {2, 3}) {
    const AlgebraReport rep = verify_algebra(Lattice{n});
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d exhaustive residual %.2e < 1e-10", n,
                  rep.max_residual());
    sub(rep.exhaustive && rep.max_residual() < 1e-10, buf);
  }
}

// 4. two-fold ground degeneracy, partners in sectors q and -q
void criterion_4() {
  for (int n : {2, 3, 4}) {
    const DoubletResult d = ground_doublet(Lattice{n}, {1.0, 1.0}, Model::LRI);
    char buf[96];
    std::snprintf(buf, sizeof buf, "N=%d ground degeneracy %d (tol 1e-8 J)", n,
                  d.degeneracy);
    sub(d.degeneracy == 2, buf);
  }
  // N=4 doublet partners live in opposite parity sectors
  const DoubletResult d4 = ground_doublet(Lattice{4}, {1.0, 1.0}, Model::LRI);
  bool opposite = d4.states.size() == 2 && d4.states[0].sector && d4.states[1].sector;
  if (opposite) {
    const auto& qa = d4.states[0].sector->parities();
    const auto& qb = d4.states[1].sector->parities();
    for (std::size_t j = 0; j < qa.size(); ++j)
      if (qa[j] != -qb[j]) opposite = false;
  }
  sub(opposite, "N=4 doublet partners carry parity vectors q and -q");
}

// 5. Monte Carlo splitting window, zero-noise control, perturbation exponent
void criterion_5() {
  const SplittingStats s = doublet_splitting(Lattice{4}, {1.0, 1.0}, 0.1, 50, 1);
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "N=4, b=0.1, 50 trials: median dE %.3e in [1e-6, 1e-3]", s.median);
  sub(s.median >= 1e-6 && s.median <= 1e-3, buf);

  const SplittingStats ctl = doublet_splitting(Lattice{3}, {1.0, 1.0}, 0.0, 1, 1);
  std::snprintf(buf, sizeof buf, "zero-noise control dE %.2e < 1e-10", ctl.max);
  sub(ctl.max < 1e-10, buf);

  std::vector<double> eps{2e-1, 1e-1, 5e-2}, de;
  for (double e : eps)
    de.push_back(single_site_z_splitting(Lattice{3}, {1.0, 1.0}, 4, e));
  const double expo = splitting_scaling_exponent(eps, de);
  std::snprintf(buf, sizeof buf, "single-site dE(eps) exponent %.2f >= 2", expo);
  sub(expo >= 2.0, buf);
}

// 6. decoherence-rate engine identities
void criterion_6() {
  ProtectionParams p{1.0, 1.0, 500.0, 8.4e3, 3};
  const double full = decoherence_rate(p);
  p.b_max = 250.0;
  sub(decoherence_rate(p) * std::pow(2.0, p.n - 1) == full,
      "halving b_max divides Gamma by 2^(N-1) exactly");

  bool tau_ok = true;
  const auto rows = reference_lifetime_configs(1.0, 1.0);
  for (const auto& r : rows) {
    tau_ok = tau_ok && (r.tau == 1.0 / r.gamma_eff);
    std::printf("  %s: Delta %.2e Hz, implied alpha_N*Gamma_0 = %.4e Hz\n",
                r.label.c_str(), r.params.delta_gap, r.implied_alpha_gamma0);
  }
  sub(tau_ok, "tau = 1/Gamma holds exactly for all rows");
}

// 7. chain modes and gap scaling
void criterion_7() {
  bool modes_ok = true;
  for (int n = 2; n <= 16; ++n) {
    const ChainModel m = chain_modes(n);
    if (std::abs(m.mode_frequencies[0] - 1.0) > 1e-9 ||
        std::abs(m.mode_frequencies[1] - std::sqrt(3.0)) > 1e-9)
      modes_ok = false;
  }
  sub(modes_ok, "axial modes {1, sqrt3} nu to 1e-9 for n = 2..16");

  std::vector<ChainGapResult> sweep;
  for (int n = 4; n <= 16; ++n) sweep.push_back(chain_gap_fixed_spacing(n, 2e-6));
  const double alpha = chain_gap_scaling_exponent(sweep);
  char buf[96];
  std::snprintf(buf, sizeof buf, "fixed-spacing gap exponent %.2f in [1.5, 2.5]",
                alpha);
  sub(alpha >= 1.5 && alpha <= 2.5, buf);
}

// 8. a spacing with a usable 5x5 in-plane gap at nu = 10 MHz
void criterion_8() {
  const double nu = 1e7;
  bool found = false;
  double found_d = 0, found_ratio = 0;
  for (int p = 0; p < 24 && !found; ++p) {
    const double d = 1.2e-6 * std::pow(4e-6 / 1.2e-6, p / 23.0);
    try {
      const ArrayModel m = array_modes(5, d, nu);
      const double ratio = m.gap / nu;
      if (ratio >= 0.03 && ratio <= 0.3) {
        found = true;
        found_d = d;
        found_ratio = ratio;
      }
    } catch (const UnstableConfiguration&) {
    }
  }
  char buf[112];
  std::snprintf(buf, sizeof buf,
                "spacing %.3e m gives gap/nu %.3f in [0.03, 0.3]", found_d,
                found_ratio);
  sub(found, found ? buf : "no spacing in the sweep yields gap/nu in [0.03, 0.3]");
}

// 9. MS verification: weak-regime fidelity/purity, monotonicity, cutoff
void criterion_9() {
  MsParams p;  // eta Omega / delta = 0.1
  const MsResult weak = ms_simulate(p);
  char buf[112];
  std::snprintf(buf, sizeof buf, "weak regime fidelity %.6f, purity %.6f > 0.99",
                weak.spin_fidelity, weak.phonon_purity);
  sub(weak.spin_fidelity > 0.99 && weak.phonon_purity > 0.99, buf);

  std::vector<double> fid;
  for (double om : {3e3, 1e3, 3e2}) {  // ratios 0.3, 0.1, 0.03
    MsParams q;
    q.omega = om;
    fid.push_back(ms_simulate(q).spin_fidelity);
  }
  std::snprintf(buf, sizeof buf, "fidelity ladder %.4f < %.4f < %.4f", fid[0],
                fid[1], fid[2]);
  sub(fid[0] < fid[1] && fid[1] < fid[2], buf);

  MsParams dbl;
  dbl.n_max = 31;
  dbl.auto_cutoff = false;
  const double delta_fid =
      std::abs(ms_simulate(dbl).spin_fidelity - weak.spin_fidelity);
  std::snprintf(buf, sizeof buf, "doubling n_max shifts fidelity by %.2e < 1e-4",
                delta_fid);
  sub(delta_fid < 1e-4, buf);
}

// 10. adiabatic preparation
void criterion_10() {
  // gap in the same units as the reference table (criterion 1)
  const double delta2 = 0.8284271247461902;
  RampSchedule sched;
  sched.total_time = 50.0 / delta2;
  const PrepareResult r = adiabatic_prepare(Lattice{2}, {1.0, 1.0}, sched);
  char buf[112];
  std::snprintf(buf, sizeof buf, "N=2, T=50/Delta: overlap %.4f > 0.99",
                r.doublet_overlap);
  sub(r.doublet_overlap > 0.99, buf);
  std::snprintf(buf, sizeof buf, "<Q_j> drift %.2e < 1e-6 along the ramp",
                r.q_drift);
  sub(r.q_drift < 1e-6, buf);

  bool labels_ok = true;
  for (int sign : {+1, -1}) {
    RampSchedule s3;
    s3.total_time = 30.0;
    s3.sign = sign;
    const PrepareResult r3 = adiabatic_prepare(Lattice{3}, {1.0, 1.0}, s3);
    for (double q : r3.q_final)
      if (std::abs(q - sign) > 1e-6) labels_ok = false;
  }
  sub(labels_ok, "N=3 prepared states carry Q_j = +1 / -1 per sign");
}

// 11. byte-identical CSV data sections across reruns
void criterion_11() {
  auto data_section = [](const std::string& path) {
    std::ifstream in(path);
    std::stringstream data;
    std::string line;
    while (std::getline(in, line))
      if (line.empty() || line[0] != '#') data << line << "\n";
    return data.str();
  };
  struct Job {
    std::vector<std::string> args;
    const char* what;
  };
  const std::vector<Job> jobs{
      {{"gap-table", "--sizes", "2,3"}, "gap-table"},
      {{"noise-sweep", "--n", "3", "--trials", "6", "--seed", "4"}, "noise-sweep"},
      {{"phonons-chain", "--n-max", "8"}, "phonons-chain"},
      {{"ms-verify"}, "ms-verify"},
  };
  for (const auto& job : jobs) {
    const std::string a = "/tmp/topoguard_acc_a.csv";
    const std::string b = "/tmp/topoguard_acc_b.csv";
    auto args_a = job.args;
    args_a.insert(args_a.end(), {"--output", a});
    auto args_b = job.args;
    args_b.insert(args_b.end(), {"--output", b});
    const bool ok = run_cli(args_a) == 0 && run_cli(args_b) == 0 &&
                    data_section(a) == data_section(b) && !data_section(a).empty();
    sub(ok, std::string(job.what) + " data section identical across reruns");
    std::remove(a.c_str());
    std::remove(b.c_str());
  }
}

const char* kNames[] = {
    "",
    "reference LRI gap row (N=2..5)",
    "reference SRI gap row / monotone finding",
    "symmetry algebra residuals",
    "two-fold ground degeneracy with q / -q partners",
    "noise-splitting window, control, and exponent",
    "decoherence-rate engine identities",
    "chain modes and gap scaling",
    "5x5 array gap window",
    "Molmer-Sorensen verification",
    "adiabatic preparation",
    "CSV determinism",
};

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1..11>\n");
    return 64;
  }
  const int c = std::atoi(argv[1]);
  if (c < 1 || c > 11) {
    std::fprintf(stderr, "criterion out of range\n");
    return 64;
  }
  using Fn = std::function<void()>;
  const Fn fns[] = {nullptr,     criterion_1, criterion_2, criterion_3,
                    criterion_4, criterion_5, criterion_6, criterion_7,
                    criterion_8, criterion_9, criterion_10, criterion_11};
  std::printf("criterion %d: %s\n", c, kNames[c]);
  try {
    fns[c]();
  } catch (const std::exception& e) {
    sub(false, std::string("exception: ") + e.what());
  }
  std::printf("%s: criterion %d — %s\n", g_ok ? "PASS" : "FAIL", c, kNames[c]);
  return g_ok ? 0 : 1;
}
