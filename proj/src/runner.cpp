#include "topoguard/runner.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "topoguard/dynamics.hpp"
#include "topoguard/eigensolver.hpp"
#include "topoguard/noise_analysis.hpp"
#include "topoguard/phonons.hpp"
#include "topoguard/threading.hpp"

namespace topoguard {

namespace {

using json = nlohmann::ordered_json;
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path);
      if (!file) throw InvalidOperator("cannot open output file: " + path);
      os = &file;
    }
  }
  std::ostream& stream() { return *os; }
};

// The timestamp sits on its own header line so the data section below the
// header is byte-identical across reruns of the same config.
void write_header(std::ostream& os, const std::string& cmd, const ConfigEcho& cfg) {
  os << "# topoguard " << cmd << "\n";
  os << "# generated: " << utc_now() << "\n";
  os << "# config:";
  for (const auto& [k, v] : cfg) os << ' ' << k << '=' << v;
  os << "\n";
}

std::string label_string(const std::vector<int>& parities) {
  std::string s;
  for (int p : parities) s += (p > 0 ? '+' : '-');
  return s;
}

std::vector<int> parse_sizes(const std::string& csv) {
  std::vector<int> sizes;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    sizes.push_back(std::stoi(tok));
  }
  if (sizes.empty()) throw InvalidLattice("empty size list");
  return sizes;
}

SpectrumResult low_spectrum(const OperatorSum& op, int k_per_sector) {
  if (op.lattice.n <= 3) return dense_spectrum(op);
  SectorScanOptions so;
  so.k_per_sector = k_per_sector;
  so.dense_threshold = 1024;  // n >= 4 goes through sector Lanczos
  so.lanczos.tol = 1e-9;
  return sector_scan(op, so);
}

// ---------------------------------------------------------------------------

struct GapTableCmd {
  std::string sizes = "2,3,4,5";
  std::string model = "lri";
  double jx = 1.0, jy = 1.0;
  std::string boundary = "open";
  double normalization = 2.0;
  std::string output = "-";

  int run() const {
    Output out(output);
    ConfigEcho cfg{{"model", model},       {"sizes", sizes},
                   {"jx", fmt(jx)},        {"jy", fmt(jy)},
                   {"boundary", boundary}, {"normalization", fmt(normalization)}};
    write_header(out.stream(), "gap-table", cfg);
    out.stream() << "# convention: gap_units = (E_above_doublet - E0) / (2 jx)\n";
    out.stream() << "n,model,e0,gap_raw,gap_units,ground_degeneracy\n";
    for (int n : parse_sizes(sizes)) {
      const Lattice lat{n};
      OperatorSum op = (model == "sri")
                           ? build_sri(lat, {jx, jy},
                                       boundary == "periodic" ? Boundary::PERIODIC
                                                              : Boundary::OPEN,
                                       normalization)
                           : build_lri(lat, {jx, jy});
      const SpectrumResult r = low_spectrum(op, 3);
      out.stream() << n << ',' << model << ',' << fmt(r.eigenvalues.front()) << ','
                   << fmt(r.gap) << ',' << fmt(r.gap / (2.0 * jx)) << ','
                   << r.ground_degeneracy << "\n";
    }
    return 0;
  }
};

struct SpectrumCmd {
  int n = 3;
  std::string model = "lri";
  double jx = 1.0, jy = 1.0;
  int k = 4;
  std::string method = "auto";
  std::string output = "-";

  int run() const {
    const Lattice lat{n};
    OperatorSum op = (model == "sri") ? build_sri(lat, {jx, jy})
                                      : build_lri(lat, {jx, jy});
    SpectrumResult r;
    if (method == "dense" || (method == "auto" && n <= 3)) {
      r = dense_spectrum(op);
    } else {
      SectorScanOptions so;
      so.k_per_sector = k;
      so.dense_threshold = 1024;
      r = sector_scan(op, so);
    }
    Output out(output);
    ConfigEcho cfg{{"n", std::to_string(n)}, {"model", model},
                   {"jx", fmt(jx)},          {"jy", fmt(jy)},
                   {"k", std::to_string(k)}, {"method", method}};
    write_header(out.stream(), "spectrum", cfg);
    out.stream() << "index,energy,residual,sector\n";
    const std::size_t count = std::min<std::size_t>(r.eigenvalues.size(), 64);
    for (std::size_t i = 0; i < count; ++i) {
      const double res = i < r.residuals.size() ? r.residuals[i] : 0.0;
      const std::string lab =
          i < r.sector_labels.size() ? label_string(r.sector_labels[i]) : "";
      out.stream() << i << ',' << fmt(r.eigenvalues[i]) << ',' << fmt(res) << ','
                   << lab << "\n";
    }
    return 0;
  }
};

struct AlgebraCheckCmd {
  int n = 3;
  std::string output = "-";

  int run() const {
    const AlgebraReport rep = verify_algebra(Lattice{n});
    json doc;
    doc["command"] = "algebra-check";
    doc["n"] = n;
    doc["exhaustive"] = rep.exhaustive;
    doc["residuals"] = {{"commutator_pp", rep.max_commutator_pp},
                        {"commutator_qq", rep.max_commutator_qq},
                        {"anticommutator_pq", rep.max_anticommutator_pq},
                        {"involution", rep.max_involution},
                        {"h_commutator", rep.max_h_commutator}};
    doc["max_residual"] = rep.max_residual();
    doc["pass"] = rep.max_residual() < 1e-10;
    Output out(output);
    out.stream() << doc.dump(2) << "\n";
    return 0;
  }
};

struct NoiseSweepCmd {
  int n = 3;
  double jx = 1.0, jy = 1.0;
  double b_max = 0.1;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string output = "-";

  int run() const {
    const SplittingStats stats =
        doublet_splitting(Lattice{n}, {jx, jy}, b_max, trials, seed);
    Output out(output);
    ConfigEcho cfg{{"n", std::to_string(n)},        {"jx", fmt(jx)},
                   {"jy", fmt(jy)},                 {"b_max", fmt(b_max)},
                   {"trials", std::to_string(trials)},
                   {"seed", std::to_string(seed)}};
    write_header(out.stream(), "noise-sweep", cfg);
    out.stream() << "# median=" << fmt(stats.median) << " mean=" << fmt(stats.mean)
                 << " min=" << fmt(stats.min) << " max=" << fmt(stats.max) << "\n";
    out.stream() << "trial,seed,b_max,E0,E1,deltaE\n";
    for (const auto& s : stats.samples)
      out.stream() << s.trial << ',' << s.seed << ',' << fmt(b_max) << ','
                   << fmt(s.e0) << ',' << fmt(s.e1) << ',' << fmt(s.delta_e)
                   << "\n";
    return 0;
  }
};

struct LifetimeTableCmd {
  double alpha = 1.0;
  double gamma0 = 1.0;
  std::string output = "-";

  int run() const {
    const auto rows = reference_lifetime_configs(alpha, gamma0);
    Output out(output);
    ConfigEcho cfg{{"alpha", fmt(alpha)}, {"gamma0", fmt(gamma0)}};
    write_header(out.stream(), "lifetime-table", cfg);
    out.stream()
        << "label,n,delta_hz,b_max_hz,gamma_eff_hz,tau_s,implied_alpha_gamma0_hz\n";
    for (const auto& r : rows)
      out.stream() << r.label << ',' << r.params.n << ',' << fmt(r.params.delta_gap)
                   << ',' << fmt(r.params.b_max) << ',' << fmt(r.gamma_eff) << ','
                   << fmt(r.tau) << ',' << fmt(r.implied_alpha_gamma0) << "\n";
    return 0;
  }
};

struct PhononsChainCmd {
  int n_min = 2, n_max = 16;
  double a_min = 2e-6;
  double mass_amu = 40.0;
  std::string output = "-";

  int run() const {
    if (n_min < 2 || n_max < n_min) throw InvalidLattice("bad ion number range");
    IonSpecies ion;
    ion.mass = mass_amu * 1.66053906660e-27;
    std::vector<ChainGapResult> sweep, fit_rows;
    for (int n = n_min; n <= n_max; ++n) {
      sweep.push_back(chain_gap_fixed_spacing(n, a_min, ion));
      if (n >= 4) fit_rows.push_back(sweep.back());
    }
    const double alpha = fit_rows.size() >= 2
                             ? chain_gap_scaling_exponent(fit_rows)
                             : chain_gap_scaling_exponent(sweep);
    Output out(output);
    ConfigEcho cfg{{"n_min", std::to_string(n_min)}, {"n_max", std::to_string(n_max)},
                   {"a_min", fmt(a_min)},            {"mass_amu", fmt(mass_amu)}};
    write_header(out.stream(), "phonons-chain", cfg);
    out.stream() << "n,nu_Hz,nu1_Hz,gap_Hz,alpha_fit\n";
    for (const auto& r : sweep)
      out.stream() << r.n_ions << ',' << fmt(r.nu) << ',' << fmt(r.nu1) << ','
                   << fmt(r.gap) << ',' << fmt(alpha) << "\n";
    return 0;
  }
};

struct PhononsArrayCmd {
  int n = 5;
  double nu = 1e7;
  double spacing_min = 1e-6;
  double spacing_max = 1e-5;
  int points = 10;
  double mass_amu = 40.0;
  std::string output = "-";

  int run() const {
    if (points < 1 || spacing_min <= 0 || spacing_max < spacing_min)
      throw InvalidOperator("bad spacing sweep");
    IonSpecies ion;
    ion.mass = mass_amu * 1.66053906660e-27;
    Output out(output);
    ConfigEcho cfg{{"n", std::to_string(n)},
                   {"nu", fmt(nu)},
                   {"spacing_min", fmt(spacing_min)},
                   {"spacing_max", fmt(spacing_max)},
                   {"points", std::to_string(points)},
                   {"mass_amu", fmt(mass_amu)}};
    write_header(out.stream(), "phonons-array", cfg);
    out.stream() << "spacing_m,nu_Hz,gap_Hz,gap_over_nu,stable\n";
    for (int p = 0; p < points; ++p) {
      // log-spaced sweep
      const double f = points == 1 ? 0.0 : static_cast<double>(p) / (points - 1);
      const double d = spacing_min * std::pow(spacing_max / spacing_min, f);
      try {
        const ArrayModel m = array_modes(n, d, nu, ion);
        out.stream() << fmt(d) << ',' << fmt(nu) << ',' << fmt(m.gap) << ','
                     << fmt(m.gap / nu) << ",1\n";
      } catch (const UnstableConfiguration&) {
        out.stream() << fmt(d) << ',' << fmt(nu) << ',' << fmt(0.0) << ','
                     << fmt(0.0) << ",0\n";
      }
    }
    return 0;
  }
};

struct MsVerifyCmd {
  int ions = 2;
  double eta = 0.1;
  double omega = 1e3;
  double delta = 1e3;
  double nu = 1e5;
  int k_return = 1;
  int n_max = 15;
  double phase = 0.0;
  bool no_auto_cutoff = false;
  std::string output = "-";

  int run() const {
    MsParams p;
    p.n_ions = ions;
    p.eta = eta;
    p.omega = omega;
    p.delta = delta;
    p.nu = nu;
    p.k_return = k_return;
    p.n_max = n_max;
    p.phase = phase;
    p.auto_cutoff = !no_auto_cutoff;
    const MsResult r = ms_simulate(p);
    Output out(output);
    ConfigEcho cfg{{"ions", std::to_string(ions)},
                   {"eta", fmt(eta)},
                   {"omega", fmt(omega)},
                   {"delta", fmt(delta)},
                   {"nu", fmt(nu)},
                   {"k_return", std::to_string(k_return)},
                   {"n_max", std::to_string(n_max)},
                   {"phase", fmt(phase)},
                   {"auto_cutoff", p.auto_cutoff ? "1" : "0"}};
    write_header(out.stream(), "ms-verify", cfg);
    out.stream() << "# chi=" << fmt(r.chi) << " tau=" << fmt(r.tau)
                 << " n_max_used=" << r.n_max_used
                 << " spin_fidelity=" << fmt(r.spin_fidelity)
                 << " phonon_purity=" << fmt(r.phonon_purity)
                 << " fock_leakage=" << fmt(r.fock_leakage)
                 << " leakage_flag=" << (r.leakage_flag ? 1 : 0) << "\n";
    out.stream() << "t,spin_fidelity,phonon_purity,fock_leakage\n";
    for (const auto& pt : r.trajectory)
      out.stream() << fmt(pt.t) << ',' << fmt(pt.spin_fidelity) << ','
                   << fmt(pt.phonon_purity) << ',' << fmt(pt.fock_leakage) << "\n";
    return 0;
  }
};

struct PrepareCmd {
  int n = 2;
  double jx = 1.0, jy = 1.0;
  double time = 50.0;
  std::string shape = "cosine";
  double strength = 10.0;
  int sign = 1;
  std::string output = "-";

  int run() const {
    RampSchedule sched;
    sched.total_time = time;
    sched.shape = (shape == "linear") ? RampShape::LINEAR : RampShape::COSINE;
    sched.strength = strength;
    sched.sign = sign;
    const PrepareResult r = adiabatic_prepare(Lattice{n}, {jx, jy}, sched);
    json doc;
    doc["command"] = "prepare";
    doc["config"] = {{"n", n},           {"jx", jx},       {"jy", jy},
                     {"time", time},     {"shape", shape}, {"strength", strength},
                     {"sign", sign}};
    doc["doublet_overlap"] = r.doublet_overlap;
    doc["q_initial"] = r.q_initial;
    doc["q_final"] = r.q_final;
    doc["q_drift"] = r.q_drift;
    doc["norm_drift"] = r.norm_drift;
    Output out(output);
    out.stream() << doc.dump(2) << "\n";
    return 0;
  }
};

struct MeasureCmd {
  int n = 2;
  double jx = 1.0, jy = 1.0;
  std::string basis = "x";
  int shots = 1000;
  std::uint64_t seed = 7;
  std::string state = "doublet";  // doublet | prepared
  double time = 50.0;
  int sign = 1;
  std::string output = "-";

  int run() const {
    const Lattice lat{n};
    StateVector psi;
    if (state == "prepared") {
      RampSchedule sched;
      sched.total_time = time;
      sched.sign = sign;
      PrepareResult r = adiabatic_prepare(lat, {jx, jy}, sched);
      psi = r.final_state;
      psi.normalize();
    } else {
      psi = ground_doublet(lat, {jx, jy}, Model::LRI).states.front();
    }
    const MeasureBasis mb = basis == "z"   ? MeasureBasis::Z
                            : basis == "y" ? MeasureBasis::Y
                                           : MeasureBasis::X;
    const auto bits = measure_sample(psi, mb, shots, seed);
    Output out(output);
    ConfigEcho cfg{{"n", std::to_string(n)},     {"jx", fmt(jx)},
                   {"jy", fmt(jy)},              {"basis", basis},
                   {"shots", std::to_string(shots)},
                   {"seed", std::to_string(seed)},
                   {"state", state}};
    write_header(out.stream(), "measure", cfg);
    out.stream() << "shot,bits,bitstring\n";
    const int sites = lat.site_count();
    for (int s = 0; s < shots; ++s) {
      std::string b(sites, '0');
      for (int q = 0; q < sites; ++q)
        if ((bits[s] >> q) & 1) b[sites - 1 - q] = '1';
      out.stream() << s << ',' << bits[s] << ',' << b << "\n";
    }
    return 0;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"topoguard: protected-qubit lattice engine"};
  app.require_subcommand(1);
  app.set_config("--config", "", "flat key=value config file with [command] sections");
  app.allow_config_extras(false);

  int threads = 0;
  app.add_option("--threads", threads, "worker cap (0 = hardware)")
      ->envname("TOPOGUARD_THREADS");

  GapTableCmd gap;
  auto* c_gap = app.add_subcommand("gap-table", "doublet gaps vs lattice size");
  c_gap->add_option("--sizes", gap.sizes);
  c_gap->add_option("--model", gap.model)->check(CLI::IsMember({"lri", "sri"}));
  c_gap->add_option("--jx", gap.jx);
  c_gap->add_option("--jy", gap.jy);
  c_gap->add_option("--boundary", gap.boundary)
      ->check(CLI::IsMember({"open", "periodic"}));
  c_gap->add_option("--normalization", gap.normalization);
  c_gap->add_option("--output,-o", gap.output);

  SpectrumCmd spec;
  auto* c_spec = app.add_subcommand("spectrum", "low-lying spectrum with sector labels");
  c_spec->add_option("--n", spec.n);
  c_spec->add_option("--model", spec.model)->check(CLI::IsMember({"lri", "sri"}));
  c_spec->add_option("--jx", spec.jx);
  c_spec->add_option("--jy", spec.jy);
  c_spec->add_option("--k", spec.k);
  c_spec->add_option("--method", spec.method)
      ->check(CLI::IsMember({"auto", "dense", "sectors"}));
  c_spec->add_option("--output,-o", spec.output);

  AlgebraCheckCmd alg;
  auto* c_alg = app.add_subcommand("algebra-check", "P/Q symmetry algebra residuals");
  c_alg->add_option("--n", alg.n);
  c_alg->add_option("--output,-o", alg.output);

  NoiseSweepCmd noise;
  auto* c_noise = app.add_subcommand("noise-sweep", "Monte Carlo doublet splitting");
  c_noise->add_option("--n", noise.n);
  c_noise->add_option("--jx", noise.jx);
  c_noise->add_option("--jy", noise.jy);
  c_noise->add_option("--b-max", noise.b_max);
  c_noise->add_option("--trials", noise.trials);
  c_noise->add_option("--seed", noise.seed);
  c_noise->add_option("--output,-o", noise.output);

  LifetimeTableCmd life;
  auto* c_life = app.add_subcommand("lifetime-table", "protected decoherence rates");
  c_life->add_option("--alpha", life.alpha);
  c_life->add_option("--gamma0", life.gamma0);
  c_life->add_option("--output,-o", life.output);

  PhononsChainCmd chain;
  auto* c_chain = app.add_subcommand("phonons-chain", "axial chain modes and gap scaling");
  c_chain->add_option("--n-min", chain.n_min);
  c_chain->add_option("--n-max", chain.n_max);
  c_chain->add_option("--a-min", chain.a_min);
  c_chain->add_option("--mass-amu", chain.mass_amu);
  c_chain->add_option("--output,-o", chain.output);

  PhononsArrayCmd arr;
  auto* c_arr = app.add_subcommand("phonons-array", "in-plane microtrap array modes");
  c_arr->add_option("--n", arr.n);
  c_arr->add_option("--nu", arr.nu);
  c_arr->add_option("--spacing-min", arr.spacing_min);
  c_arr->add_option("--spacing-max", arr.spacing_max);
  c_arr->add_option("--points", arr.points);
  c_arr->add_option("--mass-amu", arr.mass_amu);
  c_arr->add_option("--output,-o", arr.output);

  MsVerifyCmd ms;
  auto* c_ms = app.add_subcommand("ms-verify", "bichromatic drive vs effective model");
  c_ms->add_option("--ions", ms.ions);
  c_ms->add_option("--eta", ms.eta);
  c_ms->add_option("--omega", ms.omega);
  c_ms->add_option("--delta", ms.delta);
  c_ms->add_option("--nu", ms.nu);
  c_ms->add_option("--k-return", ms.k_return);
  c_ms->add_option("--n-max", ms.n_max);
  c_ms->add_option("--phase", ms.phase);
  c_ms->add_flag("--no-auto-cutoff", ms.no_auto_cutoff);
  c_ms->add_option("--output,-o", ms.output);

  PrepareCmd prep;
  auto* c_prep = app.add_subcommand("prepare", "adiabatic doublet preparation");
  c_prep->add_option("--n", prep.n);
  c_prep->add_option("--jx", prep.jx);
  c_prep->add_option("--jy", prep.jy);
  c_prep->add_option("--time", prep.time);
  c_prep->add_option("--shape", prep.shape)->check(CLI::IsMember({"cosine", "linear"}));
  c_prep->add_option("--strength", prep.strength);
  c_prep->add_option("--sign", prep.sign)->check(CLI::IsMember({-1, 1}));
  c_prep->add_option("--output,-o", prep.output);

  MeasureCmd meas;
  auto* c_meas = app.add_subcommand("measure", "projective samples of a prepared state");
  c_meas->add_option("--n", meas.n);
  c_meas->add_option("--jx", meas.jx);
  c_meas->add_option("--jy", meas.jy);
  c_meas->add_option("--basis", meas.basis)->check(CLI::IsMember({"x", "y", "z"}));
  c_meas->add_option("--shots", meas.shots);
  c_meas->add_option("--seed", meas.seed);
  c_meas->add_option("--state", meas.state)->check(CLI::IsMember({"doublet", "prepared"}));
  c_meas->add_option("--time", meas.time);
  c_meas->add_option("--sign", meas.sign)->check(CLI::IsMember({-1, 1}));
  c_meas->add_option("--output,-o", meas.output);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  set_max_threads(threads);
  try {
    if (c_gap->parsed()) return gap.run();
    if (c_spec->parsed()) return spec.run();
    if (c_alg->parsed()) return alg.run();
    if (c_noise->parsed()) return noise.run();
    if (c_life->parsed()) return life.run();
    if (c_chain->parsed()) return chain.run();
    if (c_arr->parsed()) return arr.run();
    if (c_ms->parsed()) return ms.run();
    if (c_prep->parsed()) return prep.run();
    if (c_meas->parsed()) return meas.run();
    return 1;
  } catch (const NotConverged& e) {
    std::cerr << json{{"error", {{"type", "NotConverged"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const IntegrationFailure& e) {
    std::cerr << json{{"error", {{"type", "IntegrationFailure"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const UnstableConfiguration& e) {
    std::cerr << json{{"error", {{"type", "UnstableConfiguration"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const AlgebraViolation& e) {
    std::cerr << json{{"error", {{"type", "AlgebraViolation"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << json{{"error", {{"type", "ValidationError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", {{"type", "InternalError"}, {"message", e.what()}}}}
                     .dump()
              << "\n";
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace topoguard
