#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "topoguard/dynamics.hpp"
#include "topoguard/eigensolver.hpp"
#include "topoguard/noise_analysis.hpp"
#include "topoguard/phonons.hpp"
#include "topoguard/runner.hpp"
#include "topoguard/threading.hpp"

namespace py = pybind11;
using namespace topoguard;

namespace {

OperatorSum build_model(int n, const std::string& model, double jx, double jy) {
  const Lattice lat{n};
  if (model == "sri") return build_sri(lat, {jx, jy});
  return build_lri(lat, {jx, jy});
}

py::dict spectrum_dict(const SpectrumResult& r) {
  py::dict d;
  d["eigenvalues"] = r.eigenvalues;
  d["ground_degeneracy"] = r.ground_degeneracy;
  d["gap"] = r.gap;
  d["residuals"] = r.residuals;
  d["sector_labels"] = r.sector_labels;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "protected-qubit lattice engine";

  m.def("set_max_threads", &set_max_threads);

  m.def(
      "spectrum",
      [](int n, const std::string& model, double jx, double jy, int k) {
        const OperatorSum op = build_model(n, model, jx, jy);
        if (n <= 3) return spectrum_dict(dense_spectrum(op));
        SectorScanOptions so;
        so.k_per_sector = k;
        so.dense_threshold = 1024;
        return spectrum_dict(sector_scan(op, so));
      },
      py::arg("n"), py::arg("model") = "lri", py::arg("jx") = 1.0,
      py::arg("jy") = 1.0, py::arg("k") = 3);

  m.def(
      "gap",
      [](int n, const std::string& model, double jx, double jy) {
        const OperatorSum op = build_model(n, model, jx, jy);
        SpectrumResult r;
        if (n <= 3) {
          r = dense_spectrum(op);
        } else {
          SectorScanOptions so;
          so.dense_threshold = 1024;
          r = sector_scan(op, so);
        }
        return py::make_tuple(r.eigenvalues.front(), r.gap, r.ground_degeneracy);
      },
      py::arg("n"), py::arg("model") = "lri", py::arg("jx") = 1.0,
      py::arg("jy") = 1.0);

  m.def(
      "algebra_check",
      [](int n) {
        const AlgebraReport r = verify_algebra(Lattice{n});
        py::dict d;
        d["commutator_pp"] = r.max_commutator_pp;
        d["commutator_qq"] = r.max_commutator_qq;
        d["anticommutator_pq"] = r.max_anticommutator_pq;
        d["involution"] = r.max_involution;
        d["h_commutator"] = r.max_h_commutator;
        d["max_residual"] = r.max_residual();
        d["exhaustive"] = r.exhaustive;
        return d;
      },
      py::arg("n"));

  m.def(
      "noise_splitting",
      [](int n, double b_max, int trials, std::uint64_t seed, double jx, double jy) {
        const SplittingStats s =
            doublet_splitting(Lattice{n}, {jx, jy}, b_max, trials, seed);
        py::dict d;
        std::vector<double> deltas;
        for (const auto& x : s.samples) deltas.push_back(x.delta_e);
        d["delta_e"] = deltas;
        d["median"] = s.median;
        d["mean"] = s.mean;
        d["min"] = s.min;
        d["max"] = s.max;
        return d;
      },
      py::arg("n"), py::arg("b_max") = 0.1, py::arg("trials") = 50,
      py::arg("seed") = 1, py::arg("jx") = 1.0, py::arg("jy") = 1.0);

  m.def(
      "decoherence_rate",
      [](double gamma0, double alpha_n, double b_max, double delta_gap, int n) {
        return decoherence_rate({gamma0, alpha_n, b_max, delta_gap, n});
      },
      py::arg("gamma0"), py::arg("alpha_n"), py::arg("b_max"),
      py::arg("delta_gap"), py::arg("n"));

  m.def(
      "chain_modes",
      [](int n) {
        const ChainModel c = chain_modes(n);
        return py::make_tuple(c.positions, c.mode_frequencies);
      },
      py::arg("n"));

  m.def(
      "array_gap",
      [](int n, double spacing, double nu) {
        const ArrayModel a = array_modes(n, spacing, nu);
        return py::make_tuple(a.gap, a.mode_frequencies);
      },
      py::arg("n"), py::arg("spacing"), py::arg("nu"));

  m.def(
      "ms_verify",
      [](int ions, double eta, double omega, double delta, double nu, int k_return) {
        MsParams p;
        p.n_ions = ions;
        p.eta = eta;
        p.omega = omega;
        p.delta = delta;
        p.nu = nu;
        p.k_return = k_return;
        const MsResult r = ms_simulate(p);
        py::dict d;
        d["spin_fidelity"] = r.spin_fidelity;
        d["phonon_purity"] = r.phonon_purity;
        d["fock_leakage"] = r.fock_leakage;
        d["chi"] = r.chi;
        d["tau"] = r.tau;
        d["n_max_used"] = r.n_max_used;
        return d;
      },
      py::arg("ions") = 2, py::arg("eta") = 0.1, py::arg("omega") = 1e3,
      py::arg("delta") = 1e3, py::arg("nu") = 1e5, py::arg("k_return") = 1);

  m.def(
      "prepare",
      [](int n, double total_time, const std::string& shape, double strength,
         int sign, double jx, double jy) {
        RampSchedule sched;
        sched.total_time = total_time;
        sched.shape = shape == "linear" ? RampShape::LINEAR : RampShape::COSINE;
        sched.strength = strength;
        sched.sign = sign;
        const PrepareResult r = adiabatic_prepare(Lattice{n}, {jx, jy}, sched);
        py::dict d;
        d["doublet_overlap"] = r.doublet_overlap;
        d["q_initial"] = r.q_initial;
        d["q_final"] = r.q_final;
        d["q_drift"] = r.q_drift;
        d["norm_drift"] = r.norm_drift;
        return d;
      },
      py::arg("n") = 2, py::arg("total_time") = 50.0, py::arg("shape") = "cosine",
      py::arg("strength") = 10.0, py::arg("sign") = 1, py::arg("jx") = 1.0,
      py::arg("jy") = 1.0);

  m.def(
      "measure",
      [](int n, const std::string& basis, int shots, std::uint64_t seed) {
        const auto doublet = ground_doublet(Lattice{n}, {1.0, 1.0}, Model::LRI);
        const MeasureBasis b = basis == "z"   ? MeasureBasis::Z
                               : basis == "y" ? MeasureBasis::Y
                                              : MeasureBasis::X;
        return measure_sample(doublet.states.front(), b, shots, seed);
      },
      py::arg("n") = 2, py::arg("basis") = "x", py::arg("shots") = 1000,
      py::arg("seed") = 7);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    return run_cli(args);
  });
}
