#include "topoguard/hamiltonians.hpp"

#include <random>

namespace topoguard {

namespace {
PauliString pair_term(double coeff, int s1, int s2, PauliLetter l) {
  return PauliString{Complex{coeff, 0.0}, {{s1, l}, {s2, l}}};
}
}  // namespace

OperatorSum build_lri(const Lattice& lat, const CouplingParams& params) {
  params.validate();
  const int n = lat.n;
  std::vector<PauliString> terms;
  // (sum_j sx)^2 = n*I + 2 sum_{j<k} sx_j sx_k, likewise for sy columns;
  // the constant is folded into a single identity term.
  terms.push_back(PauliString{Complex{-(params.jx + params.jy) * n * n, 0.0}, {}});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k)
        terms.push_back(pair_term(-2.0 * params.jx, lat.site_index(i, j),
                                  lat.site_index(i, k), PauliLetter::X));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = i + 1; k < n; ++k)
        terms.push_back(pair_term(-2.0 * params.jy, lat.site_index(i, j),
                                  lat.site_index(k, j), PauliLetter::Y));
  OperatorSum op(lat, std::move(terms), true);
  op.column_permutation_invariant = true;
  return op;
}

OperatorSum build_sri(const Lattice& lat, const CouplingParams& params,
                      Boundary boundary, double normalization) {
  params.validate();
  const int n = lat.n;
  if (n < 2) throw InvalidLattice("SRI model needs n >= 2");
  std::vector<PauliString> terms;
  const int bonds = (boundary == Boundary::PERIODIC) ? n : n - 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < bonds; ++j)
      terms.push_back(pair_term(-normalization * params.jx, lat.site_index(i, j),
                                lat.site_index(i, (j + 1) % n), PauliLetter::X));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < bonds; ++i)
      terms.push_back(pair_term(-normalization * params.jy, lat.site_index(i, j),
                                lat.site_index((i + 1) % n, j), PauliLetter::Y));
  return OperatorSum(lat, std::move(terms), true);
}

OperatorSum build_external_field(const Lattice& lat, int sign, double strength) {
  if (strength <= 0) throw InvalidOperator("field strength must be positive");
  if (sign != 1 && sign != -1) throw InvalidOperator("sign must be +-1");
  std::vector<PauliString> terms;
  for (int s = 0; s < lat.site_count(); ++s)
    terms.push_back(PauliString{Complex{-sign * strength, 0.0}, {{s, PauliLetter::X}}});
  OperatorSum op(lat, std::move(terms), true);
  op.column_permutation_invariant = true;
  return op;
}

OperatorSum build_noise(const Lattice& lat, const NoiseField& field) {
  if (field.n != lat.n) throw InvalidOperator("noise field shape does not match lattice");
  static const PauliLetter axes[3] = {PauliLetter::X, PauliLetter::Y, PauliLetter::Z};
  std::vector<PauliString> terms;
  for (int s = 0; s < lat.site_count(); ++s)
    for (int a = 0; a < 3; ++a)
      if (field.at(s, a) != 0.0)
        terms.push_back(PauliString{Complex{field.at(s, a), 0.0}, {{s, axes[a]}}});
  return OperatorSum(lat, std::move(terms), true);
}

NoiseField sample_noise(const Lattice& lat, double b_max, std::uint64_t seed) {
  if (b_max <= 0) throw InvalidOperator("b_max must be positive");
  NoiseField f(lat.n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-b_max, b_max);
  for (int s = 0; s < lat.site_count(); ++s)
    for (int a = 0; a < 3; ++a) f.at(s, a) = dist(rng);
  return f;
}

}  // namespace topoguard
