#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "fourphoton/analysis.hpp"
#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"
#include "fourphoton/family.hpp"

using namespace fourphoton;

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Explicit 16x16 operator sigma_i (x) sigma_j (x) sigma_k (x) sigma_l.
Eigen::MatrixXcd kron_pauli(const PauliString& s) {
  Eigen::MatrixXcd m = pauli_matrix(s[0]);
  for (int q = 1; q < 4; ++q) m = kron(m, pauli_matrix(s[q]));
  return m;
}

double brute_correlation(const QubitState4& psi, const PauliString& s) {
  const Eigen::VectorXcd v = psi.amplitudes();
  return (v.adjoint() * kron_pauli(s) * v)(0, 0).real();
}

Eigen::VectorXcd random_vector(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n;
  Eigen::VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(n(rng), n(rng));
  return v.normalized();
}

QubitState4 random_state(std::mt19937_64& rng) {
  const Eigen::VectorXcd v = random_vector(rng, 16);
  Amplitudes4 a = v;
  return QubitState4(a);
}

// Tensor product of a state on the qubits in `side` and one on the rest.
QubitState4 product_across(Bipartition side, const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Amplitudes4 out;
  for (int idx = 0; idx < 16; ++idx) {
    int ia = 0, ib = 0;
    for (int q = 0; q < 4; ++q) {
      const int bit = (idx >> (3 - q)) & 1;
      if (side & (1 << q)) ia = 2 * ia + bit;
      else ib = 2 * ib + bit;
    }
    out(idx) = a(ia) * b(ib);
  }
  return QubitState4(out);
}

// Largest squared singular value across a cut by power iteration.
double power_iteration_bound(const QubitState4& psi, Bipartition side) {
  const int na = std::popcount(static_cast<unsigned>(side));
  const int da = 1 << na, db = 1 << (4 - na);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(da, db);
  for (int idx = 0; idx < 16; ++idx) {
    int ia = 0, ib = 0;
    for (int q = 0; q < 4; ++q) {
      const int bit = (idx >> (3 - q)) & 1;
      if (side & (1 << q)) ia = 2 * ia + bit;
      else ib = 2 * ib + bit;
    }
    m(ia, ib) = psi[static_cast<std::size_t>(idx)];
  }
  std::mt19937_64 rng(7);
  Eigen::VectorXcd b = random_vector(rng, db);
  double s = 0.0;
  for (int it = 0; it < 2000; ++it) {
    const Eigen::VectorXcd a = (m * b).normalized();
    b = (m.adjoint() * a).normalized();
    s = std::abs((a.adjoint() * m * b)(0, 0));
  }
  return s * s;
}

std::size_t exact_min_cover(const std::vector<PauliString>& terms) {
  std::vector<std::vector<std::size_t>> options(terms.size());
  for (std::size_t t = 0; t < terms.size(); ++t) {
    for (std::size_t s = 0; s < 81; ++s) {
      if (covers(all_settings()[s], terms[t])) options[t].push_back(s);
    }
  }
  std::size_t best = 82;
  std::vector<std::size_t> chosen;
  std::function<void()> search = [&] {
    if (chosen.size() >= best) return;
    std::size_t pick = terms.size(), fewest = 82;
    for (std::size_t t = 0; t < terms.size(); ++t) {
      bool done = false;
      for (std::size_t s : chosen) done = done || covers(all_settings()[s], terms[t]);
      if (!done && options[t].size() < fewest) {
        fewest = options[t].size();
        pick = t;
      }
    }
    if (pick == terms.size()) {
      best = chosen.size();
      return;
    }
    for (std::size_t s : options[pick]) {
      chosen.push_back(s);
      search();
      chosen.pop_back();
    }
  };
  search();
  return best;
}

std::vector<PauliString> nonzero_terms(double gamma) { return correlations(family_state(gamma)).nonzero(1e-10); }

}  // namespace

TEST(Correlations, AgreeWithKroneckerOracle) {
  std::mt19937_64 rng(11);
  std::vector<QubitState4> states{family_state(0.0), family_state(0.3), ghz_state(), random_state(rng),
                                  random_state(rng)};
  for (const auto& psi : states) {
    const CorrelationTensor t = correlations(psi);
    const CorrelationTensor tr = correlations(DensityMatrix::pure(psi));
    for (std::size_t i = 0; i < 256; ++i) {
      const PauliString s = pauli_from_flat_index(i);
      const double oracle = brute_correlation(psi, s);
      EXPECT_NEAR(t[s], oracle, 1e-12) << to_string(s);
      EXPECT_NEAR(tr[s], oracle, 1e-12) << to_string(s);
    }
  }
}

TEST(Correlations, GhzValues) {
  const CorrelationTensor t = correlations(ghz_state());
  EXPECT_NEAR(t[parse_pauli_string("zzzz")], 1.0, 1e-14);
  EXPECT_NEAR(t[parse_pauli_string("xxxx")], 1.0, 1e-14);
  EXPECT_NEAR(t[parse_pauli_string("0000")], 1.0, 1e-14);
}

TEST(Correlations, RejectsUnnormalizedInput) {
  EXPECT_THROW(correlations(ghz_state() * Complex(2.0)), std::invalid_argument);
}

TEST(Correlations, CompletenessGivesPurity) {
  for (int k = 0; k <= 20; ++k) {
    const CorrelationTensor t = correlations(family_state(k * kGammaMax / 20.0));
    double sum = 0.0;
    for (double v : t.values()) sum += v * v;
    EXPECT_NEAR(sum / 16.0, 1.0, 1e-9);
  }
}

TEST(Correlations, ClassOrbitSizes) {
  const std::size_t sizes[] = {4, 8, 4, 16, 8};
  std::set<std::size_t> all;
  for (int c = 0; c < kNumClasses; ++c) {
    const auto m = class_members(static_cast<CorrelationClass>(c));
    EXPECT_EQ(m.size(), sizes[c]) << c;
    for (const auto& s : m) all.insert(flat_index(s));
  }
  EXPECT_EQ(all.size(), 40u);
}

TEST(Correlations, FortyNonZeroEntriesFollowTheClasses) {
  std::set<std::size_t> members;
  for (int c = 0; c < kNumClasses; ++c) {
    for (const auto& s : class_members(static_cast<CorrelationClass>(c))) members.insert(flat_index(s));
  }
  for (int k = 1; k <= 20; ++k) {
    // Generic points, avoiding the anchors.
    const double g = (k - 0.37) * kGammaMax / 20.5;
    const CorrelationTensor t = correlations(family_state(g));
    std::set<std::size_t> nz;
    for (const auto& s : t.nonzero(1e-10)) nz.insert(flat_index(s));
    EXPECT_EQ(nz, members) << g;
    EXPECT_NO_THROW(class_moduli(t));
  }
}

TEST(Correlations, DickePointClassValues) {
  const ClassValues v = correlation_classes(kPi / 12.0);
  EXPECT_NEAR(v[0], 1.0, 1e-12);
  EXPECT_NEAR(v[1], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(v[2], 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(v[3], 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(v[4], 2.0 / 3.0, 1e-12);
}

TEST(Correlations, ClassModuliDetectsInconsistency) {
  CorrelationTensor t = correlations(family_state(0.2));
  t.at(parse_pauli_string("xyxy")) += 1e-3;
  EXPECT_THROW(class_moduli(t), NumericError);
}

TEST(Fidelity, Basics) {
  EXPECT_NEAR(fidelity(family_state(0.3), 0.3), 1.0, 1e-12);
  EXPECT_NEAR(fidelity(DensityMatrix::maximally_mixed(), 0.3), 1.0 / 16.0, 1e-14);
  EXPECT_NEAR(fidelity(DensityMatrix::pure(ghz_state()), kPi / 12.0), 1.0 / 3.0, 1e-12);
  EXPECT_THROW(fidelity(DensityMatrix(Matrix16::Identity()), 0.1), std::invalid_argument);
}

TEST(Witness, BoundAnchors) {
  EXPECT_NEAR(biseparable_bound(kPi / 8.0), 0.5, 1e-10);
  EXPECT_NEAR(biseparable_bound(kPi / 12.0), 2.0 / 3.0, 1e-10);
  EXPECT_NEAR(biseparable_bound(0.0), 1.0, 1e-10);
  const WitnessReport r = witness(DensityMatrix::pure(family_state(0.0)), 0.0);
  EXPECT_FALSE(r.detected);
}

TEST(Witness, DickeSchmidtSpectrum) {
  // 2|2 cut {e,f}|{g,h}
  const auto s = schmidt_coefficients(family_state(kPi / 12.0), 0b0011);
  ASSERT_GE(s.size(), 3u);
  EXPECT_NEAR(s[0] * s[0], 4.0 / 6.0, 1e-12);
  EXPECT_NEAR(s[1] * s[1], 1.0 / 6.0, 1e-12);
  EXPECT_NEAR(s[2] * s[2], 1.0 / 6.0, 1e-12);
}

TEST(Witness, BoundMatchesPowerIteration) {
  for (int k = 0; k <= 10; ++k) {
    const double g = k * kGammaMax / 10.0;
    const QubitState4 psi = family_state(g);
    double oracle = 0.0;
    for (Bipartition b : bipartitions()) oracle = std::max(oracle, power_iteration_bound(psi, b));
    EXPECT_NEAR(biseparable_bound(psi), oracle, 1e-10) << g;
  }
}

TEST(Witness, RandomBiseparableStatesNeverExceedBound) {
  std::mt19937_64 rng(2024);
  for (double g : {kPi / 8.0, kPi / 12.0, 0.05 * kPi, 0.2 * kPi}) {
    const QubitState4 psi = family_state(g);
    const double c = biseparable_bound(g);
    double best = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const Bipartition side = bipartitions()[static_cast<std::size_t>(n % 7)];
      const int na = std::popcount(static_cast<unsigned>(side));
      const QubitState4 prod =
          product_across(side, random_vector(rng, 1 << na), random_vector(rng, 1 << (4 - na)));
      best = std::max(best, std::norm(prod.inner(psi)));
    }
    EXPECT_LE(best, c + 1e-9) << g;
    EXPECT_GT(best, 0.0);
  }
}

TEST(Witness, RandomProductStatesNeverExceedBound) {
  std::mt19937_64 rng(77);
  for (double g : {kPi / 8.0, kPi / 12.0, 0.3}) {
    const QubitState4 psi = family_state(g);
    double best = 0.0;
    for (int n = 0; n < 1000; ++n) {
      const Eigen::VectorXcd q0 = random_vector(rng, 2), q1 = random_vector(rng, 2);
      const Eigen::VectorXcd q2 = random_vector(rng, 2), q3 = random_vector(rng, 2);
      const QubitState4 prod = product_across(0b0011, kron(q0, q1), kron(q2, q3));
      best = std::max(best, std::norm(prod.inner(psi)));
    }
    EXPECT_LE(best, biseparable_bound(g) + 1e-9) << g;
  }
}

TEST(Witness, IdealStatesAreDetectedWheneverEntangled) {
  for (int k = 1; k <= 100; ++k) {
    const double g = k * kGammaMax / 100.0;
    const WitnessReport r = witness(DensityMatrix::pure(family_state(g)), g);
    EXPECT_TRUE(r.detected) << g;
    EXPECT_DOUBLE_EQ(r.witness_value, r.c - r.fidelity);
  }
}

TEST(Witness, Pairwise) {
  const auto [p1, p2] = pairwise_witness(family_state(0.0));
  EXPECT_NEAR(p1, -0.5, 1e-12);
  EXPECT_NEAR(p2, -0.5, 1e-12);
  const auto [m1, m2] = pairwise_witness(DensityMatrix::maximally_mixed());
  EXPECT_NEAR(m1, 0.25, 1e-12);
  EXPECT_NEAR(m2, 0.25, 1e-12);
}

TEST(Cover, GhzIsMinimal) {
  const SettingCover c = setting_cover(kPi / 8.0);
  const std::size_t exact = exact_min_cover(nonzero_terms(kPi / 8.0));
  EXPECT_EQ(exact, 9u);
  EXPECT_LE(c.settings.size(), 9u);
  EXPECT_EQ(c.settings.size(), exact);
}

TEST(Cover, ProductPointIsSmall) {
  const SettingCover c = setting_cover(0.0);
  EXPECT_EQ(c.settings.size(), exact_min_cover(nonzero_terms(0.0)));
  EXPECT_LT(c.settings.size(), 21u);
}

TEST(Cover, EveryTermIsCoveredAcrossTheGrid) {
  for (int k = 0; k <= 100; ++k) {
    const double g = k * kGammaMax / 100.0;
    const SettingCover c = setting_cover(g);
    EXPECT_LE(c.settings.size(), kMaxFidelitySettings);
    for (const auto& t : nonzero_terms(g)) {
      const bool hit = std::any_of(c.settings.begin(), c.settings.end(),
                                   [&](const MeasurementSetting& s) { return covers(s, t); });
      EXPECT_TRUE(hit) << to_string(t);
    }
    const DensityMatrix rho = DensityMatrix::pure(family_state(g));
    EXPECT_NEAR(fidelity_from_settings(c, rho), 1.0, 1e-10);
  }
}

TEST(Cover, FidelityFromSettingsOnMixedState) {
  const double g = 0.05 * kPi;
  const DensityMatrix rho =
      DensityMatrix::pure(ghz_state()).mixed_with(DensityMatrix::maximally_mixed(), 0.3);
  EXPECT_NEAR(fidelity_from_settings(setting_cover(g), rho), fidelity(rho, g), 1e-10);
}

TEST(Cover, Deterministic) {
  const SettingCover a = setting_cover(0.05 * kPi), b = setting_cover(0.05 * kPi);
  ASSERT_EQ(a.settings.size(), b.settings.size());
  for (std::size_t i = 0; i < a.settings.size(); ++i) EXPECT_EQ(a.settings[i], b.settings[i]);
  EXPECT_EQ(a.covered_terms, b.covered_terms);
}

TEST(LocalUnitary, IdentityGivesNoDeviation) {
  EXPECT_NEAR(collective_overlap(family_state(0.3), Eigen::Matrix2cd::Identity()), 1.0, 1e-14);
}

TEST(LocalUnitary, Psi4MinusIsInvariant) { EXPECT_LE(lu_invariance_check(kPi / 4.0, 100, 5), 1e-9); }

TEST(LocalUnitary, Psi4PlusIsInvariantInItsFrame) {
  const QubitState4 psi = family_state(catalog_entry("Psi4+").gamma);
  EXPECT_LE(lu_invariance_check(psi, 100, 5, psi4_plus_frame()), 1e-9);
}

TEST(LocalUnitary, GhzIsNotInvariant) {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  EXPECT_GT(std::abs(1.0 - collective_overlap(ghz_state(), h)), 0.1);
  EXPECT_GT(lu_invariance_check(kPi / 8.0, 100, 5), 0.1);
}

TEST(LocalUnitary, HaarSamplesAreUnitaryAndReproducible) {
  for (std::uint64_t t = 0; t < 20; ++t) {
    const Eigen::Matrix2cd u = haar_unitary(3, t);
    EXPECT_LE((u.adjoint() * u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(u, haar_unitary(3, t));
  }
}

TEST(Tangle, KnownStates) {
  Amplitudes3 ghz = Amplitudes3::Zero();
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(three_tangle(ghz), 1.0, 1e-14);
  Amplitudes3 w = Amplitudes3::Zero();
  w(1) = w(2) = w(4) = 1.0 / std::sqrt(3.0);
  EXPECT_NEAR(three_tangle(w), 0.0, 1e-14);
  Amplitudes3 prod = Amplitudes3::Zero();
  prod(0) = 1.0;
  EXPECT_NEAR(three_tangle(prod), 0.0, 1e-14);
}

TEST(Dicke, HvProjectionsAreWClass) {
  for (int o : {0, 1}) {
    const DickeProjection p = dicke_projection(ProjectionBasis::kHV, o);
    EXPECT_NEAR(p.probability, 0.5, 1e-12);
    EXPECT_LE(p.tangle, 1e-10);
    EXPECT_EQ(p.label, TripartiteClass::kW);
  }
  // Outcome V leaves one V among the remaining qubits' complement: |HHV>,|HVH>,|VHH>.
  const DickeProjection v = dicke_projection(ProjectionBasis::kHV, 1);
  for (int idx : {1, 2, 4}) EXPECT_NEAR(std::abs(v.state(idx)), 1.0 / std::sqrt(3.0), 1e-12);
}

TEST(Dicke, PmProjectionsAreGhzClass) {
  for (int o : {0, 1}) {
    const DickeProjection p = dicke_projection(ProjectionBasis::kPM, o);
    EXPECT_GE(p.tangle, 0.1);
    EXPECT_EQ(p.label, TripartiteClass::kGHZ);
  }
}

TEST(Dicke, ZeroProbabilityIsRejected) {
  EXPECT_THROW(project_last_qubit(QubitState4::basis("HHHH"), ProjectionBasis::kHV, 1), std::domain_error);
}
