#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "fourphoton/circuit.hpp"
#include "fourphoton/family.hpp"

using namespace fourphoton;

namespace {

constexpr double kPi = std::numbers::pi;

Occupation source_occ(int aH, int aV, int bH, int bV) {
  Occupation o(16, 0);
  o[0] = static_cast<std::uint8_t>(aH);
  o[1] = static_cast<std::uint8_t>(aV);
  o[2] = static_cast<std::uint8_t>(bH);
  o[3] = static_cast<std::uint8_t>(bV);
  return o;
}

// Relative sign between the Bell-pair part and the GHZ part of a state.
double bell_ghz_relative_sign(const QubitState4& s) {
  const Complex ghz = s[QubitState4::index_of("HHVV")];
  const Complex bell = s[QubitState4::index_of("HVHV")];
  return (std::conj(ghz) * bell).real();
}

}  // namespace

TEST(Circuit, SourceAmplitudes) {
  const FockState s = spdc_second_order();
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-14);
  EXPECT_NEAR(s.amplitude(source_occ(1, 1, 1, 1)).real(), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(s.amplitude(source_occ(2, 0, 0, 2)).real(), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(s.amplitude(source_occ(0, 2, 2, 0)).real(), 1.0 / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(s.terms().size(), 3u);
}

TEST(Circuit, SourceTermsSumToSource) {
  const auto t = spdc_second_order_terms();
  const FockState sum = t[0] + t[1] + t[2];
  EXPECT_NEAR(std::abs(overlap(sum, spdc_second_order())), 1.0, 1e-14);
}

TEST(Circuit, HigherEmissionOrdersAreNormalized) {
  for (int n = 0; n <= 3; ++n) EXPECT_NEAR(spdc_emission(n).squared_norm(), 1.0, 1e-13) << n;
  EXPECT_THROW(spdc_emission(5), std::invalid_argument);
}

TEST(Circuit, ElementsAreUnitaryOverTheRegister) {
  for (const auto& e : default_elements(0.3)) {
    EXPECT_LE(ModeTransform::unitarity_error(e.transform.matrix()), 1e-14) << e.name;
  }
}

TEST(Circuit, PbsTraceThroughAtZero) {
  // Only the a_H a_V b_H b_V term leaves two photons in each of c and d.
  std::vector<Element> through_pbs = default_elements(0.0);
  through_pbs.erase(through_pbs.begin() + 2, through_pbs.end());
  const FockState out = propagate(spdc_second_order(), through_pbs);
  const PostselectResult two_two = postselect(out, {{'c', 2}, {'d', 2}});
  EXPECT_NEAR(two_two.probability, 1.0 / 3.0, 1e-14);
  ASSERT_EQ(two_two.state.terms().size(), 1u);
  const Occupation& o = two_two.state.terms().begin()->first;
  EXPECT_EQ(o[4] + o[5], 2);  // c_H c_V
  EXPECT_EQ(o[4], 1);
  EXPECT_EQ(o[6], 1);  // d_H d_V
}

TEST(Circuit, GammaZeroGivesBellPairProduct) {
  const PipelineResult r = run_pipeline(0.0);
  EXPECT_NEAR(r.probability, 1.0 / 12.0, 1e-14);
  EXPECT_NEAR(overlap_modulus(r.state, bell_pair_product()), 1.0, 1e-12);
}

TEST(Circuit, GammaPiOver8GivesGhz) {
  const PipelineResult r = run_pipeline(kPi / 8.0);
  EXPECT_NEAR(r.probability, 1.0 / 24.0, 1e-14);
  EXPECT_NEAR(overlap_modulus(r.state, ghz_state()), 1.0, 1e-12);
}

TEST(Circuit, GammaPiOver12GivesDicke) {
  const PipelineResult r = run_pipeline(kPi / 12.0);
  EXPECT_NEAR(r.probability, 1.0 / 32.0, 1e-14);
  for (const char* l : {"HHVV", "HVHV", "HVVH", "VHHV", "VHVH", "VVHH"}) {
    EXPECT_NEAR(std::abs(r.state[QubitState4::index_of(l)]), 1.0 / std::sqrt(6.0), 1e-12) << l;
  }
}

TEST(Circuit, GlobalPhaseMakesLargestAmplitudeRealPositive) {
  for (double g : {0.0, 0.1, kPi / 8.0, 0.7}) {
    const QubitState4 s = run_pipeline(g).state;
    const Eigen::Index i = [&] {
      Eigen::Index idx;
      s.amplitudes().cwiseAbs().maxCoeff(&idx);
      return idx;
    }();
    EXPECT_GT(s.amplitudes()(i).real(), 0.0);
    EXPECT_EQ(s.amplitudes()(i).imag(), 0.0);
  }
}

TEST(Circuit, RelativeSignIsNegativeBeyondPiOver8) {
  for (int k = 1; k <= 20; ++k) {
    const double g = kPi / 8.0 + k * (kPi / 8.0) / 20.0;
    EXPECT_LT(bell_ghz_relative_sign(run_pipeline(g).state), 0.0) << g;
  }
  for (int k = 1; k < 20; ++k) {
    const double g = k * (kPi / 8.0) / 20.0;
    EXPECT_GT(bell_ghz_relative_sign(run_pipeline(g).state), 0.0) << g;
  }
}

TEST(Circuit, ProbabilityPositiveAndMaximalAtPiOver4) {
  double best = 0.0, best_g = -1.0;
  for (int k = 0; k <= 100; ++k) {
    const double g = k * kGammaMax / 100.0;
    const double p = run_pipeline(g).probability;
    EXPECT_GT(p, 0.0);
    EXPECT_LE(p, 0.25 + 1e-14);
    if (p > best) {
      best = p;
      best_g = g;
    }
  }
  EXPECT_NEAR(best_g, kGammaMax, 1e-15);
  EXPECT_NEAR(best, 0.25, 1e-13);
}

TEST(Circuit, OutOfRangeGammaIsRejected) {
  EXPECT_THROW(run_pipeline(-0.01), std::invalid_argument);
  EXPECT_THROW(run_pipeline(0.3 * kPi), std::invalid_argument);
}

TEST(Circuit, InterferenceTermsAtZero) {
  const InterferenceDiagnostic d = interference_terms(0.0);
  EXPECT_LE(d.magnitudes[0], 1e-12);
  EXPECT_LE(d.magnitudes[1], 1e-12);
  EXPECT_NEAR(d.magnitudes[2] * d.magnitudes[2], 1.0 / 12.0, 1e-14);
}

TEST(Circuit, InterferenceSuppressesThirdTermAtPiOver8) {
  const InterferenceDiagnostic d = interference_terms(kPi / 8.0);
  EXPECT_LE(d.magnitudes[2], 1e-12);
  EXPECT_GT(d.magnitudes[0], 0.1);
  EXPECT_GT(d.magnitudes[1], 0.1);
}

TEST(Circuit, AllTermsContributeAtPiOver12) {
  const InterferenceDiagnostic d = interference_terms(kPi / 12.0);
  for (double m : d.magnitudes) EXPECT_GT(m, 1e-3);
  // Coherent sum reproduces the post-selected amplitudes.
  const QubitState4 sum = d.contributions[0] + d.contributions[1] + d.contributions[2];
  EXPECT_NEAR(sum.squared_norm(), 1.0 / 32.0, 1e-14);
}
