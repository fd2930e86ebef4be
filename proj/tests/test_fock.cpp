#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/QR>

#include <gtest/gtest.h>

#include "fourphoton/circuit.hpp"
#include "fourphoton/fock.hpp"

using namespace fourphoton;

namespace {

const ModeLabel aH{'a', Polarization::H}, aV{'a', Polarization::V};
const ModeLabel eH{'e', Polarization::H}, fH{'f', Polarization::H};

ModeRegister small_register() { return ModeRegister({aH, aV, eH, fH}); }

Occupation occ(std::initializer_list<int> n) {
  Occupation o;
  for (int k : n) o.push_back(static_cast<std::uint8_t>(k));
  return o;
}

ModeTransform splitter_ef() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << r, Complex(0, r), Complex(0, r), r;
  return ModeTransform(u, {eH, fH});
}

double max_amplitude_difference(const FockState& a, const FockState& b) {
  double d = 0.0;
  for (const auto& [o, amp] : a.terms()) d = std::max(d, std::abs(amp - b.amplitude(o)));
  for (const auto& [o, amp] : b.terms()) d = std::max(d, std::abs(amp - a.amplitude(o)));
  return d;
}

}  // namespace

TEST(Fock, CreationUsesSqrtFactorialConvention) {
  const FockState two = FockState::vacuum(small_register()).create(aH).create(aH);
  EXPECT_NEAR(std::abs(two.amplitude(occ({2, 0, 0, 0}))), std::sqrt(2.0), 1e-15);
}

TEST(Fock, RegisterRejectsDuplicatesAndUnknownLabels) {
  EXPECT_THROW(ModeRegister({aH, aH}), std::invalid_argument);
  EXPECT_THROW(small_register().index_of({'h', Polarization::V}), std::invalid_argument);
}

TEST(Fock, IdentityTransformIsNoOp) {
  FockState s = FockState::vacuum(small_register()).create(aH).create(eH).create(eH);
  s = s.normalized();
  const ModeTransform id(Eigen::MatrixXcd::Identity(2, 2), {aH, aV});
  EXPECT_LE(max_amplitude_difference(apply_transform(s, id), s), 1e-15);
}

TEST(Fock, HalfWavePlateAtPiOver8MakesPlusPolarization) {
  FockState s(setup_register());
  s = FockState::vacuum(setup_register()).create(aH);
  const FockState out = apply_transform(s, half_wave_plate('a', std::numbers::pi / 8.0));
  Occupation h(16, 0), v(16, 0);
  h[0] = 1;
  v[1] = 1;
  EXPECT_NEAR(out.amplitude(h).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.amplitude(v).real(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(out.terms().size(), 2u);
}

TEST(Fock, TwoPhotonsOnSplitterSplitWithProbabilityHalf) {
  // By hand: (e + i f)^2 / 2 / sqrt2 * sqrt2 ... the (1,1) term is 2 i e f / 2,
  // i.e. amplitude i/sqrt2 on |1,1> for the normalized input |2,0>.
  const FockState in = (FockState::vacuum(small_register()).create(eH).create(eH)).normalized();
  const FockState out = apply_transform(in, splitter_ef());
  const Complex split = out.amplitude(occ({0, 0, 1, 1}));
  EXPECT_NEAR(std::norm(split), 0.5, 1e-15);
  EXPECT_NEAR(split.imag(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(out.squared_norm(), 1.0, 1e-12);
}

TEST(Fock, NonUnitaryMatrixIsRejected) {
  Eigen::Matrix2cd m;
  m << 1.0, 0.1, 0.0, 1.0;
  try {
    ModeTransform t(m, {aH, aV});
    FAIL() << "expected rejection";
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("not unitary"), std::string::npos);
  }
}

TEST(Fock, TransformOnUnknownModeIsRejected) {
  const ModeTransform t(Eigen::MatrixXcd::Identity(2, 2), {{'h', Polarization::H}, {'h', Polarization::V}});
  const FockState s = FockState::vacuum(small_register()).create(aH);
  EXPECT_THROW(apply_transform(s, t), std::invalid_argument);
}

TEST(Fock, OverlapIsOrthonormalAndConjugateSymmetric) {
  const FockState vac = FockState::vacuum(small_register());
  const FockState one = vac.create(aH);
  const FockState other = vac.create(aV);
  EXPECT_NEAR(std::abs(overlap(one, one) - Complex(1.0)), 0.0, 1e-15);
  EXPECT_EQ(overlap(one, other), Complex(0.0));
  const FockState mix = (one * Complex(0.6, 0.0) + other * Complex(0.0, 0.8));
  EXPECT_EQ(overlap(mix, one), std::conj(overlap(one, mix)));
  EXPECT_THROW(overlap(one, FockState::vacuum(setup_register())), std::invalid_argument);
}

TEST(Fock, SourceStateIsNormalized) {
  EXPECT_NEAR(std::abs(overlap(spdc_second_order(), spdc_second_order())), 1.0, 1e-14);
}

TEST(Fock, PostselectEmptyComponentGivesZeroProbability) {
  const FockState s = FockState::vacuum(small_register()).create(eH).create(eH).normalized();
  const PostselectResult r = postselect(s, {{'e', 1}, {'f', 1}});
  EXPECT_EQ(r.probability, 0.0);
  EXPECT_TRUE(r.state.empty());
}

TEST(Fock, PostselectRejectsUnknownSpatialMode) {
  const FockState s = FockState::vacuum(small_register()).create(eH);
  EXPECT_THROW(postselect(s, {{'z', 1}}), std::invalid_argument);
}

// Properties over random unitaries and random few-photon states.
class FockProperties : public ::testing::TestWithParam<int> {};

namespace {

Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd z(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) z(r, c) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  return qr.householderQ();
}

FockState random_state(std::mt19937_64& rng, const ModeRegister& reg, int photons) {
  std::uniform_int_distribution<std::size_t> pick(0, reg.size() - 1);
  std::normal_distribution<double> g;
  FockState s(reg);
  for (int t = 0; t < 4; ++t) {
    FockState term = FockState::vacuum(reg);
    for (int p = 0; p < photons; ++p) term = term.create(reg[pick(rng)]);
    s += term * Complex(g(rng), g(rng));
  }
  return s.normalized();
}

}  // namespace

TEST_P(FockProperties, NormNumberAndComposition) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(GetParam()));
  const ModeRegister reg = small_register();
  const FockState s = random_state(rng, reg, 3);
  const ModeTransform u(random_unitary(4, rng), reg.modes());
  const ModeTransform v(random_unitary(4, rng), reg.modes());

  const FockState us = apply_transform(s, u);
  EXPECT_NEAR(us.squared_norm(), 1.0, 1e-12);
  for (const auto& [o, amp] : us.terms()) EXPECT_EQ(photon_count(o), 3);

  const FockState vus = apply_transform(us, v);
  const ModeTransform vu(v.matrix() * u.matrix(), reg.modes());
  EXPECT_LE(max_amplitude_difference(vus, apply_transform(s, vu)), 1e-12);
}

INSTANTIATE_TEST_SUITE_P(Seeds, FockProperties, ::testing::Range(1, 21));
