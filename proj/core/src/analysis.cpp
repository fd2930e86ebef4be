#include "fourphoton/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"

namespace fourphoton {

namespace {

void require_normalized(const QubitState4& psi) {
  if (!psi.is_normalized(1e-9)) throw std::invalid_argument("state is not normalized");
}

PauliString permute(const PauliString& s, const std::array<int, 4>& perm) {
  PauliString out;
  for (std::size_t q = 0; q < 4; ++q) out[q] = s[static_cast<std::size_t>(perm[q])];
  return out;
}

Matrix16 kron4(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b, const Eigen::Matrix2cd& c,
               const Eigen::Matrix2cd& d) {
  Matrix16 m;
  for (int r = 0; r < 16; ++r) {
    for (int col = 0; col < 16; ++col) {
      m(r, col) = a((r >> 3) & 1, (col >> 3) & 1) * b((r >> 2) & 1, (col >> 2) & 1) *
                  c((r >> 1) & 1, (col >> 1) & 1) * d(r & 1, col & 1);
    }
  }
  return m;
}

// Reduced state of qubits (q0, q1) with q0 as the high bit.
Eigen::Matrix4cd reduce_pair(const Matrix16& rho, int q0, int q1) {
  Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
  const int s0 = 3 - q0, s1 = 3 - q1;
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j < 16; ++j) {
      // Traced qubits must agree.
      const int keep_mask = (1 << s0) | (1 << s1);
      if ((i & ~keep_mask) != (j & ~keep_mask)) continue;
      const int ri = (((i >> s0) & 1) << 1) | ((i >> s1) & 1);
      const int rj = (((j >> s0) & 1) << 1) | ((j >> s1) & 1);
      r(ri, rj) += rho(i, j);
    }
  }
  return r;
}

double bell_witness(const Eigen::Matrix4cd& pair) {
  Eigen::Vector4cd psi_plus = Eigen::Vector4cd::Zero();
  psi_plus(1) = psi_plus(2) = 1.0 / std::sqrt(2.0);
  const double f = (psi_plus.adjoint() * pair * psi_plus)(0, 0).real();
  return 0.5 * pair.trace().real() - f;
}

}  // namespace

std::vector<PauliString> CorrelationTensor::nonzero(double tol) const {
  std::vector<PauliString> out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (std::abs(values_[i]) > tol) out.push_back(pauli_from_flat_index(i));
  }
  return out;
}

CorrelationTensor correlations(const QubitState4& psi) {
  require_normalized(psi);
  CorrelationTensor t;
  for (std::size_t i = 0; i < 256; ++i) {
    const PauliString s = pauli_from_flat_index(i);
    t.at(s) = pauli_expectation(psi, s).real();
  }
  return t;
}

CorrelationTensor correlations(const DensityMatrix& rho) {
  rho.validate(1e-9);
  CorrelationTensor t;
  for (std::size_t i = 0; i < 256; ++i) {
    const PauliString s = pauli_from_flat_index(i);
    t.at(s) = pauli_expectation(rho, s).real();
  }
  return t;
}

std::vector<PauliString> permutation_orbit(const PauliString& s) {
  static const std::array<std::array<int, 4>, 3> generators{{
      {2, 3, 0, 1},  // (1,2) <-> (3,4)
      {1, 0, 2, 3},  // (1) <-> (2)
      {0, 1, 3, 2},  // (3) <-> (4)
  }};
  std::set<std::size_t> seen{flat_index(s)};
  std::vector<PauliString> frontier{s};
  while (!frontier.empty()) {
    const PauliString cur = frontier.back();
    frontier.pop_back();
    for (const auto& g : generators) {
      const PauliString next = permute(cur, g);
      if (seen.insert(flat_index(next)).second) frontier.push_back(next);
    }
  }
  std::vector<PauliString> out;
  for (auto idx : seen) out.push_back(pauli_from_flat_index(idx));
  return out;
}

std::vector<PauliString> class_representatives(CorrelationClass c) {
  auto p = [](const char* s) { return parse_pauli_string(s); };
  switch (c) {
    case CorrelationClass::kUniform: return {p("0000"), p("xxxx"), p("yyyy"), p("zzzz")};
    case CorrelationClass::kZ0Z0: return {p("0z0z"), p("xyxy")};
    case CorrelationClass::kZZ00: return {p("00zz"), p("xxyy")};
    case CorrelationClass::kIJIJ: return {p("0x0x"), p("0y0y"), p("zxzx"), p("zyzy")};
    case CorrelationClass::kIIJJ: return {p("00xx"), p("00yy"), p("zzxx"), p("zzyy")};
  }
  return {};
}

std::vector<PauliString> class_members(CorrelationClass c) {
  std::set<std::size_t> idx;
  for (const auto& r : class_representatives(c)) {
    for (const auto& m : permutation_orbit(r)) idx.insert(flat_index(m));
  }
  std::vector<PauliString> out;
  for (auto i : idx) out.push_back(pauli_from_flat_index(i));
  return out;
}

ClassValues class_moduli(const CorrelationTensor& t, double tol) {
  ClassValues v{};
  for (int c = 0; c < kNumClasses; ++c) {
    const auto members = class_members(static_cast<CorrelationClass>(c));
    double lo = std::abs(t[members.front()]), hi = lo;
    for (const auto& m : members) {
      lo = std::min(lo, std::abs(t[m]));
      hi = std::max(hi, std::abs(t[m]));
    }
    if (hi - lo > tol) {
      std::ostringstream os;
      os << "correlation class (" << class_name(static_cast<CorrelationClass>(c))
         << ") members disagree in modulus by " << (hi - lo);
      throw NumericError(os.str());
    }
    v[static_cast<std::size_t>(c)] = std::abs(t[class_representatives(static_cast<CorrelationClass>(c)).front()]);
  }
  return v;
}

ClassValues correlation_classes(double gamma) {
  static const std::vector<PauliString> members = [] {
    std::vector<PauliString> all;
    for (int c = 0; c < kNumClasses; ++c) {
      const auto m = class_members(static_cast<CorrelationClass>(c));
      all.insert(all.end(), m.begin(), m.end());
    }
    return all;
  }();
  const QubitState4 psi = family_state(gamma);
  CorrelationTensor t;
  for (const auto& m : members) t.at(m) = pauli_expectation(psi, m).real();
  return class_moduli(t);
}

double fidelity(const DensityMatrix& rho, const QubitState4& target) {
  rho.validate(1e-9);
  require_normalized(target);
  const Amplitudes4& v = target.amplitudes();
  return (v.adjoint() * rho.matrix() * v)(0, 0).real();
}

double fidelity(const DensityMatrix& rho, double gamma) { return fidelity(rho, family_state(gamma)); }

double fidelity(const QubitState4& psi, double gamma) {
  require_normalized(psi);
  return std::norm(family_state(gamma).inner(psi));
}

const std::array<Bipartition, 7>& bipartitions() {
  // Side containing qubit e (bit q = qubit q): four 1|3 cuts, then three 2|2 cuts.
  static const std::array<Bipartition, 7> cuts{0b0001, 0b1101, 0b1011, 0b0111,
                                               0b0011, 0b0101, 0b1001};
  return cuts;
}

std::vector<double> schmidt_coefficients(const QubitState4& psi, Bipartition side) {
  if ((side & 0xF) == 0 || (side & 0xF) == 0xF) {
    throw std::invalid_argument("bipartition must split the four qubits into non-empty sides");
  }
  std::vector<int> a_qubits, b_qubits;
  for (int q = 0; q < 4; ++q) ((side >> q) & 1 ? a_qubits : b_qubits).push_back(q);
  const int rows = 1 << a_qubits.size(), cols = 1 << b_qubits.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(rows, cols);
  for (int idx = 0; idx < 16; ++idx) {
    int r = 0, c = 0;
    for (int q : a_qubits) r = (r << 1) | ((idx >> (3 - q)) & 1);
    for (int q : b_qubits) c = (c << 1) | ((idx >> (3 - q)) & 1);
    m(r, c) = psi[static_cast<std::size_t>(idx)];
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

double biseparable_bound(const QubitState4& psi) {
  require_normalized(psi);
  double c = 0.0;
  for (auto cut : bipartitions()) {
    const double s = schmidt_coefficients(psi, cut).front();
    c = std::max(c, s * s);
  }
  return c;
}

double biseparable_bound(double gamma) { return biseparable_bound(family_state(gamma)); }

WitnessReport make_witness_report(double c, double fidelity) {
  WitnessReport r;
  r.c = c;
  r.fidelity = fidelity;
  r.witness_value = c - fidelity;
  // Rounding can push c - F a few ulps below zero for biseparable states.
  r.detected = r.witness_value < -kWitnessTolerance;
  return r;
}

WitnessReport witness(const DensityMatrix& rho, double gamma) {
  return make_witness_report(biseparable_bound(gamma), fidelity(rho, gamma));
}

std::pair<double, double> pairwise_witness(const DensityMatrix& rho) {
  rho.validate(1e-9);
  return {bell_witness(reduce_pair(rho.matrix(), 0, 1)), bell_witness(reduce_pair(rho.matrix(), 2, 3))};
}

std::pair<double, double> pairwise_witness(const QubitState4& psi) {
  require_normalized(psi);
  return pairwise_witness(DensityMatrix::pure(psi));
}

SettingCover greedy_cover(const std::vector<PauliString>& terms, double gamma) {
  SettingCover cover;
  cover.gamma = gamma;
  std::vector<PauliString> uncovered = terms;
  const auto& settings = all_settings();
  while (!uncovered.empty()) {
    std::size_t best = 0, best_count = 0;
    for (std::size_t s = 0; s < settings.size(); ++s) {
      const auto count = static_cast<std::size_t>(std::count_if(
          uncovered.begin(), uncovered.end(), [&](const PauliString& t) { return covers(settings[s], t); }));
      if (count > best_count) {
        best = s;
        best_count = count;
      }
    }
    if (best_count == 0) throw NumericError("a Pauli term cannot be covered by any local setting");
    std::vector<PauliString> taken, rest;
    for (const auto& t : uncovered) (covers(settings[best], t) ? taken : rest).push_back(t);
    cover.settings.push_back(settings[best]);
    cover.covered_terms.push_back(std::move(taken));
    uncovered = std::move(rest);
  }
  return cover;
}

SettingCover setting_cover(double gamma) {
  const CorrelationTensor t = correlations(family_state(gamma));
  SettingCover cover = greedy_cover(t.nonzero(1e-10), gamma);
  if (cover.settings.size() > kMaxFidelitySettings) {
    std::ostringstream os;
    os << "fidelity decomposition needs " << cover.settings.size() << " settings (> "
       << kMaxFidelitySettings << ")";
    throw NumericError(os.str());
  }
  return cover;
}

double fidelity_from_settings(const SettingCover& cover, const DensityMatrix& rho) {
  rho.validate(1e-9);
  const CorrelationTensor target = correlations(family_state(cover.gamma));
  double acc = 0.0;
  for (std::size_t i = 0; i < cover.settings.size(); ++i) {
    const OutcomeProbabilities probs = outcome_probabilities(rho, cover.settings[i]);
    for (const auto& term : cover.covered_terms[i]) {
      acc += target[term] * expectation_from_outcomes(probs, term);
    }
  }
  return acc / 16.0;
}

double collective_overlap(const QubitState4& psi, const Eigen::Matrix2cd& u) {
  const Matrix16 m = kron4(u, u, u, u);
  return std::abs(psi.amplitudes().dot(m * psi.amplitudes()));
}

double collective_overlap(const QubitState4& psi, const Eigen::Matrix2cd& u,
                          const std::array<Eigen::Matrix2cd, 4>& frame) {
  std::array<Eigen::Matrix2cd, 4> local;
  for (std::size_t q = 0; q < 4; ++q) local[q] = frame[q] * u * frame[q].adjoint();
  const Matrix16 m = kron4(local[0], local[1], local[2], local[3]);
  return std::abs(psi.amplitudes().dot(m * psi.amplitudes()));
}

Eigen::Matrix2cd haar_unitary(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::Matrix2cd z;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) z(r, c) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(z);
  Eigen::Matrix2cd q = qr.householderQ();
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < 2; ++k) {
    const Complex d = r(k, k);
    q.col(k) *= std::abs(d) > 0.0 ? d / std::abs(d) : Complex(1.0, 0.0);
  }
  return q;
}

double lu_invariance_check(const QubitState4& psi, int trials, std::uint64_t seed,
                           const std::array<Eigen::Matrix2cd, 4>& frame) {
  require_normalized(psi);
  if (trials < 0) throw std::invalid_argument("trials must be non-negative");
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Eigen::Matrix2cd u = haar_unitary(seed, static_cast<std::uint64_t>(t));
    worst = std::max(worst, std::abs(1.0 - collective_overlap(psi, u, frame)));
  }
  return worst;
}

double lu_invariance_check(double gamma, int trials, std::uint64_t seed) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  return lu_invariance_check(family_state(gamma), trials, seed, {id, id, id, id});
}

std::array<Eigen::Matrix2cd, 4> psi4_plus_frame() {
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero(), sd = Eigen::Matrix2cd::Zero();
  s(0, 0) = sd(0, 0) = 1.0;
  s(1, 1) = i;
  sd(1, 1) = -i;
  return {s, s, sd, sd};
}

double three_tangle(const Amplitudes3& a) {
  auto x = [&](int i, int j, int k) { return a(i * 4 + j * 2 + k); };
  const Complex d1 = x(0, 0, 0) * x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 1) +
                     x(0, 0, 1) * x(0, 0, 1) * x(1, 1, 0) * x(1, 1, 0) +
                     x(0, 1, 0) * x(0, 1, 0) * x(1, 0, 1) * x(1, 0, 1) +
                     x(1, 0, 0) * x(1, 0, 0) * x(0, 1, 1) * x(0, 1, 1);
  const Complex d2 = x(0, 0, 0) * x(1, 1, 1) * x(0, 1, 1) * x(1, 0, 0) +
                     x(0, 0, 0) * x(1, 1, 1) * x(1, 0, 1) * x(0, 1, 0) +
                     x(0, 0, 0) * x(1, 1, 1) * x(1, 1, 0) * x(0, 0, 1) +
                     x(0, 1, 1) * x(1, 0, 0) * x(1, 0, 1) * x(0, 1, 0) +
                     x(0, 1, 1) * x(1, 0, 0) * x(1, 1, 0) * x(0, 0, 1) +
                     x(1, 0, 1) * x(0, 1, 0) * x(1, 1, 0) * x(0, 0, 1);
  const Complex d3 = x(0, 0, 0) * x(1, 1, 0) * x(1, 0, 1) * x(0, 1, 1) +
                     x(1, 1, 1) * x(0, 0, 1) * x(0, 1, 0) * x(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

DickeProjection project_last_qubit(const QubitState4& psi, ProjectionBasis basis, int outcome) {
  require_normalized(psi);
  if (outcome != 0 && outcome != 1) throw std::invalid_argument("outcome must be 0 or 1");
  Eigen::Vector2cd v;
  if (basis == ProjectionBasis::kHV) {
    v = outcome == 0 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  } else {
    const double r = 1.0 / std::sqrt(2.0);
    v = outcome == 0 ? Eigen::Vector2cd(r, r) : Eigen::Vector2cd(r, -r);
  }
  Amplitudes3 out;
  for (int i = 0; i < 8; ++i) {
    out(i) = std::conj(v(0)) * psi[static_cast<std::size_t>(2 * i)] +
             std::conj(v(1)) * psi[static_cast<std::size_t>(2 * i + 1)];
  }
  DickeProjection d;
  d.probability = out.squaredNorm();
  if (d.probability <= 1e-15) throw std::domain_error("projection outcome has zero probability");
  d.state = out / std::sqrt(d.probability);
  d.tangle = three_tangle(d.state);
  d.label = d.tangle > kTangleThreshold ? TripartiteClass::kGHZ : TripartiteClass::kW;
  return d;
}

DickeProjection dicke_projection(ProjectionBasis basis, int outcome) {
  return project_last_qubit(family_state(std::numbers::pi / 12.0), basis, outcome);
}

}  // namespace fourphoton
