#include "fourphoton/tomo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"
#include "fourphoton/family.hpp"

namespace fourphoton {

namespace {

const std::array<Matrix16, 256>& pauli_basis() {
  static const std::array<Matrix16, 256> basis = [] {
    std::array<Matrix16, 256> b;
    for (std::size_t i = 0; i < 256; ++i) {
      const PauliString s = pauli_from_flat_index(i);
      const Eigen::Matrix2cd m0 = pauli_matrix(s[0]), m1 = pauli_matrix(s[1]);
      const Eigen::Matrix2cd m2 = pauli_matrix(s[2]), m3 = pauli_matrix(s[3]);
      for (int r = 0; r < 16; ++r) {
        for (int c = 0; c < 16; ++c) {
          b[i](r, c) = m0((r >> 3) & 1, (c >> 3) & 1) * m1((r >> 2) & 1, (c >> 2) & 1) *
                       m2((r >> 1) & 1, (c >> 1) & 1) * m3(r & 1, c & 1);
        }
      }
    }
    return b;
  }();
  return basis;
}

// Index 0..80 -> record, validating completeness.
std::array<const FrequencyRecord*, 81> index_records(const std::vector<FrequencyRecord>& records) {
  std::array<const FrequencyRecord*, 81> by_setting{};
  for (const auto& r : records) {
    const std::size_t i = setting_index(r.setting);
    if (by_setting[i] != nullptr) {
      throw std::invalid_argument("duplicate records for setting " + to_string(r.setting));
    }
    by_setting[i] = &r;
  }
  for (std::size_t i = 0; i < 81; ++i) {
    if (by_setting[i] == nullptr) {
      throw std::invalid_argument("missing setting " + to_string(all_settings()[i]));
    }
  }
  return by_setting;
}

}  // namespace

std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, std::uint64_t shots,
                                         std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("shots per setting must be at least 1");
  rho.validate(1e-9);
  std::vector<CountRecord> out;
  out.reserve(81);
  for (std::size_t si = 0; si < all_settings().size(); ++si) {
    const MeasurementSetting& s = all_settings()[si];
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(si)};
    std::mt19937_64 rng(seq);
    const OutcomeProbabilities p = outcome_probabilities(rho, s);
    CountRecord rec;
    rec.setting = s;
    rec.expected_total = static_cast<double>(shots);
    for (std::size_t o = 0; o < 16; ++o) {
      const double mean = static_cast<double>(shots) * std::max(0.0, p[o]);
      if (mean <= 0.0) continue;
      std::poisson_distribution<std::uint64_t> poisson(mean);
      rec.counts[o] = poisson(rng);
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<CountRecord> simulate_counts(const QubitState4& psi, std::uint64_t shots,
                                         std::uint64_t seed) {
  return simulate_counts(DensityMatrix::pure(psi), shots, seed);
}

std::vector<FrequencyRecord> exact_frequencies(const DensityMatrix& rho) {
  rho.validate(1e-9);
  std::vector<FrequencyRecord> out;
  out.reserve(81);
  for (const auto& s : all_settings()) out.push_back({s, outcome_probabilities(rho, s)});
  return out;
}

std::vector<FrequencyRecord> to_frequencies(const std::vector<CountRecord>& records) {
  std::vector<FrequencyRecord> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    std::uint64_t total = 0;
    for (auto c : r.counts) total += c;
    if (total == 0) {
      throw std::invalid_argument("setting " + to_string(r.setting) + " has no counts");
    }
    FrequencyRecord f;
    f.setting = r.setting;
    for (std::size_t o = 0; o < 16; ++o) {
      f.frequencies[o] = static_cast<double>(r.counts[o]) / static_cast<double>(total);
    }
    out.push_back(f);
  }
  return out;
}

CorrelationTensor estimate_correlations(const std::vector<FrequencyRecord>& records) {
  const auto by_setting = index_records(records);
  CorrelationTensor t;
  for (std::size_t i = 0; i < 256; ++i) {
    const PauliString term = pauli_from_flat_index(i);
    double sum = 0.0;
    int n = 0;
    for (std::size_t si = 0; si < 81; ++si) {
      if (!covers(all_settings()[si], term)) continue;
      sum += expectation_from_outcomes(by_setting[si]->frequencies, term);
      ++n;
    }
    t.at(term) = sum / n;
  }
  return t;
}

DensityMatrix density_from_correlations(const CorrelationTensor& t) {
  Matrix16 rho = Matrix16::Zero();
  const auto& basis = pauli_basis();
  for (std::size_t i = 0; i < 256; ++i) {
    const double v = t.values()[i];
    if (v != 0.0) rho += v * basis[i];
  }
  return DensityMatrix(rho / 16.0);
}

PhysicalProjection project_to_physical(const DensityMatrix& rho) {
  const Matrix16 h = 0.5 * (rho.matrix() + rho.matrix().adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix16> es(h);
  Eigen::Matrix<double, 16, 1> ev = es.eigenvalues();
  double clipped = 0.0;
  for (int i = 0; i < 16; ++i) {
    if (ev(i) < 0.0) {
      clipped -= ev(i);
      ev(i) = 0.0;
    }
  }
  const double tr = ev.sum();
  if (tr <= 0.0) throw NumericError("density estimate has no positive spectrum");
  const Matrix16 v = es.eigenvectors();
  const Matrix16 out = v * (ev / tr).cast<Complex>().asDiagonal() * v.adjoint();
  return {DensityMatrix(out), clipped};
}

DensityMatrix reconstruct(const std::vector<FrequencyRecord>& records, ReconstructionMethod method) {
  const DensityMatrix lin = density_from_correlations(estimate_correlations(records));
  if (method == ReconstructionMethod::kLinearInversion) return lin;
  return project_to_physical(lin).rho;
}

DensityMatrix reconstruct(const std::vector<CountRecord>& records, ReconstructionMethod method) {
  return reconstruct(to_frequencies(records), method);
}

namespace {

TomographyReport finish_report(double gamma, const std::vector<FrequencyRecord>& freqs,
                               ReconstructionMethod method) {
  TomographyReport rep;
  const DensityMatrix lin = density_from_correlations(estimate_correlations(freqs));
  rep.linear_fidelity = fidelity(lin, gamma);
  rep.rho = lin;
  if (method == ReconstructionMethod::kPhysicalProjection) {
    const PhysicalProjection p = project_to_physical(lin);
    rep.rho = p.rho;
    rep.clipped_mass = p.clipped_mass;
    const double f = fidelity(p.rho, gamma);
    if (f < rep.linear_fidelity - rep.clipped_mass - 1e-12) {
      throw NumericError("physical projection lost more fidelity than the clipped mass");
    }
  }
  rep.witness = witness(rep.rho, gamma);
  rep.pairwise = pairwise_witness(rep.rho);
  return rep;
}

}  // namespace

TomographyReport reconstruct_and_report(double gamma, const NoiseConfig& noise, std::uint64_t shots,
                                        std::uint64_t seed, ReconstructionMethod method) {
  require_gamma_in_range(gamma);
  const DensityMatrix truth = noisy_state(gamma, noise);
  if (shots == 0) return finish_report(gamma, exact_frequencies(truth), method);
  std::vector<CountRecord> counts = simulate_counts(truth, shots, seed);
  TomographyReport rep = finish_report(gamma, to_frequencies(counts), method);
  rep.counts = std::move(counts);
  return rep;
}

TomographyReport report_from_counts(double gamma, std::vector<CountRecord> counts,
                                    ReconstructionMethod method) {
  require_gamma_in_range(gamma);
  TomographyReport rep = finish_report(gamma, to_frequencies(counts), method);
  rep.counts = std::move(counts);
  return rep;
}

}  // namespace fourphoton
