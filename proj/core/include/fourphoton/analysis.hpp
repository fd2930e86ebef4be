#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "fourphoton/family.hpp"
#include "fourphoton/measurement.hpp"
#include "fourphoton/qubits.hpp"

namespace fourphoton {

/// Real expectations T_ijkl of sigma_i (x) sigma_j (x) sigma_k (x) sigma_l,
/// indices in {0,x,y,z}.
class CorrelationTensor {
 public:
  double operator[](const PauliString& s) const { return values_[flat_index(s)]; }
  double at(const PauliString& s) const { return values_[flat_index(s)]; }
  double& at(const PauliString& s) { return values_[flat_index(s)]; }
  const std::array<double, 256>& values() const { return values_; }

  /// Entries with |T| > tol.
  std::vector<PauliString> nonzero(double tol = 1e-10) const;

 private:
  std::array<double, 256> values_{};
};

/// Throws std::invalid_argument for inputs that are not normalized (1e-9).
CorrelationTensor correlations(const QubitState4& psi);
CorrelationTensor correlations(const DensityMatrix& rho);

/// Images of a term under the group generated by (1,2)<->(3,4), (1)<->(2)
/// and (3)<->(4), acting on qubit positions.
std::vector<PauliString> permutation_orbit(const PauliString& s);

/// Representative terms of each class.
std::vector<PauliString> class_representatives(CorrelationClass c);
/// All members: orbits of the representatives (40 terms over the five classes).
std::vector<PauliString> class_members(CorrelationClass c);

using ClassValues = std::array<double, kNumClasses>;

/// |T| of each class for a tensor. Throws NumericError when members of one
/// class disagree in modulus by more than tol.
ClassValues class_moduli(const CorrelationTensor& t, double tol = 1e-10);
ClassValues correlation_classes(double gamma);

/// <Psi(gamma)| rho |Psi(gamma)>. rho must be Hermitian with unit trace (1e-9).
double fidelity(const DensityMatrix& rho, double gamma);
double fidelity(const QubitState4& psi, double gamma);
double fidelity(const DensityMatrix& rho, const QubitState4& target);

/// Subset of {e,f,g,h} as a bitmask over qubit positions (bit q = qubit q).
/// The seven cuts are represented by the side containing qubit 0.
using Bipartition = std::uint8_t;
const std::array<Bipartition, 7>& bipartitions();

/// Descending Schmidt coefficients of psi across the cut.
std::vector<double> schmidt_coefficients(const QubitState4& psi, Bipartition side);

/// Max over the seven cuts of the largest squared Schmidt coefficient.
double biseparable_bound(const QubitState4& psi);
double biseparable_bound(double gamma);

struct WitnessReport {
  double c = 0.0;
  double fidelity = 0.0;
  double witness_value = 0.0;  ///< c - fidelity
  bool detected = false;       ///< witness_value < -kWitnessTolerance
};

inline constexpr double kWitnessTolerance = 1e-12;

WitnessReport make_witness_report(double c, double fidelity);
WitnessReport witness(const DensityMatrix& rho, double gamma);

/// Tr(W rho_pair) with W = 1/2 - |psi+><psi+| for the (e,f) and (g,h) pairs.
std::pair<double, double> pairwise_witness(const QubitState4& psi);
std::pair<double, double> pairwise_witness(const DensityMatrix& rho);

struct SettingCover {
  double gamma = 0.0;
  std::vector<MeasurementSetting> settings;
  std::vector<std::vector<PauliString>> covered_terms;  ///< newly covered per setting
};

inline constexpr std::size_t kMaxFidelitySettings = 21;

/// Greedy cover of the non-zero Pauli terms of |Psi(gamma)><Psi(gamma)| by
/// local settings; ties go to the lexicographically first setting. Throws
/// NumericError if more than 21 settings are needed.
SettingCover setting_cover(double gamma);
SettingCover greedy_cover(const std::vector<PauliString>& terms, double gamma = 0.0);

/// Fidelity to Psi(gamma) using only the outcome statistics of the cover's
/// settings, each term read from the first setting that covers it.
double fidelity_from_settings(const SettingCover& cover, const DensityMatrix& rho);

/// |<psi| U (x) U (x) U (x) U |psi>|
double collective_overlap(const QubitState4& psi, const Eigen::Matrix2cd& u);
/// Same, with U replaced by F_q U F_q^dag on qubit q.
double collective_overlap(const QubitState4& psi, const Eigen::Matrix2cd& u,
                          const std::array<Eigen::Matrix2cd, 4>& frame);

Eigen::Matrix2cd haar_unitary(std::uint64_t seed, std::uint64_t trial);

/// max over Haar-random U of |1 - |<Psi(gamma)|U^{(x)4}|Psi(gamma)>||.
double lu_invariance_check(double gamma, int trials, std::uint64_t seed);
double lu_invariance_check(const QubitState4& psi, int trials, std::uint64_t seed,
                           const std::array<Eigen::Matrix2cd, 4>& frame);

/// Local frame diag(1,i), diag(1,i), diag(1,-i), diag(1,-i) mapping the
/// family's Psi4- onto Psi4+ (up to sign).
std::array<Eigen::Matrix2cd, 4> psi4_plus_frame();

using Amplitudes3 = Eigen::Matrix<Complex, 8, 1>;

/// Coffman-Kundu-Wootters residual tangle of a normalized three-qubit state.
double three_tangle(const Amplitudes3& psi);

enum class ProjectionBasis { kHV, kPM };
enum class TripartiteClass { kW, kGHZ };

inline constexpr double kTangleThreshold = 1e-6;

struct DickeProjection {
  Amplitudes3 state;
  double probability = 0.0;
  double tangle = 0.0;
  TripartiteClass label = TripartiteClass::kW;
};

/// Projects qubit h of D4(2) = Psi(pi/12) onto outcome 0 (H or +) or 1 (V or -).
DickeProjection dicke_projection(ProjectionBasis basis, int outcome);
DickeProjection project_last_qubit(const QubitState4& psi, ProjectionBasis basis, int outcome);

}  // namespace fourphoton
