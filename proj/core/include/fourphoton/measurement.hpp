#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "fourphoton/qubits.hpp"

namespace fourphoton {

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

/// One Pauli factor per qubit (e, f, g, h). Text form uses "0xyz", e.g. "0z0z".
using PauliString = std::array<Pauli, 4>;

char to_char(Pauli p);
Pauli pauli_from_char(char c);
std::string to_string(const PauliString& s);
PauliString parse_pauli_string(std::string_view text);

/// Row-major index into a 4x4x4x4 array: 64 i + 16 j + 4 k + l.
std::size_t flat_index(const PauliString& s);
PauliString pauli_from_flat_index(std::size_t idx);

Eigen::Matrix2cd pauli_matrix(Pauli p);

/// Local measurement bases for the four qubits; each entry is X, Y or Z.
struct MeasurementSetting {
  std::array<Pauli, 4> bases{Pauli::Z, Pauli::Z, Pauli::Z, Pauli::Z};

  bool operator==(const MeasurementSetting&) const = default;
  auto operator<=>(const MeasurementSetting&) const = default;
};

std::string to_string(const MeasurementSetting& s);
/// Parses e.g. "xzyz". Throws std::invalid_argument on anything else.
MeasurementSetting parse_setting(std::string_view text);

/// The 81 settings in lexicographic x < y < z order, qubit e most significant.
const std::vector<MeasurementSetting>& all_settings();
std::size_t setting_index(const MeasurementSetting& s);

/// True when every slot of the term is identity or equals the setting's basis.
bool covers(const MeasurementSetting& setting, const PauliString& term);

/// Outcome bit 3 belongs to qubit e; a set bit is the -1 eigenvalue.
/// In the z basis, + is H and - is V.
using OutcomeProbabilities = std::array<double, 16>;

std::string outcome_label(std::size_t outcome);  ///< e.g. "+-+-"
std::size_t parse_outcome(std::string_view text);

OutcomeProbabilities outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& s);
OutcomeProbabilities outcome_probabilities(const QubitState4& psi, const MeasurementSetting& s);

/// Expectation of a covered Pauli term from outcome statistics of a setting:
/// sum over outcomes of p * product of eigenvalue signs on the non-identity slots.
double expectation_from_outcomes(const OutcomeProbabilities& probs, const PauliString& term);

/// Tr(rho sigma) and <psi|sigma|psi> via bit-flip/phase action.
Complex pauli_expectation(const DensityMatrix& rho, const PauliString& s);
Complex pauli_expectation(const QubitState4& psi, const PauliString& s);

}  // namespace fourphoton
