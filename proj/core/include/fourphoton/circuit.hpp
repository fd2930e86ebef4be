#pragma once

#include <array>
#include <numbers>
#include <string>
#include <vector>

#include "fourphoton/fock.hpp"
#include "fourphoton/qubits.hpp"

namespace fourphoton {

inline constexpr double kGammaMax = std::numbers::pi / 4.0;

/// Throws std::invalid_argument unless 0 <= gamma <= pi/4 (with a 1e-12
/// allowance so that values computed as k*pi/4/n reach the endpoint).
void require_gamma_in_range(double gamma);

/// Sixteen modes a..h x {H,V}, spatial-major.
const ModeRegister& setup_register();

// Optical elements.
//
// Half-wave plate Jones matrix [[cos 2t, sin 2t], [sin 2t, -cos 2t]].
ModeTransform half_wave_plate(char spatial, double theta);
// PBS: a_H -> c_H, b_V -> -c_V, b_H -> d_H, a_V -> d_V (transmit H, reflect V).
ModeTransform polarizing_beam_splitter();
// 50/50 splitter [[1, i], [i, 1]]/sqrt2 sending `in` to (out1, out2) for
// both polarizations; out1/out2 must start in vacuum.
ModeTransform beam_splitter(char in, char out1, char out2);

struct Element {
  std::string name;
  ModeTransform transform;
};

/// HWP(gamma) on a, PBS a,b -> c,d, HWP(pi/4) on c, BS c -> e,f, BS d -> g,h.
std::vector<Element> default_elements(double gamma);

/// One photon in each of e, f, g, h.
PostselectPattern fourfold_pattern();

struct PipelineConfig {
  double gamma = 0.0;
  std::vector<Element> elements;  ///< empty means default_elements(gamma)
  PostselectPattern pattern = fourfold_pattern();
};

struct PipelineResult {
  QubitState4 state;
  double probability = 0.0;
};

/// Normalized n-pair type-II emission (a_H b_V + a_V b_H)^n |vac> / (n! sqrt(n+1)).
FockState spdc_emission(int pairs);

/// The four-photon source state
/// 1/(2 sqrt3) [(a_H b_V)^2 + (a_V b_H)^2 + 2 a_H a_V b_H b_V] |vac>.
FockState spdc_second_order();

/// The three terms of the four-photon source, each carrying its share of
/// the 1/(2 sqrt3) prefactor; they sum to spdc_second_order().
std::array<FockState, 3> spdc_second_order_terms();

FockState propagate(FockState state, const std::vector<Element>& elements);

/// Converts a Fock state with exactly one photon in each of e,f,g,h into
/// polarization amplitudes. Other terms are ignored. No renormalization.
QubitState4 to_qubits(const FockState& state);

/// Makes the largest-magnitude amplitude real and positive (ties go to the
/// lowest basis index).
QubitState4 fix_global_phase(const QubitState4& psi);

PipelineResult run_pipeline(const PipelineConfig& cfg);
PipelineResult run_pipeline(double gamma);

/// Contribution of each source term to the post-selected fourfold outcome.
struct InterferenceDiagnostic {
  double gamma = 0.0;
  std::array<QubitState4, 3> contributions;  ///< unnormalized amplitudes
  std::array<double, 3> magnitudes{};        ///< Euclidean norm of each
};

InterferenceDiagnostic interference_terms(double gamma);

}  // namespace fourphoton
