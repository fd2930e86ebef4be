#pragma once

#include <map>
#include <string>
#include <string_view>

#include "fourphoton/fock.hpp"
#include "fourphoton/qubits.hpp"

namespace fourphoton {

inline constexpr double kMaxPairProbability = 0.1;

/// Knobs for the two fidelity-degrading mechanisms plus white noise.
struct NoiseConfig {
  double pair_probability = 0.0;  ///< tau = tanh^2(r); P(n pairs) ~ (n+1) tau^n
  double efficiency = 1.0;        ///< per-photon detection efficiency, (0, 1]
  double visibility = 1.0;        ///< interference quality, [0, 1]
  double depolarizing_q = 0.0;    ///< white-noise fraction, [0, 1]

  /// Throws std::invalid_argument naming the first out-of-range field.
  void validate() const;
  bool operator==(const NoiseConfig&) const = default;
};

/// JSON object with keys pair_probability, efficiency, visibility,
/// depolarizing_q. Missing keys keep their defaults.
std::string to_json(const NoiseConfig& cfg);
NoiseConfig noise_config_from_json(std::string_view text);

/// Uniform per-mode loss: each photon survives with probability eta.
/// Returns one unnormalized branch per lost-photon configuration.
std::map<Occupation, FockState> apply_loss(const FockState& state, double eta);

struct HigherOrderResult {
  double fidelity = 1.0;             ///< to Psi(gamma), of the normalized fourfold state
  double higher_order_weight = 0.0;  ///< fraction of fourfolds from the six-photon term
  DensityMatrix rho;                 ///< normalized fourfold polarization state
};

/// Second- plus third-order emission through the set-up with loss at the
/// outputs, conditioned on exactly one detected photon in each of e,f,g,h.
HigherOrderResult higher_order_fourfolds(double gamma, const NoiseConfig& cfg);

/// Fourfold state when the source terms add in probability instead of
/// amplitude (fully distinguishable photons at the PBS).
DensityMatrix distinguishable_state(double gamma);

/// V |ideal><ideal| + (1 - V) distinguishable_state(gamma).
DensityMatrix visibility_noise(const QubitState4& ideal, double gamma, const NoiseConfig& cfg);

/// (1 - q) rho + q I/16
DensityMatrix depolarize(const DensityMatrix& rho, double q);

/// Higher-order contamination (when tau > 0 and efficiency < 1), then
/// visibility mixing, then white noise.
DensityMatrix noisy_state(double gamma, const NoiseConfig& cfg);

}  // namespace fourphoton
