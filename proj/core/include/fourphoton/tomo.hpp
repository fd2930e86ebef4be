#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fourphoton/analysis.hpp"
#include "fourphoton/imperfections.hpp"
#include "fourphoton/measurement.hpp"
#include "fourphoton/qubits.hpp"

namespace fourphoton {

struct CountRecord {
  MeasurementSetting setting;
  std::array<std::uint64_t, 16> counts{};  ///< indexed like OutcomeProbabilities
  double expected_total = 0.0;             ///< Poisson mean of the summed counts
};

struct FrequencyRecord {
  MeasurementSetting setting;
  OutcomeProbabilities frequencies{};
};

/// Poisson counts with mean shots * p(outcome) for all 81 settings. Each
/// setting draws from its own stream seeded by (seed, setting index), so
/// results do not depend on evaluation order.
std::vector<CountRecord> simulate_counts(const DensityMatrix& rho, std::uint64_t shots,
                                         std::uint64_t seed);
std::vector<CountRecord> simulate_counts(const QubitState4& psi, std::uint64_t shots,
                                         std::uint64_t seed);

/// Born-rule probabilities for all 81 settings (the infinite-shot limit).
std::vector<FrequencyRecord> exact_frequencies(const DensityMatrix& rho);

/// Relative frequencies per setting. Throws std::invalid_argument when a
/// setting has no counts at all.
std::vector<FrequencyRecord> to_frequencies(const std::vector<CountRecord>& records);

enum class ReconstructionMethod { kLinearInversion, kPhysicalProjection };

/// All 256 Pauli expectations; a term with identities averages over every
/// setting compatible with its non-identity slots. Requires all 81 settings.
CorrelationTensor estimate_correlations(const std::vector<FrequencyRecord>& records);

/// rho = (1/16) sum_ijkl T_ijkl sigma_ijkl
DensityMatrix density_from_correlations(const CorrelationTensor& t);

struct PhysicalProjection {
  DensityMatrix rho;
  double clipped_mass = 0.0;  ///< minus the sum of the negative eigenvalues
};

/// Clips negative eigenvalues and renormalizes the trace.
PhysicalProjection project_to_physical(const DensityMatrix& rho);

DensityMatrix reconstruct(const std::vector<FrequencyRecord>& records, ReconstructionMethod method);
DensityMatrix reconstruct(const std::vector<CountRecord>& records, ReconstructionMethod method);

struct TomographyReport {
  DensityMatrix rho;            ///< reconstructed with the requested method
  WitnessReport witness;        ///< of rho against Psi(gamma)
  double linear_fidelity = 0.0; ///< fidelity before any physical projection
  double clipped_mass = 0.0;
  std::pair<double, double> pairwise{0.0, 0.0};
  std::vector<CountRecord> counts;  ///< empty for the exact-frequency run
};

/// noisy_state -> counts -> reconstruction -> fidelity and witness.
/// shots == 0 uses exact frequencies instead of sampled counts.
TomographyReport reconstruct_and_report(double gamma, const NoiseConfig& noise, std::uint64_t shots,
                                        std::uint64_t seed,
                                        ReconstructionMethod method = ReconstructionMethod::kLinearInversion);

/// Same pipeline starting from recorded counts.
TomographyReport report_from_counts(double gamma, std::vector<CountRecord> counts,
                                    ReconstructionMethod method);

// Count files: CSV, header "setting,outcome,count", one row per outcome.
void write_counts_csv(std::ostream& os, const std::vector<CountRecord>& records);
std::vector<CountRecord> read_counts_csv(std::istream& is);

// Density matrices: {"real": [[16 x 16]], "imag": [[16 x 16]]}, row-major.
std::string density_to_json(const DensityMatrix& rho);
DensityMatrix density_from_json(std::string_view text);

}  // namespace fourphoton
