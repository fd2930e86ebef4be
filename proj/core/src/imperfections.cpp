#include "fourphoton/imperfections.hpp"

#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fourphoton/analysis.hpp"
#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"
#include "fourphoton/family.hpp"

namespace fourphoton {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Matrix16 fourfold_density(const FockState& output, double eta) {
  Matrix16 rho = Matrix16::Zero();
  for (const auto& [lost, branch] : apply_loss(output, eta)) {
    const QubitState4 v = to_qubits(project(branch, fourfold_pattern()));
    rho += v.amplitudes() * v.amplitudes().adjoint();
  }
  return rho;
}

}  // namespace

void NoiseConfig::validate() const {
  if (!(pair_probability >= 0.0 && pair_probability <= kMaxPairProbability)) {
    throw std::invalid_argument("pair_probability must lie in [0, 0.1]");
  }
  if (!(efficiency > 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("efficiency must lie in (0, 1]");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw std::invalid_argument("visibility must lie in [0, 1]");
  }
  if (!(depolarizing_q >= 0.0 && depolarizing_q <= 1.0)) {
    throw std::invalid_argument("depolarizing_q must lie in [0, 1]");
  }
}

std::string to_json(const NoiseConfig& cfg) {
  nlohmann::ordered_json j;
  j["pair_probability"] = cfg.pair_probability;
  j["efficiency"] = cfg.efficiency;
  j["visibility"] = cfg.visibility;
  j["depolarizing_q"] = cfg.depolarizing_q;
  return j.dump(2);
}

NoiseConfig noise_config_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("noise config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("noise config must be a JSON object");
  NoiseConfig cfg;
  for (const auto& [key, value] : j.items()) {
    if (!value.is_number()) throw std::invalid_argument("noise config field '" + key + "' must be a number");
    const double v = value.get<double>();
    if (key == "pair_probability") cfg.pair_probability = v;
    else if (key == "efficiency") cfg.efficiency = v;
    else if (key == "visibility") cfg.visibility = v;
    else if (key == "depolarizing_q") cfg.depolarizing_q = v;
    else throw std::invalid_argument("unknown noise config field '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

std::map<Occupation, FockState> apply_loss(const FockState& state, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw std::invalid_argument("efficiency must lie in (0, 1]");
  const ModeRegister& reg = state.mode_register();
  std::map<Occupation, FockState> branches;
  for (const auto& [occ, amp] : state.terms()) {
    // Odometer over lost[i] in [0, occ[i]].
    Occupation lost(occ.size(), 0);
    while (true) {
      double w = 1.0;
      Occupation kept = occ;
      for (std::size_t i = 0; i < occ.size(); ++i) {
        if (occ[i] == 0) continue;
        const int n = occ[i], k = lost[i];
        w *= binomial(n, k) * std::pow(eta, n - k) * std::pow(1.0 - eta, k);
        kept[i] = static_cast<std::uint8_t>(n - k);
      }
      if (w > 0.0) {
        auto it = branches.try_emplace(lost, reg).first;
        it->second.add(kept, amp * std::sqrt(w));
      }
      std::size_t i = 0;
      for (; i < occ.size(); ++i) {
        if (lost[i] < occ[i]) {
          ++lost[i];
          break;
        }
        lost[i] = 0;
      }
      if (i == occ.size()) break;
    }
  }
  return branches;
}

HigherOrderResult higher_order_fourfolds(double gamma, const NoiseConfig& cfg) {
  require_gamma_in_range(gamma);
  cfg.validate();
  const auto elements = default_elements(gamma);

  // Relative emission weights P(3)/P(2) = (4/3) tau for P(n) ~ (n+1) tau^n.
  const Matrix16 rho2 = fourfold_density(propagate(spdc_emission(2), elements), cfg.efficiency);
  Matrix16 rho3 = Matrix16::Zero();
  if (cfg.pair_probability > 0.0 && cfg.efficiency < 1.0) {
    rho3 = (4.0 / 3.0) * cfg.pair_probability *
           fourfold_density(propagate(spdc_emission(3), elements), cfg.efficiency);
  }
  const Matrix16 total = rho2 + rho3;
  const double tr = total.trace().real();
  if (tr <= 0.0) throw NumericError("no fourfold events survive the configured loss");

  HigherOrderResult r;
  r.rho = DensityMatrix(total / tr);
  r.higher_order_weight = rho3.trace().real() / tr;
  r.fidelity = fidelity(r.rho, gamma);
  return r;
}

DensityMatrix distinguishable_state(double gamma) {
  const InterferenceDiagnostic d = interference_terms(gamma);
  Matrix16 rho = Matrix16::Zero();
  for (const auto& c : d.contributions) rho += c.amplitudes() * c.amplitudes().adjoint();
  const double tr = rho.trace().real();
  if (tr <= 0.0) throw NumericError("distinguishable-photon model has no fourfold events");
  return DensityMatrix(rho / tr);
}

DensityMatrix visibility_noise(const QubitState4& ideal, double gamma, const NoiseConfig& cfg) {
  cfg.validate();
  const DensityMatrix pure = DensityMatrix::pure(ideal.normalized());
  if (cfg.visibility >= 1.0) return pure;
  return pure.mixed_with(distinguishable_state(gamma), 1.0 - cfg.visibility);
}

DensityMatrix depolarize(const DensityMatrix& rho, double q) {
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("depolarizing_q must lie in [0, 1]");
  return rho.mixed_with(DensityMatrix::maximally_mixed(), q);
}

DensityMatrix noisy_state(double gamma, const NoiseConfig& cfg) {
  require_gamma_in_range(gamma);
  cfg.validate();
  DensityMatrix rho = DensityMatrix::pure(family_state(gamma));
  if (cfg.pair_probability > 0.0 && cfg.efficiency < 1.0) {
    rho = higher_order_fourfolds(gamma, cfg).rho;
  }
  if (cfg.visibility < 1.0) {
    rho = rho.mixed_with(distinguishable_state(gamma), 1.0 - cfg.visibility);
  }
  return depolarize(rho, cfg.depolarizing_q);
}

}  // namespace fourphoton
