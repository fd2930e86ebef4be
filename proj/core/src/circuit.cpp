#include "fourphoton/circuit.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "fourphoton/errors.hpp"

namespace fourphoton {

namespace {

constexpr ModeLabel mode(char s, Polarization p) { return ModeLabel{s, p}; }

const Complex kI(0.0, 1.0);

}  // namespace

void require_gamma_in_range(double gamma) {
  if (!(gamma >= 0.0 && gamma <= kGammaMax + 1e-12)) {
    std::ostringstream os;
    os.precision(12);
    os << "gamma = " << gamma << " rad is outside [0, pi/4] = [0, " << kGammaMax << "]";
    throw std::invalid_argument(os.str());
  }
}

const ModeRegister& setup_register() {
  static const ModeRegister reg = [] {
    std::vector<ModeLabel> modes;
    for (char s = 'a'; s <= 'h'; ++s) {
      modes.push_back(mode(s, Polarization::H));
      modes.push_back(mode(s, Polarization::V));
    }
    return ModeRegister(std::move(modes));
  }();
  return reg;
}

ModeTransform half_wave_plate(char spatial, double theta) {
  Eigen::Matrix2cd j;
  j << std::cos(2 * theta), std::sin(2 * theta),
       std::sin(2 * theta), -std::cos(2 * theta);
  return ModeTransform(j, {mode(spatial, Polarization::H), mode(spatial, Polarization::V)});
}

ModeTransform polarizing_beam_splitter() {
  // Affected order: aH aV bH bV cH cV dH dV. The map is a permutation; the
  // c,d -> a,b half only completes it to a unitary (c,d are empty on input).
  const std::vector<ModeLabel> affected{
      mode('a', Polarization::H), mode('a', Polarization::V), mode('b', Polarization::H),
      mode('b', Polarization::V), mode('c', Polarization::H), mode('c', Polarization::V),
      mode('d', Polarization::H), mode('d', Polarization::V)};
  // column = source, row = destination. The b_V -> c_V reflection carries a
  // sign (Stokes relation); with +1 on both reflections alpha comes out with
  // the opposite sign, i.e. the state differs by Z on e and f.
  const int dest[8] = {4, 7, 6, 5, 0, 3, 2, 1};
  const double sign[8] = {1, 1, 1, -1, 1, -1, 1, 1};
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(8, 8);
  for (int k = 0; k < 8; ++k) u(dest[k], k) = sign[k];
  return ModeTransform(u, affected);
}

ModeTransform beam_splitter(char in, char out1, char out2) {
  // Per polarization, on (in, out1, out2):
  //   in   -> (out1 + i out2)/sqrt2
  //   out1 -> (i out1 + out2)/sqrt2
  //   out2 -> in
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix3cd block;
  block << 0.0, 0.0, 1.0,
           r, kI * r, 0.0,
           kI * r, r, 0.0;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(6, 6);
  u.block<3, 3>(0, 0) = block;
  u.block<3, 3>(3, 3) = block;
  return ModeTransform(u, {mode(in, Polarization::H), mode(out1, Polarization::H),
                           mode(out2, Polarization::H), mode(in, Polarization::V),
                           mode(out1, Polarization::V), mode(out2, Polarization::V)});
}

std::vector<Element> default_elements(double gamma) {
  std::vector<Element> e;
  e.push_back({"HWP(gamma) on a", half_wave_plate('a', gamma)});
  e.push_back({"PBS a,b -> c,d", polarizing_beam_splitter()});
  e.push_back({"HWP(pi/4) on c", half_wave_plate('c', std::numbers::pi / 4.0)});
  e.push_back({"BS c -> e,f", beam_splitter('c', 'e', 'f')});
  e.push_back({"BS d -> g,h", beam_splitter('d', 'g', 'h')});
  return e;
}

PostselectPattern fourfold_pattern() { return {{'e', 1}, {'f', 1}, {'g', 1}, {'h', 1}}; }

FockState spdc_emission(int pairs) {
  if (pairs < 0 || pairs > 4) {
    throw std::invalid_argument("spdc_emission supports 0..4 pairs (at most 8 photons)");
  }
  const FockState vac = FockState::vacuum(setup_register());
  auto apply_pair_creation = [](const FockState& s) {
    const FockState hv = s.create(mode('b', Polarization::V)).create(mode('a', Polarization::H));
    const FockState vh = s.create(mode('b', Polarization::H)).create(mode('a', Polarization::V));
    return hv + vh;
  };
  FockState s = vac;
  double n_fact = 1.0;
  for (int n = 1; n <= pairs; ++n) {
    s = apply_pair_creation(s);
    n_fact *= n;
  }
  return s * Complex(1.0 / (n_fact * std::sqrt(pairs + 1.0)), 0.0);
}

FockState spdc_second_order() { return spdc_emission(2); }

std::array<FockState, 3> spdc_second_order_terms() {
  const FockState vac = FockState::vacuum(setup_register());
  const ModeLabel aH = mode('a', Polarization::H), aV = mode('a', Polarization::V);
  const ModeLabel bH = mode('b', Polarization::H), bV = mode('b', Polarization::V);
  const Complex pre(1.0 / (2.0 * std::sqrt(3.0)), 0.0);
  FockState t1 = vac.create(aH).create(aH).create(bV).create(bV) * pre;
  FockState t2 = vac.create(aV).create(aV).create(bH).create(bH) * pre;
  FockState t3 = vac.create(aH).create(aV).create(bH).create(bV) * (2.0 * pre);
  return {t1, t2, t3};
}

FockState propagate(FockState state, const std::vector<Element>& elements) {
  for (const auto& el : elements) state = apply_transform(state, el.transform);
  return state;
}

QubitState4 to_qubits(const FockState& state) {
  const ModeRegister& reg = state.mode_register();
  const char outputs[4] = {'e', 'f', 'g', 'h'};
  std::size_t h_idx[4], v_idx[4];
  for (int q = 0; q < 4; ++q) {
    h_idx[q] = reg.index_of(mode(outputs[q], Polarization::H));
    v_idx[q] = reg.index_of(mode(outputs[q], Polarization::V));
  }
  Amplitudes4 a = Amplitudes4::Zero();
  for (const auto& [occ, amp] : state.terms()) {
    if (photon_count(occ) != 4) continue;
    std::size_t idx = 0;
    bool ok = true;
    for (int q = 0; q < 4 && ok; ++q) {
      const int nh = occ[h_idx[q]], nv = occ[v_idx[q]];
      if (nh + nv != 1) ok = false;
      idx = (idx << 1) | static_cast<std::size_t>(nv);
    }
    if (ok) a(static_cast<Eigen::Index>(idx)) += amp;
  }
  return QubitState4(a);
}

QubitState4 fix_global_phase(const QubitState4& psi) {
  const Amplitudes4& a = psi.amplitudes();
  const double max_mag = a.cwiseAbs().maxCoeff();
  if (max_mag == 0.0) return psi;
  Eigen::Index pick = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a(i)) >= max_mag - 1e-12) {
      pick = i;
      break;
    }
  }
  const Complex phase = std::conj(a(pick)) / std::abs(a(pick));
  Amplitudes4 out = a * phase;
  out(pick) = Complex(out(pick).real(), 0.0);
  return QubitState4(out);
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  require_gamma_in_range(cfg.gamma);
  const std::vector<Element> elements =
      cfg.elements.empty() ? default_elements(cfg.gamma) : cfg.elements;
  const FockState out = propagate(spdc_second_order(), elements);
  const PostselectResult sel = postselect(out, cfg.pattern);
  if (sel.probability <= 0.0) {
    throw NumericError("post-selection probability is zero for gamma in [0, pi/4]");
  }
  const QubitState4 q = to_qubits(sel.state);
  if (!q.is_normalized(1e-10)) {
    throw NumericError("post-selected component is not a four-qubit polarization state");
  }
  return {fix_global_phase(q.normalized()), sel.probability};
}

PipelineResult run_pipeline(double gamma) {
  PipelineConfig cfg;
  cfg.gamma = gamma;
  return run_pipeline(cfg);
}

InterferenceDiagnostic interference_terms(double gamma) {
  require_gamma_in_range(gamma);
  const auto elements = default_elements(gamma);
  const auto terms = spdc_second_order_terms();
  InterferenceDiagnostic d;
  d.gamma = gamma;
  for (std::size_t t = 0; t < 3; ++t) {
    const FockState out = project(propagate(terms[t], elements), fourfold_pattern());
    d.contributions[t] = to_qubits(out);
    d.magnitudes[t] = d.contributions[t].amplitudes().norm();
  }
  return d;
}

}  // namespace fourphoton
