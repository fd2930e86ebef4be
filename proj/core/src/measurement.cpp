#include "fourphoton/measurement.hpp"

#include <cmath>
#include <stdexcept>

namespace fourphoton {

namespace {

const Complex kI(0.0, 1.0);

// sigma |b> = phase |b'> for a single qubit with bit b.
struct PauliAction {
  int flip;
  Complex phase[2];
};

PauliAction action_of(Pauli p) {
  switch (p) {
    case Pauli::I: return {0, {1.0, 1.0}};
    case Pauli::X: return {1, {1.0, 1.0}};
    case Pauli::Y: return {1, {kI, -kI}};  // Y|0> = i|1>, Y|1> = -i|0>
    case Pauli::Z: return {0, {1.0, -1.0}};
  }
  return {0, {1.0, 1.0}};
}

// Rows are <+| and <-| of the measured observable.
Eigen::Matrix2cd basis_rows(Pauli p) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd b;
  switch (p) {
    case Pauli::X: b << r, r, r, -r; break;
    case Pauli::Y: b << r, -kI * r, r, kI * r; break;
    case Pauli::Z: b << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::I: throw std::invalid_argument("a measurement basis cannot be the identity");
  }
  return b;
}

Matrix16 rotation_for(const MeasurementSetting& s) {
  Matrix16 u;
  const Eigen::Matrix2cd m0 = basis_rows(s.bases[0]), m1 = basis_rows(s.bases[1]);
  const Eigen::Matrix2cd m2 = basis_rows(s.bases[2]), m3 = basis_rows(s.bases[3]);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      u(r, c) = m0((r >> 3) & 1, (c >> 3) & 1) * m1((r >> 2) & 1, (c >> 2) & 1) *
                m2((r >> 1) & 1, (c >> 1) & 1) * m3(r & 1, c & 1);
    }
  }
  return u;
}

}  // namespace

char to_char(Pauli p) {
  static constexpr char kChars[4] = {'0', 'x', 'y', 'z'};
  return kChars[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case '0': case 'i': case 'I': return Pauli::I;
    case 'x': case 'X': return Pauli::X;
    case 'y': case 'Y': return Pauli::Y;
    case 'z': case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(std::string("invalid Pauli label '") + c + "'");
  }
}

std::string to_string(const PauliString& s) {
  std::string out;
  for (Pauli p : s) out += to_char(p);
  return out;
}

PauliString parse_pauli_string(std::string_view text) {
  if (text.size() != 4) throw std::invalid_argument("Pauli string must have four characters");
  PauliString s;
  for (std::size_t i = 0; i < 4; ++i) s[i] = pauli_from_char(text[i]);
  return s;
}

std::size_t flat_index(const PauliString& s) {
  std::size_t idx = 0;
  for (Pauli p : s) idx = idx * 4 + static_cast<std::size_t>(p);
  return idx;
}

PauliString pauli_from_flat_index(std::size_t idx) {
  PauliString s;
  for (int q = 3; q >= 0; --q) {
    s[static_cast<std::size_t>(q)] = static_cast<Pauli>(idx % 4);
    idx /= 4;
  }
  return s;
}

Eigen::Matrix2cd pauli_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1.0, 0.0, 0.0, 1.0; break;
    case Pauli::X: m << 0.0, 1.0, 1.0, 0.0; break;
    case Pauli::Y: m << 0.0, -kI, kI, 0.0; break;
    case Pauli::Z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return m;
}

std::string to_string(const MeasurementSetting& s) {
  std::string out;
  for (Pauli p : s.bases) out += to_char(p);
  return out;
}

MeasurementSetting parse_setting(std::string_view text) {
  if (text.size() != 4) throw std::invalid_argument("setting must have four characters from {x,y,z}");
  MeasurementSetting s;
  for (std::size_t i = 0; i < 4; ++i) {
    const Pauli p = pauli_from_char(text[i]);
    if (p == Pauli::I) {
      throw std::invalid_argument("setting must have four characters from {x,y,z}");
    }
    s.bases[i] = p;
  }
  return s;
}

const std::vector<MeasurementSetting>& all_settings() {
  static const std::vector<MeasurementSetting> settings = [] {
    std::vector<MeasurementSetting> v;
    v.reserve(81);
    for (int i = 0; i < 81; ++i) {
      MeasurementSetting s;
      int rest = i;
      for (int q = 3; q >= 0; --q) {
        s.bases[static_cast<std::size_t>(q)] = static_cast<Pauli>(1 + rest % 3);
        rest /= 3;
      }
      v.push_back(s);
    }
    return v;
  }();
  return settings;
}

std::size_t setting_index(const MeasurementSetting& s) {
  std::size_t idx = 0;
  for (Pauli p : s.bases) {
    if (p == Pauli::I) throw std::invalid_argument("setting slot cannot be the identity");
    idx = idx * 3 + (static_cast<std::size_t>(p) - 1);
  }
  return idx;
}

bool covers(const MeasurementSetting& setting, const PauliString& term) {
  for (std::size_t q = 0; q < 4; ++q) {
    if (term[q] != Pauli::I && term[q] != setting.bases[q]) return false;
  }
  return true;
}

std::string outcome_label(std::size_t outcome) {
  std::string s(4, '+');
  for (std::size_t q = 0; q < 4; ++q) {
    if (outcome & (std::size_t{1} << (3 - q))) s[q] = '-';
  }
  return s;
}

std::size_t parse_outcome(std::string_view text) {
  if (text.size() != 4) throw std::invalid_argument("outcome must have four characters from {+,-}");
  std::size_t idx = 0;
  for (char c : text) {
    if (c != '+' && c != '-') throw std::invalid_argument("outcome must have four characters from {+,-}");
    idx = (idx << 1) | (c == '-' ? 1u : 0u);
  }
  return idx;
}

OutcomeProbabilities outcome_probabilities(const DensityMatrix& rho, const MeasurementSetting& s) {
  const Matrix16 u = rotation_for(s);
  const Matrix16 r = u * rho.matrix() * u.adjoint();
  OutcomeProbabilities p{};
  for (int i = 0; i < 16; ++i) p[static_cast<std::size_t>(i)] = r(i, i).real();
  return p;
}

OutcomeProbabilities outcome_probabilities(const QubitState4& psi, const MeasurementSetting& s) {
  const Amplitudes4 v = rotation_for(s) * psi.amplitudes();
  OutcomeProbabilities p{};
  for (int i = 0; i < 16; ++i) p[static_cast<std::size_t>(i)] = std::norm(v(i));
  return p;
}

double expectation_from_outcomes(const OutcomeProbabilities& probs, const PauliString& term) {
  std::size_t mask = 0;
  for (std::size_t q = 0; q < 4; ++q) {
    if (term[q] != Pauli::I) mask |= std::size_t{1} << (3 - q);
  }
  double e = 0.0;
  for (std::size_t o = 0; o < 16; ++o) {
    const bool odd = (__builtin_popcountll(o & mask) & 1) != 0;
    e += odd ? -probs[o] : probs[o];
  }
  return e;
}

namespace {

template <typename F>
Complex accumulate_pauli(const PauliString& s, F&& body) {
  std::size_t flip = 0;
  PauliAction acts[4];
  for (std::size_t q = 0; q < 4; ++q) {
    acts[q] = action_of(s[q]);
    if (acts[q].flip) flip |= std::size_t{1} << (3 - q);
  }
  Complex acc{};
  for (std::size_t b = 0; b < 16; ++b) {
    Complex phase(1.0, 0.0);
    for (std::size_t q = 0; q < 4; ++q) phase *= acts[q].phase[(b >> (3 - q)) & 1];
    acc += body(b, b ^ flip, phase);
  }
  return acc;
}

}  // namespace

Complex pauli_expectation(const DensityMatrix& rho, const PauliString& s) {
  // Tr(rho sigma) = sum_b <b|rho sigma|b> = sum_b phase_b rho(b, b').
  return accumulate_pauli(s, [&](std::size_t b, std::size_t bp, Complex phase) {
    return phase * rho(b, bp);
  });
}

Complex pauli_expectation(const QubitState4& psi, const PauliString& s) {
  return accumulate_pauli(s, [&](std::size_t b, std::size_t bp, Complex phase) {
    return std::conj(psi[bp]) * phase * psi[b];
  });
}

}  // namespace fourphoton
