#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace fourphoton {

using Complex = std::complex<double>;
using Amplitudes4 = Eigen::Matrix<Complex, 16, 1>;
using Matrix16 = Eigen::Matrix<Complex, 16, 16>;

inline constexpr std::size_t kQubits = 4;
inline constexpr std::size_t kDim = 16;

/// Pure polarization state of the four output photons (modes e, f, g, h).
///
/// Basis index bit 3 is qubit e and bit 0 is qubit h; a set bit means V.
/// So |HHVV> = |H>_e |H>_f |V>_g |V>_h has index 0b0011.
class QubitState4 {
 public:
  QubitState4() = default;
  explicit QubitState4(const Amplitudes4& amplitudes) : amps_(amplitudes) {}

  /// Computational basis state from a label such as "HVVH".
  static QubitState4 basis(std::string_view label);
  static std::size_t index_of(std::string_view label);
  static std::string label_of(std::size_t index);

  const Amplitudes4& amplitudes() const { return amps_; }
  Complex operator[](std::size_t i) const { return amps_(static_cast<Eigen::Index>(i)); }

  double squared_norm() const { return amps_.squaredNorm(); }
  bool is_normalized(double tol = 1e-12) const;
  QubitState4 normalized() const;

  /// <this|other>
  Complex inner(const QubitState4& other) const { return amps_.dot(other.amps_); }

  QubitState4 operator+(const QubitState4& o) const { return QubitState4(amps_ + o.amps_); }
  QubitState4 operator*(Complex s) const { return QubitState4(amps_ * s); }

 private:
  Amplitudes4 amps_ = Amplitudes4::Zero();
};

/// |<a|b>|
double overlap_modulus(const QubitState4& a, const QubitState4& b);

/// Four-qubit density matrix in the same basis ordering as QubitState4.
class DensityMatrix {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const Matrix16& m) : m_(m) {}

  static DensityMatrix pure(const QubitState4& psi);
  static DensityMatrix maximally_mixed();

  const Matrix16& matrix() const { return m_; }
  Complex operator()(std::size_t r, std::size_t c) const {
    return m_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }

  Complex trace() const { return m_.trace(); }
  double hermiticity_error() const;
  /// Throws std::invalid_argument unless Hermitian with unit trace within tol.
  void validate(double tol = 1e-9) const;

  /// Ascending eigenvalues of the Hermitian part.
  Eigen::Matrix<double, 16, 1> eigenvalues() const;
  double min_eigenvalue() const { return eigenvalues()(0); }
  double purity() const;

  /// (1 - w) * this + w * other
  DensityMatrix mixed_with(const DensityMatrix& other, double w) const;

 private:
  Matrix16 m_ = Matrix16::Zero();
};

double frobenius_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace fourphoton
