#include "fourphoton/qubits.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace fourphoton {

std::size_t QubitState4::index_of(std::string_view label) {
  if (label.size() != kQubits) {
    throw std::invalid_argument("basis label must have four characters from {H,V}");
  }
  std::size_t idx = 0;
  for (char c : label) {
    idx <<= 1;
    if (c == 'V') {
      idx |= 1;
    } else if (c != 'H') {
      throw std::invalid_argument("basis label must have four characters from {H,V}");
    }
  }
  return idx;
}

std::string QubitState4::label_of(std::size_t index) {
  std::string s(kQubits, 'H');
  for (std::size_t q = 0; q < kQubits; ++q) {
    if (index & (std::size_t{1} << (kQubits - 1 - q))) s[q] = 'V';
  }
  return s;
}

QubitState4 QubitState4::basis(std::string_view label) {
  Amplitudes4 a = Amplitudes4::Zero();
  a(static_cast<Eigen::Index>(index_of(label))) = 1.0;
  return QubitState4(a);
}

bool QubitState4::is_normalized(double tol) const {
  return std::abs(squared_norm() - 1.0) <= tol;
}

QubitState4 QubitState4::normalized() const {
  const double n = amps_.norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero state");
  return QubitState4(amps_ / n);
}

double overlap_modulus(const QubitState4& a, const QubitState4& b) {
  return std::abs(a.inner(b));
}

DensityMatrix DensityMatrix::pure(const QubitState4& psi) {
  return DensityMatrix(psi.amplitudes() * psi.amplitudes().adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix16::Identity() / static_cast<double>(kDim));
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

void DensityMatrix::validate(double tol) const {
  if (hermiticity_error() > tol) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  const Complex tr = trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > tol) {
    throw std::invalid_argument("density matrix does not have unit trace");
  }
}

Eigen::Matrix<double, 16, 1> DensityMatrix::eigenvalues() const {
  const Matrix16 h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix16> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double DensityMatrix::purity() const {
  return (m_ * m_).trace().real();
}

DensityMatrix DensityMatrix::mixed_with(const DensityMatrix& other, double w) const {
  return DensityMatrix((1.0 - w) * m_ + w * other.m_);
}

double frobenius_distance(const DensityMatrix& a, const DensityMatrix& b) {
  return (a.matrix() - b.matrix()).norm();
}

}  // namespace fourphoton
