#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fourphoton/qubits.hpp"

namespace fourphoton {

enum class Polarization : std::uint8_t { H = 0, V = 1 };

struct ModeLabel {
  char spatial = 'a';
  Polarization pol = Polarization::H;

  auto operator<=>(const ModeLabel&) const = default;
};

std::string to_string(const ModeLabel& m);

/// Ordered list of distinct modes; fixes the occupation-vector layout.
class ModeRegister {
 public:
  ModeRegister() = default;
  explicit ModeRegister(std::vector<ModeLabel> modes);

  std::size_t size() const { return modes_.size(); }
  const ModeLabel& operator[](std::size_t i) const { return modes_[i]; }
  const std::vector<ModeLabel>& modes() const { return modes_; }

  /// Throws std::invalid_argument for labels not in the register.
  std::size_t index_of(const ModeLabel& m) const;
  bool contains(const ModeLabel& m) const;

  bool operator==(const ModeRegister&) const = default;

 private:
  std::vector<ModeLabel> modes_;
};

using Occupation = std::vector<std::uint8_t>;

inline constexpr double kPruneEpsilon = 1e-14;
inline constexpr double kUnitarityTolerance = 1e-12;

/// Superposition of occupation-number basis states over a mode register.
///
/// Occupation vectors are orthonormal: (a^dag)^n |vac> = sqrt(n!) |n>.
/// Terms are kept in a sorted map so iteration order is deterministic.
class FockState {
 public:
  using Terms = std::map<Occupation, Complex>;

  FockState() = default;
  explicit FockState(ModeRegister reg) : reg_(std::move(reg)) {}

  static FockState vacuum(ModeRegister reg);

  const ModeRegister& mode_register() const { return reg_; }
  const Terms& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  Complex amplitude(const Occupation& occ) const;
  /// Adds amp to the coefficient of occ. Throws on a length mismatch.
  void add(const Occupation& occ, Complex amp);

  double squared_norm() const;
  FockState normalized() const;

  /// Applies a^dag on the given mode: |n> -> sqrt(n+1) |n+1>.
  FockState create(const ModeLabel& mode) const;

  /// Drops amplitudes with |amp| < eps.
  void prune(double eps = kPruneEpsilon);

  FockState& operator+=(const FockState& other);
  FockState operator+(const FockState& other) const;
  FockState operator*(Complex s) const;

 private:
  ModeRegister reg_;
  Terms terms_;
};

/// Total number of photons in an occupation vector.
int photon_count(const Occupation& occ);

/// Linear map on creation operators: a_k^dag -> sum_l U(l, k) a_l^dag over
/// the affected modes. Construction validates unitarity.
class ModeTransform {
 public:
  ModeTransform(Eigen::MatrixXcd matrix, std::vector<ModeLabel> affected);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const std::vector<ModeLabel>& affected() const { return affected_; }

  /// max_ij |(U^dag U - I)_ij|
  static double unitarity_error(const Eigen::MatrixXcd& m);

 private:
  Eigen::MatrixXcd matrix_;
  std::vector<ModeLabel> affected_;
};

/// Substitutes every affected creation operator and re-expands into the
/// occupation basis. Preserves the norm and the photon number of each term.
FockState apply_transform(const FockState& state, const ModeTransform& t);

/// Required total photon count per spatial mode (summed over polarization).
using PostselectPattern = std::map<char, int>;

struct PostselectResult {
  FockState state;          ///< renormalized; empty() when probability is 0
  double probability = 0.0; ///< squared norm of the selected component
};

/// Keeps the component matching the pattern. The input must be normalized.
PostselectResult postselect(const FockState& state, const PostselectPattern& pattern);

/// Unnormalized projection onto the pattern (no renormalization).
FockState project(const FockState& state, const PostselectPattern& pattern);

/// <s1|s2>. Throws std::invalid_argument on a register mismatch.
Complex overlap(const FockState& s1, const FockState& s2);

}  // namespace fourphoton
