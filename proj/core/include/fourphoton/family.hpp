#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fourphoton/qubits.hpp"

namespace fourphoton {

/// (|HV> + |VH>)/sqrt2 on (e,f) times the same on (g,h).
QubitState4 bell_pair_product();
/// (|HHVV> + |VVHH>)/sqrt2
QubitState4 ghz_state();

/// Fourfold success probability (5 - 4 cos4g + 3 cos8g) / 48.
double family_probability(double gamma);
/// Weight of the Bell-pair product: 2 cos4g / sqrt(48 p(g)).
double family_alpha(double gamma);
/// alpha |psi+ psi+> + sqrt(1 - alpha^2) |GHZ>
QubitState4 family_state_from_alpha(double alpha);

struct FamilyPoint {
  double gamma = 0.0;
  double alpha = 0.0;
  double probability = 0.0;
  QubitState4 state;
};

/// Throws std::invalid_argument outside [0, pi/4].
FamilyPoint state_at(double gamma);
QubitState4 family_state(double gamma);

/// alpha decreases monotonically from 1 (g=0) through 0 (g=pi/8) to
/// -sqrt(1/3) (g=pi/4). kFirst is [0, pi/8], kSecond is [pi/8, pi/4].
enum class Branch { kFirst, kSecond };

/// Inverts alpha(gamma) on one branch. Throws std::domain_error when alpha
/// is not attained there.
double gamma_for_alpha(double alpha, Branch branch);

struct CatalogEntry {
  std::string name;       ///< ASCII identifier, e.g. "D4(2)", "S^c-"
  std::string latex;      ///< display form
  double gamma = 0.0;
  double alpha = 0.0;
};

/// The nine distinguished members of the family, sorted by gamma. Entries
/// known only approximately are refined from their closed-form alpha.
const std::vector<CatalogEntry>& catalog();
/// Throws std::invalid_argument for unknown names.
const CatalogEntry& catalog_entry(const std::string& name);

/// Moduli of the five correlation classes, in order:
/// kUniform T_iiii, kZ0Z0 (T_0z0z, T_xyxy), kZZ00 (T_00zz, T_xxyy),
/// kIJIJ (T_ijij), kIIJJ (T_iijj), with i in {0,z} and j in {x,y}.
enum class CorrelationClass { kUniform = 0, kZ0Z0 = 1, kZZ00 = 2, kIJIJ = 3, kIIJJ = 4 };
inline constexpr int kNumClasses = 5;

const char* class_name(CorrelationClass c);  ///< "i" .. "v"

struct Crossing {
  double gamma = 0.0;
  double alpha = 0.0;
  double value = 0.0;  ///< common |T| at the crossing
  std::vector<std::pair<CorrelationClass, CorrelationClass>> pairs;
  std::string state_name;  ///< nearest catalog entry within 5e-4 pi, or empty
};

/// All gamma in (0, pi/4) where two class moduli cross: sign changes of
/// every pairwise difference on a 1e-4 grid, refined by bisection to 1e-10.
/// Roots within 1e-8 of each other are merged.
std::vector<Crossing> find_crossings();

}  // namespace fourphoton
