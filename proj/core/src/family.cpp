#include "fourphoton/family.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/roots.hpp>

#include "fourphoton/analysis.hpp"
#include "fourphoton/circuit.hpp"
#include "fourphoton/errors.hpp"

namespace fourphoton {

namespace {

constexpr double kPi = std::numbers::pi;

double bisect_root(auto&& f, double lo, double hi) {
  std::uintmax_t max_iter = 200;
  // Terminates once the bracket is within a few ulps.
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  auto [a, b] = boost::math::tools::bisect(f, lo, hi, tol, max_iter);
  return 0.5 * (a + b);
}

}  // namespace

QubitState4 bell_pair_product() {
  Amplitudes4 a = Amplitudes4::Zero();
  for (const char* l : {"HVHV", "HVVH", "VHHV", "VHVH"}) {
    a(static_cast<Eigen::Index>(QubitState4::index_of(l))) = 0.5;
  }
  return QubitState4(a);
}

QubitState4 ghz_state() {
  Amplitudes4 a = Amplitudes4::Zero();
  a(static_cast<Eigen::Index>(QubitState4::index_of("HHVV"))) = 1.0 / std::sqrt(2.0);
  a(static_cast<Eigen::Index>(QubitState4::index_of("VVHH"))) = 1.0 / std::sqrt(2.0);
  return QubitState4(a);
}

double family_probability(double gamma) {
  return (5.0 - 4.0 * std::cos(4.0 * gamma) + 3.0 * std::cos(8.0 * gamma)) / 48.0;
}

double family_alpha(double gamma) {
  return 2.0 * std::cos(4.0 * gamma) / std::sqrt(48.0 * family_probability(gamma));
}

QubitState4 family_state_from_alpha(double alpha) {
  if (std::abs(alpha) > 1.0 + 1e-12) throw std::invalid_argument("|alpha| must not exceed 1");
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha * alpha));
  return bell_pair_product() * alpha + ghz_state() * beta;
}

FamilyPoint state_at(double gamma) {
  require_gamma_in_range(gamma);
  FamilyPoint p;
  p.gamma = gamma;
  p.probability = family_probability(gamma);
  p.alpha = std::clamp(family_alpha(gamma), -1.0, 1.0);
  p.state = family_state_from_alpha(p.alpha);
  return p;
}

QubitState4 family_state(double gamma) { return state_at(gamma).state; }

double gamma_for_alpha(double alpha, Branch branch) {
  const double alpha_min = family_alpha(kGammaMax);
  const bool first = branch == Branch::kFirst;
  const double lo_alpha = first ? 0.0 : alpha_min;
  const double hi_alpha = first ? 1.0 : 0.0;
  if (!(alpha >= lo_alpha - 1e-15 && alpha <= hi_alpha + 1e-15)) {
    throw std::domain_error("alpha is not attained on the requested branch");
  }
  if (alpha == 0.0) return kPi / 8.0;
  if (first && alpha >= 1.0) return 0.0;
  if (!first && alpha <= alpha_min) return kGammaMax;

  const double lo = first ? 0.0 : kPi / 8.0;
  const double hi = first ? kPi / 8.0 : kGammaMax;
  const double g = bisect_root([alpha](double x) { return family_alpha(x) - alpha; }, lo, hi);
  if (std::abs(family_alpha(g) - alpha) > 1e-10) {
    throw NumericError("alpha inversion did not converge to 1e-10");
  }
  return g;
}

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    const double s3 = std::sqrt(3.0);
    const double a_sa = std::sqrt((3.0 + s3) / 6.0);
    const double a_sc = std::sqrt((3.0 - s3) / 6.0);
    auto refined = [](std::string name, std::string latex, double alpha, Branch b) {
      return CatalogEntry{std::move(name), std::move(latex), gamma_for_alpha(alpha, b), alpha};
    };
    std::vector<CatalogEntry> v{
        {"psi+psi+", "|\\psi^+\\rangle\\otimes|\\psi^+\\rangle", 0.0, 1.0},
        refined("S^a", "|S^a\\rangle", a_sa, Branch::kFirst),
        {"D4(2)", "|D_4^{(2)}\\rangle", kPi / 12.0, std::sqrt(2.0 / 3.0)},
        refined("S^b", "|S^b\\rangle", std::sqrt(0.5), Branch::kFirst),
        refined("Psi4+", "|\\Psi_4^+\\rangle", std::sqrt(1.0 / 3.0), Branch::kFirst),
        refined("S^c+", "|S^{c+}\\rangle", a_sc, Branch::kFirst),
        {"GHZ", "|GHZ\\rangle", kPi / 8.0, 0.0},
        refined("S^c-", "|S^{c-}\\rangle", -a_sc, Branch::kSecond),
        {"Psi4-", "|\\Psi_4^-\\rangle", kPi / 4.0, -std::sqrt(1.0 / 3.0)},
    };
    std::sort(v.begin(), v.end(),
              [](const CatalogEntry& a, const CatalogEntry& b) { return a.gamma < b.gamma; });
    return v;
  }();
  return entries;
}

const CatalogEntry& catalog_entry(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return e;
  }
  throw std::invalid_argument("unknown catalog entry '" + name + "'");
}

const char* class_name(CorrelationClass c) {
  static constexpr const char* kNames[kNumClasses] = {"i", "ii", "iii", "iv", "v"};
  return kNames[static_cast<int>(c)];
}

std::vector<Crossing> find_crossings() {
  constexpr double kStep = 1e-4;
  constexpr double kMerge = 1e-8;

  const int n = static_cast<int>(std::floor(kGammaMax / kStep));
  std::vector<double> grid;
  for (int k = 1; k <= n; ++k) grid.push_back(k * kStep);
  std::vector<ClassValues> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = correlation_classes(grid[i]);

  struct Root {
    double gamma;
    CorrelationClass a, b;
  };
  std::vector<Root> roots;
  for (int a = 0; a < kNumClasses; ++a) {
    for (int b = a + 1; b < kNumClasses; ++b) {
      auto diff = [a, b](double g) {
        const ClassValues v = correlation_classes(g);
        return v[static_cast<std::size_t>(a)] - v[static_cast<std::size_t>(b)];
      };
      for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double d0 = values[i][static_cast<std::size_t>(a)] - values[i][static_cast<std::size_t>(b)];
        const double d1 =
            values[i + 1][static_cast<std::size_t>(a)] - values[i + 1][static_cast<std::size_t>(b)];
        double root;
        if (d0 == 0.0) {
          root = grid[i];
        } else if (d0 * d1 < 0.0) {
          root = bisect_root(diff, grid[i], grid[i + 1]);
        } else {
          continue;
        }
        roots.push_back({root, static_cast<CorrelationClass>(a), static_cast<CorrelationClass>(b)});
      }
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Root& x, const Root& y) { return x.gamma < y.gamma; });

  std::vector<Crossing> out;
  for (const Root& r : roots) {
    if (!out.empty() && r.gamma - out.back().gamma < kMerge) {
      auto& pairs = out.back().pairs;
      if (std::find(pairs.begin(), pairs.end(), std::pair{r.a, r.b}) == pairs.end()) {
        pairs.emplace_back(r.a, r.b);
      }
      continue;
    }
    Crossing c;
    c.gamma = r.gamma;
    c.alpha = family_alpha(r.gamma);
    c.value = correlation_classes(r.gamma)[static_cast<std::size_t>(r.a)];
    c.pairs.emplace_back(r.a, r.b);
    double best = 5e-4 * kPi;
    for (const auto& e : catalog()) {
      if (std::abs(e.gamma - r.gamma) <= best) {
        best = std::abs(e.gamma - r.gamma);
        c.state_name = e.name;
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace fourphoton
