#include "fourphoton/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fourphoton {

namespace {

double sqrt_factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return std::sqrt(f);
}

void require_same_register(const FockState& a, const FockState& b, const char* what) {
  if (!(a.mode_register() == b.mode_register())) {
    throw std::invalid_argument(std::string(what) + ": mode registers differ");
  }
}

}  // namespace

std::string to_string(const ModeLabel& m) {
  std::string s(1, m.spatial);
  s += m.pol == Polarization::H ? "_H" : "_V";
  return s;
}

ModeRegister::ModeRegister(std::vector<ModeLabel> modes) : modes_(std::move(modes)) {
  std::set<ModeLabel> seen;
  for (const auto& m : modes_) {
    if (!seen.insert(m).second) {
      throw std::invalid_argument("duplicate mode label " + to_string(m) + " in register");
    }
  }
}

std::size_t ModeRegister::index_of(const ModeLabel& m) const {
  auto it = std::find(modes_.begin(), modes_.end(), m);
  if (it == modes_.end()) {
    throw std::invalid_argument("unknown mode label " + to_string(m));
  }
  return static_cast<std::size_t>(it - modes_.begin());
}

bool ModeRegister::contains(const ModeLabel& m) const {
  return std::find(modes_.begin(), modes_.end(), m) != modes_.end();
}

int photon_count(const Occupation& occ) {
  int n = 0;
  for (auto k : occ) n += k;
  return n;
}

FockState FockState::vacuum(ModeRegister reg) {
  FockState s(std::move(reg));
  s.terms_.emplace(Occupation(s.reg_.size(), 0), Complex(1.0, 0.0));
  return s;
}

Complex FockState::amplitude(const Occupation& occ) const {
  auto it = terms_.find(occ);
  return it == terms_.end() ? Complex{} : it->second;
}

void FockState::add(const Occupation& occ, Complex amp) {
  if (occ.size() != reg_.size()) {
    throw std::invalid_argument("occupation vector length does not match register");
  }
  terms_[occ] += amp;
}

double FockState::squared_norm() const {
  double n = 0.0;
  for (const auto& [occ, amp] : terms_) n += std::norm(amp);
  return n;
}

FockState FockState::normalized() const {
  const double n = squared_norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize an empty Fock state");
  return *this * Complex(1.0 / std::sqrt(n), 0.0);
}

FockState FockState::create(const ModeLabel& mode) const {
  const std::size_t k = reg_.index_of(mode);
  FockState out(reg_);
  for (const auto& [occ, amp] : terms_) {
    Occupation next = occ;
    next[k] = static_cast<std::uint8_t>(next[k] + 1);
    out.terms_[next] += amp * std::sqrt(static_cast<double>(next[k]));
  }
  return out;
}

void FockState::prune(double eps) {
  std::erase_if(terms_, [eps](const auto& kv) { return std::abs(kv.second) < eps; });
}

FockState& FockState::operator+=(const FockState& other) {
  require_same_register(*this, other, "FockState addition");
  for (const auto& [occ, amp] : other.terms_) terms_[occ] += amp;
  return *this;
}

FockState FockState::operator+(const FockState& other) const {
  FockState r = *this;
  r += other;
  return r;
}

FockState FockState::operator*(Complex s) const {
  FockState r = *this;
  for (auto& [occ, amp] : r.terms_) amp *= s;
  return r;
}

ModeTransform::ModeTransform(Eigen::MatrixXcd matrix, std::vector<ModeLabel> affected)
    : matrix_(std::move(matrix)), affected_(std::move(affected)) {
  if (matrix_.rows() != matrix_.cols() ||
      matrix_.rows() != static_cast<Eigen::Index>(affected_.size())) {
    throw std::invalid_argument("ModeTransform matrix must be square with one row per affected mode");
  }
  std::set<ModeLabel> seen(affected_.begin(), affected_.end());
  if (seen.size() != affected_.size()) {
    throw std::invalid_argument("ModeTransform affected modes must be distinct");
  }
  const double err = unitarity_error(matrix_);
  if (err > kUnitarityTolerance) {
    std::ostringstream os;
    os << "ModeTransform matrix is not unitary: max|U^dag U - I| = " << err << " > "
       << kUnitarityTolerance;
    throw std::invalid_argument(os.str());
  }
}

double ModeTransform::unitarity_error(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd d = m.adjoint() * m - Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  return d.cwiseAbs().maxCoeff();
}

FockState apply_transform(const FockState& state, const ModeTransform& t) {
  const ModeRegister& reg = state.mode_register();
  const std::size_t n_modes = reg.size();

  // Column k of the substitution, in register indices: (target mode, coefficient).
  std::vector<std::vector<std::pair<std::size_t, Complex>>> image(n_modes);
  for (std::size_t k = 0; k < n_modes; ++k) image[k] = {{k, Complex(1.0, 0.0)}};
  std::vector<std::size_t> affected_idx;
  affected_idx.reserve(t.affected().size());
  for (const auto& m : t.affected()) affected_idx.push_back(reg.index_of(m));
  for (std::size_t k = 0; k < affected_idx.size(); ++k) {
    auto& col = image[affected_idx[k]];
    col.clear();
    for (std::size_t l = 0; l < affected_idx.size(); ++l) {
      const Complex u = t.matrix()(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
      if (u != Complex{}) col.emplace_back(affected_idx[l], u);
    }
  }

  FockState out(reg);
  for (const auto& [occ, amp] : state.terms()) {
    // |n> = prod_k (a_k^dag)^{n_k} / sqrt(n_k!) |vac>; expand the monomial.
    double inv_norm = 1.0;
    for (auto nk : occ) inv_norm /= sqrt_factorial(nk);
    std::map<Occupation, Complex> poly{{Occupation(n_modes, 0), amp * inv_norm}};
    for (std::size_t k = 0; k < n_modes; ++k) {
      for (int rep = 0; rep < occ[k]; ++rep) {
        std::map<Occupation, Complex> next;
        for (const auto& [mono, c] : poly) {
          for (const auto& [l, u] : image[k]) {
            Occupation m = mono;
            ++m[l];
            next[m] += c * u;
          }
        }
        poly = std::move(next);
      }
    }
    for (const auto& [mono, c] : poly) {
      double f = 1.0;
      for (auto nk : mono) f *= sqrt_factorial(nk);
      out.add(mono, c * f);
    }
  }
  out.prune();
  return out;
}

namespace {

bool matches(const Occupation& occ, const ModeRegister& reg, const PostselectPattern& pattern) {
  for (const auto& [spatial, want] : pattern) {
    int have = 0;
    for (std::size_t i = 0; i < reg.size(); ++i) {
      if (reg[i].spatial == spatial) have += occ[i];
    }
    if (have != want) return false;
  }
  return true;
}

}  // namespace

FockState project(const FockState& state, const PostselectPattern& pattern) {
  const ModeRegister& reg = state.mode_register();
  for (const auto& [spatial, want] : pattern) {
    if (want < 0) throw std::invalid_argument("post-selection counts must be non-negative");
    bool present = std::any_of(reg.modes().begin(), reg.modes().end(),
                               [s = spatial](const ModeLabel& m) { return m.spatial == s; });
    if (!present) {
      throw std::invalid_argument(std::string("unknown spatial mode '") + spatial +
                                  "' in post-selection pattern");
    }
  }
  FockState out(reg);
  for (const auto& [occ, amp] : state.terms()) {
    if (matches(occ, reg, pattern)) out.add(occ, amp);
  }
  return out;
}

PostselectResult postselect(const FockState& state, const PostselectPattern& pattern) {
  if (std::abs(state.squared_norm() - 1.0) > 1e-9) {
    throw std::invalid_argument("postselect requires a normalized input state");
  }
  FockState selected = project(state, pattern);
  const double p = selected.squared_norm();
  if (p <= 0.0 || selected.empty()) return {FockState(state.mode_register()), 0.0};
  return {selected.normalized(), std::min(p, 1.0)};
}

Complex overlap(const FockState& s1, const FockState& s2) {
  require_same_register(s1, s2, "overlap");
  Complex acc{};
  for (const auto& [occ, amp] : s1.terms()) {
    auto it = s2.terms().find(occ);
    if (it != s2.terms().end()) acc += std::conj(amp) * it->second;
  }
  return acc;
}

}  // namespace fourphoton
