#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "curve.hpp"
#include "polynomial.hpp"

namespace maxgraph {

/// One bit per slit: false selects the left endpoint a_{2j} as b_j, true the
/// right endpoint a_{2j+1}.
class SpinChoice {
 public:
  SpinChoice() = default;
  explicit SpinChoice(std::vector<bool> bits) : bits_(std::move(bits)) {}

  /// Parses a string of '0'/'1' characters, first character = slit 0.
  static SpinChoice parse(const std::string& s) {
    std::vector<bool> bits;
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw ValidationError("spin choice must be a string of 0/1, got '" + s + "'");
      bits.push_back(ch == '1');
    }
    if (bits.empty()) throw ValidationError("empty spin choice");
    return SpinChoice(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  bool operator[](std::size_t j) const { return bits_[j]; }
  const std::vector<bool>& bits() const { return bits_; }

  SpinChoice complement() const {
    std::vector<bool> c(bits_.size());
    for (std::size_t j = 0; j < bits_.size(); ++j) c[j] = !bits_[j];
    return SpinChoice(std::move(c));
  }

  std::string str() const {
    std::string s;
    for (bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
  }

  /// The selected endpoints b_0 < ... < b_n.
  std::vector<double> selected(const HyperellipticCurve& curve) const {
    check(curve);
    std::vector<double> b(size());
    for (std::size_t j = 0; j < size(); ++j) b[j] = bits_[j] ? curve.slit_right(j) : curve.slit_left(j);
    return b;
  }

  /// The endpoints not selected, c_0 < ... < c_n.
  std::vector<double> rejected(const HyperellipticCurve& curve) const {
    return complement().selected(curve);
  }

  void check(const HyperellipticCurve& curve) const {
    if (size() != curve.slit_count()) {
      std::ostringstream os;
      os << "spin choice has " << size() << " bits but the curve has " << curve.slit_count() << " slits";
      throw ValidationError(os.str());
    }
  }

  friend bool operator==(const SpinChoice&, const SpinChoice&) = default;
  friend auto operator<=>(const SpinChoice& x, const SpinChoice& y) { return x.str() <=> y.str(); }

 private:
  std::vector<bool> bits_;
};

/// All 2^{n+1} spin choices, lexicographic in the bit string.
inline std::vector<SpinChoice> enumerate_admissible(const HyperellipticCurve& curve) {
  const std::size_t m = curve.slit_count();
  std::vector<SpinChoice> out;
  out.reserve(std::size_t{1} << m);
  for (std::size_t code = 0; code < (std::size_t{1} << m); ++code) {
    std::vector<bool> bits(m);
    for (std::size_t j = 0; j < m; ++j) bits[j] = (code >> (m - 1 - j)) & 1u;
    out.emplace_back(std::move(bits));
  }
  return out;
}

struct CongruencePair {
  SpinChoice representative;  // bit 0 cleared, i.e. b_0 = a_0
  SpinChoice mirror;          // bitwise complement
};

/// Pairs every choice with its complement. Throws if the list is not closed
/// under complementation.
inline std::vector<CongruencePair> congruence_classes(std::span<const SpinChoice> choices) {
  std::vector<CongruencePair> out;
  for (const auto& t : choices) {
    if (t.size() == 0) throw ValidationError("empty spin choice in list");
    if (t[0]) continue;
    const SpinChoice m = t.complement();
    if (std::find(choices.begin(), choices.end(), m) == choices.end())
      throw ValidationError("choice list is not closed under complement: missing " + m.str());
    out.push_back({t, m});
  }
  for (const auto& t : choices) {
    if (!t[0]) continue;
    const SpinChoice r = t.complement();
    if (std::find(choices.begin(), choices.end(), r) == choices.end())
      throw ValidationError("choice list is not closed under complement: missing " + r.str());
  }
  return out;
}

/// The three integrand densities of X = Re int (f1, f2, f3) dz.
struct FormTriple {
  Complex f1, f2, f3;
};

/// Metric factor lambda^2 = (|f1|^2 + |f2|^2 - |f3|^2) / 2.
inline double metric_factor(const FormTriple& f) {
  return 0.5 * (std::norm(f.f1) + std::norm(f.f2) - std::norm(f.f3));
}

inline Complex isotropy_defect(const FormTriple& f) {
  return f.f1 * f.f1 + f.f2 * f.f2 - f.f3 * f.f3;
}

/// Weierstrass data g = e^{i theta} (w + P) / (w - P),
/// phi3 = A (w / P - P / w) dz, P = prod (z - b_j).
class WeierstrassData {
 public:
  const HyperellipticCurve& curve() const { return curve_; }
  const std::optional<SpinChoice>& tau() const { return tau_; }
  std::span<const double> selected() const { return b_; }
  std::span<const double> rejected() const { return c_; }
  const Polynomial& P() const { return P_; }
  const Polynomial& C() const { return C_; }
  double theta() const { return theta_; }
  double A() const { return A_; }
  /// One selected endpoint per slit.
  bool one_per_slit() const { return paired_; }

  /// S = w / P. For one-per-slit data this is evaluated as
  /// -prod sqrt(z - c_j) / sqrt(z - b_j), which has no cancellation at b_j.
  Complex ratio(const Location& p, std::optional<Bank> hint = std::nullopt) const {
    const auto r = detail::resolve(curve_, p, hint);
    return ratio(r);
  }

  Complex ratio(const detail::Resolved& r) const {
    if (paired_ && curve_.branch_mode() == BranchMode::slitwise) {
      Complex s = -1.0;
      for (std::size_t j = 0; j < b_.size(); ++j)
        s *= detail::sided_sqrt(r.minus(curve_, c_[j]), r.bank) /
             detail::sided_sqrt(r.minus(curve_, b_[j]), r.bank);
      return s;
    }
    return detail::eval_w_resolved(curve_, r) / P_(r.z);
  }

  Complex g(const Location& p, std::optional<Bank> hint = std::nullopt) const {
    const Complex z = coordinate(p);
    const Complex rot = std::polar(1.0, theta_);
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return 0.0;
    if (auto k = curve_.branch_point_near(z)) {
      const double ak = curve_.branch_point(*k);
      if (std::find(b_.begin(), b_.end(), ak) != b_.end()) return rot;
      return -rot;
    }
    const Complex s = ratio(p, hint);
    return rot * (s + 1.0) / (s - 1.0);
  }

  /// Simplified closed forms; f1 = -2iA exactly when theta = 0.
  FormTriple forms(const Location& p, std::optional<Bank> hint = std::nullopt) const {
    const auto r = detail::resolve(curve_, p, hint);
    if (curve_.branch_point_near(r.z))
      throw EndpointSingularityError("endpoint singularity; use weighted quadrature");
    return forms(r);
  }

  /// Quadrature entry point: only an exact hit on a branch point fails.
  FormTriple forms(const detail::Resolved& r) const {
    const Complex s = ratio(r);
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()) || s == 0.0)
      throw EndpointSingularityError("endpoint singularity; use weighted quadrature");
    const Complex inv = 1.0 / s;
    if (theta_ == 0.0)
      return {Complex(0.0, -2.0 * A_), -A_ * (s + inv), A_ * (s - inv)};
    const Complex e = std::polar(1.0, theta_);
    const Complex lo = std::conj(e) * (s - 1.0) * (s - 1.0) * inv;
    const Complex hi = e * (s + 1.0) * (s + 1.0) * inv;
    return {Complex(0.0, 0.5 * A_) * (lo - hi), -0.5 * A_ * (lo + hi), A_ * (s - inv)};
  }

  /// The same densities assembled literally from g, w and P.
  FormTriple forms_unsimplified(const Location& p) const {
    const auto r = detail::resolve(curve_, p);
    if (curve_.branch_point_near(r.z))
      throw EndpointSingularityError("endpoint singularity; use weighted quadrature");
    const Complex w = detail::eval_w_resolved(curve_, r);
    const Complex pz = P_(r.z);
    const Complex gz = std::polar(1.0, theta_) * (w + pz) / (w - pz);
    const Complex h = A_ * (w / pz - pz / w);
    const Complex i(0.0, 1.0);
    return {0.5 * i * (1.0 / gz - gz) * h, -0.5 * (1.0 / gz + gz) * h, h};
  }

  /// Coefficient of log|z| in x3 at the end: A (sum c - sum b).
  double growth() const {
    double s = 0.0;
    for (double v : c_) s += v;
    for (double v : b_) s -= v;
    return A_ * s;
  }

 private:
  friend WeierstrassData build_data(const HyperellipticCurve&, const SpinChoice&, double, double);
  friend WeierstrassData build_data_from_endpoints(const HyperellipticCurve&, std::vector<double>,
                                                   double, double);

  HyperellipticCurve curve_;
  std::optional<SpinChoice> tau_;
  std::vector<double> b_, c_;
  Polynomial P_, C_;
  double theta_ = 0.0;
  double A_ = 1.0;
  bool paired_ = false;
};

inline WeierstrassData build_data(const HyperellipticCurve& curve, const SpinChoice& tau,
                                  double theta = 0.0, double A = 1.0) {
  if (A == 0.0 || !std::isfinite(A)) throw ValidationError("homothety factor A must be a nonzero real");
  if (!std::isfinite(theta)) throw ValidationError("rotation angle must be finite");
  tau.check(curve);
  WeierstrassData d;
  d.curve_ = curve;
  d.tau_ = tau;
  d.b_ = tau.selected(curve);
  d.c_ = tau.rejected(curve);
  d.P_ = Polynomial::from_roots(d.b_);
  d.C_ = Polynomial::from_roots(d.c_);
  d.theta_ = theta;
  d.A_ = A;
  d.paired_ = true;
  return d;
}

/// Builds (g, phi3) from an arbitrary set of n+1 distinct branch points.
/// This admits selections with two points on one slit, which do not give
/// entire graphs; it exists so that such data can be checked and rejected.
inline WeierstrassData build_data_from_endpoints(const HyperellipticCurve& curve,
                                                 std::vector<double> b, double theta = 0.0,
                                                 double A = 1.0) {
  if (A == 0.0 || !std::isfinite(A)) throw ValidationError("homothety factor A must be a nonzero real");
  if (b.size() != curve.slit_count()) throw ValidationError("need exactly n+1 selected branch points");
  std::sort(b.begin(), b.end());
  const auto a = curve.branch_points();
  std::vector<double> c;
  std::vector<int> per_slit(curve.slit_count(), 0);
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::binary_search(b.begin(), b.end(), a[k]))
      ++per_slit[k / 2];
    else
      c.push_back(a[k]);
  }
  if (c.size() != curve.slit_count() || std::adjacent_find(b.begin(), b.end()) != b.end())
    throw ValidationError("selected points must be distinct branch points");
  WeierstrassData d;
  d.curve_ = curve;
  d.paired_ = std::all_of(per_slit.begin(), per_slit.end(), [](int v) { return v == 1; });
  if (d.paired_) {
    std::vector<bool> bits(curve.slit_count());
    for (std::size_t j = 0; j < bits.size(); ++j) bits[j] = b[j] == curve.slit_right(j);
    d.tau_ = SpinChoice(bits);
  }
  d.b_ = std::move(b);
  d.c_ = std::move(c);
  d.P_ = Polynomial::from_roots(d.b_);
  d.C_ = Polynomial::from_roots(d.c_);
  d.theta_ = theta;
  d.A_ = A;
  return d;
}

inline Complex eval_g(const WeierstrassData& d, const Location& p) { return d.g(p); }
inline FormTriple eval_forms(const WeierstrassData& d, const Location& p) { return d.forms(p); }
inline double growth_coefficient(const WeierstrassData& d) { return d.growth(); }

}  // namespace maxgraph
