#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <vector>

#include "core.hpp"

namespace maxgraph {

/// How w is realised numerically. `slitwise` is the production branch;
/// `naive_principal` takes a single principal square root of the whole
/// product and exists only as a fault-injection hook (its cuts do not lie
/// on the slits, so surfaces built from it are inconsistent).
enum class BranchMode { slitwise, naive_principal };

/// The hyperelliptic curve w^2 = prod (z - a_k) restricted to the sheet
/// that contains the end, realised as the z-plane cut along the slits
/// [a_{2j}, a_{2j+1}] (0-based), j = 0..n.
class HyperellipticCurve {
 public:
  HyperellipticCurve() = default;

  std::span<const double> branch_points() const { return a_; }
  double branch_point(std::size_t k) const { return a_[k]; }
  std::size_t genus() const { return a_.size() / 2 - 1; }
  std::size_t slit_count() const { return a_.size() / 2; }
  double slit_left(std::size_t j) const { return a_[2 * j]; }
  double slit_right(std::size_t j) const { return a_[2 * j + 1]; }
  double slit_length(std::size_t j) const { return slit_right(j) - slit_left(j); }

  /// a_last - a_first.
  double scale() const { return a_.back() - a_.front(); }
  /// Midpoint of the slit hull.
  double center() const { return 0.5 * (a_.front() + a_.back()); }
  double half_hull() const { return 0.5 * scale(); }

  /// Points closer than this to an open slit need a bank.
  double slit_tolerance() const { return 1e-13 * scale(); }

  /// Path clearance: a quarter of the smallest gap between slits and of the
  /// smallest slit half-length.
  double clearance() const {
    double m = 0.5 * slit_length(0);
    for (std::size_t j = 0; j < slit_count(); ++j) m = std::min(m, 0.5 * slit_length(j));
    for (std::size_t j = 0; j + 1 < slit_count(); ++j)
      m = std::min(m, slit_left(j + 1) - slit_right(j));
    return 0.25 * m;
  }

  /// Slit whose closed interval contains x, if any.
  std::optional<std::size_t> slit_containing(double x) const {
    for (std::size_t j = 0; j < slit_count(); ++j)
      if (x >= slit_left(j) && x <= slit_right(j)) return j;
    return std::nullopt;
  }

  /// Branch point within slit_tolerance of z, if any.
  std::optional<std::size_t> branch_point_near(Complex z) const {
    for (std::size_t k = 0; k < a_.size(); ++k)
      if (std::abs(z - a_[k]) <= slit_tolerance()) return k;
    return std::nullopt;
  }

  /// True when z lies (within tolerance) on the open interior of a slit.
  bool on_open_slit(Complex z) const {
    if (std::fabs(z.imag()) >= slit_tolerance()) return false;
    const double x = z.real();
    for (std::size_t j = 0; j < slit_count(); ++j)
      if (x > slit_left(j) + slit_tolerance() && x < slit_right(j) - slit_tolerance())
        return true;
    return false;
  }

  BranchMode branch_mode() const { return mode_; }
  HyperellipticCurve with_branch_mode(BranchMode m) const {
    HyperellipticCurve c = *this;
    c.mode_ = m;
    return c;
  }

  friend bool operator==(const HyperellipticCurve&, const HyperellipticCurve&) = default;

 private:
  friend HyperellipticCurve make_curve(std::vector<double> a);
  std::vector<double> a_;
  BranchMode mode_ = BranchMode::slitwise;
};

inline HyperellipticCurve make_curve(std::vector<double> a) {
  if (a.size() < 2 || a.size() % 2 != 0) {
    std::ostringstream os;
    os << "branch point list must have even length >= 2, got " << a.size();
    throw ValidationError(os.str());
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!std::isfinite(a[k])) {
      std::ostringstream os;
      os << "branch point at index " << k << " is not finite";
      throw ValidationError(os.str());
    }
    if (k > 0 && !(a[k] > a[k - 1])) {
      std::ostringstream os;
      os << (a[k] == a[k - 1] ? "duplicate" : "non-increasing") << " branch point at index " << k;
      throw ValidationError(os.str());
    }
  }
  HyperellipticCurve c;
  c.a_ = std::move(a);
  return c;
}

namespace detail {

// Principal square root, except that on the negative real axis the sign of
// the imaginary part follows the requested bank.
inline Complex sided_sqrt(Complex u, std::optional<Bank> side) {
  if (side && u.imag() == 0.0 && u.real() < 0.0) {
    const double r = std::sqrt(-u.real());
    return {0.0, *side == Bank::north ? r : -r};
  }
  return std::sqrt(u);
}

// A coordinate plus optional bank, after the on-cut check. Points very close
// to a branch point a_k may carry their offset z - a_k exactly, since z
// itself cannot resolve it in floating point.
struct Resolved {
  Complex z;
  std::optional<Bank> bank;
  std::optional<std::size_t> anchor;
  Complex offset = 0.0;

  Complex minus(const HyperellipticCurve& curve, double a) const {
    if (anchor) return (curve.branch_point(*anchor) - a) + offset;
    return z - a;
  }
};

inline Resolved resolve(const HyperellipticCurve& curve, const Location& p,
                        std::optional<Bank> hint = std::nullopt) {
  if (const auto* s = std::get_if<SlitPoint>(&p)) {
    if (s->slit >= curve.slit_count())
      throw ValidationError("slit index out of range");
    if (s->x < curve.slit_left(s->slit) || s->x > curve.slit_right(s->slit))
      throw ValidationError("slit coordinate outside its slit");
    return {Complex(s->x, 0.0), s->bank, std::nullopt};
  }
  const Complex z = std::get<Complex>(p);
  if (curve.on_open_slit(z)) {
    if (!hint) throw OnCutError("point lies on a slit; a bank must be specified");
    return {Complex(z.real(), 0.0), hint, std::nullopt};
  }
  return {z, std::nullopt, std::nullopt};
}

inline Complex eval_w_resolved(const HyperellipticCurve& curve, const Resolved& r) {
  const auto a = curve.branch_points();
  if (curve.branch_mode() == BranchMode::naive_principal) {
    Complex prod = 1.0;
    for (double ak : a) prod *= r.minus(curve, ak);
    return -std::sqrt(prod);
  }
  Complex w = -1.0;
  for (std::size_t j = 0; j < curve.slit_count(); ++j)
    w *= sided_sqrt(r.minus(curve, a[2 * j]), r.bank) * sided_sqrt(r.minus(curve, a[2 * j + 1]), r.bank);
  return w;
}

}  // namespace detail

/// The branch of sqrt(prod (z - a_k)) on the slit complement with
/// w(z) / z^{n+1} -> -1 at infinity. Throws OnCutError on an open slit.
inline Complex eval_w(const HyperellipticCurve& curve, Complex z) {
  return detail::eval_w_resolved(curve, detail::resolve(curve, z));
}

/// Boundary value of w from the given bank; purely imaginary on open slits.
inline Complex eval_w_on_slit(const HyperellipticCurve& curve, const SlitPoint& p) {
  return detail::eval_w_resolved(curve, detail::resolve(curve, p));
}

inline Complex eval_w(const HyperellipticCurve& curve, const Location& p) {
  return detail::eval_w_resolved(curve, detail::resolve(curve, p));
}

/// Coefficients e[0..num_terms] of w(z) = -z^{n+1} (e0 + e1/z + e2/z^2 + ...),
/// e0 = 1.
inline std::vector<double> laurent_at_infinity(const HyperellipticCurve& curve,
                                               std::size_t num_terms) {
  if (num_terms < 1) throw ValidationError("num_terms must be >= 1");
  const std::size_t len = num_terms + 1;
  // q(t) = prod (1 - a_k t), truncated.
  std::vector<double> q(len, 0.0);
  q[0] = 1.0;
  for (double ak : curve.branch_points())
    for (std::size_t m = len - 1; m >= 1; --m) q[m] -= ak * q[m - 1];
  // e^2 = q, e0 = 1.
  std::vector<double> e(len, 0.0);
  e[0] = 1.0;
  for (std::size_t m = 1; m < len; ++m) {
    double s = q[m];
    for (std::size_t i = 1; i < m; ++i) s -= e[i] * e[m - i];
    e[m] = 0.5 * s;
  }
  return e;
}

}  // namespace maxgraph
