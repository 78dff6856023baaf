#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <queue>
#include <sstream>
#include <vector>

#include "weierstrass.hpp"

namespace maxgraph {

// ---------------------------------------------------------------------------
// Gauss-Kronrod 7/15 on [0, 1], globally adaptive.

namespace gk {

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd-indexed Kronrod nodes (the 7-point Gauss rule).
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace gk

inline double max_abs(Complex v) { return std::fmax(std::fabs(v.real()), std::fabs(v.imag())); }

template <class Value>
struct QuadResult {
  Value value{};
  double error = 0.0;
  std::size_t intervals = 0;
};

/// Adaptive GK15 of f over [lo, hi]. `Value` needs +, -, scalar * and a
/// max_abs overload. The error estimate is |K15 - G7| summed over intervals.
template <class Value, class F>
QuadResult<Value> integrate_adaptive(F&& f, double lo, double hi, double tol,
                                     std::size_t max_intervals = 2000) {
  struct Piece {
    double a, b;
    Value val;
    double err;
    bool operator<(const Piece& o) const { return err < o.err; }
  };
  auto rule = [&](double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    Value k{}, g{};
    const Value fc = f(mid);
    k = fc * gk::kronrod_weights[7];
    g = fc * gk::gauss_weights[3];
    for (int i = 0; i < 7; ++i) {
      const double dx = half * gk::kronrod_nodes[i];
      const Value fsum = f(mid - dx) + f(mid + dx);
      k = k + fsum * gk::kronrod_weights[i];
      if (i % 2 == 1) g = g + fsum * gk::gauss_weights[i / 2];
    }
    k = k * half;
    g = g * half;
    return Piece{a, b, k, max_abs(k - g)};
  };

  std::priority_queue<Piece> heap;
  heap.push(rule(lo, hi));
  Value total = heap.top().val;
  double err = heap.top().err;
  std::size_t count = 1;
  while (err > tol) {
    Piece worst = heap.top();
    const double m = 0.5 * (worst.a + worst.b);
    if (count >= max_intervals || !(m > worst.a && m < worst.b) ||
        std::fabs(worst.b - worst.a) < 1e-15 * std::fabs(hi - lo)) {
      std::ostringstream os;
      os << "quadrature tolerance not met: requested " << tol << ", achieved " << err;
      throw QuadratureError(os.str(), err);
    }
    heap.pop();
    Piece left = rule(worst.a, m), right = rule(m, worst.b);
    total = total - worst.val + left.val + right.val;
    err += left.err + right.err - worst.err;
    heap.push(left);
    heap.push(right);
    ++count;
    if (err <= tol) {
      // re-sum to drop accumulated cancellation in the running totals
      Value t{};
      double e = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        t = t + copy.top().val;
        e += copy.top().err;
        copy.pop();
      }
      total = t;
      err = e;
    }
  }
  return {total, err, count};
}

// ---------------------------------------------------------------------------
// Form integrals along polylines in the slit complement.

/// (int f1 dz, int f2 dz, int f3 dz).
struct Triple {
  std::array<Complex, 3> v{};

  Complex& operator[](std::size_t i) { return v[i]; }
  const Complex& operator[](std::size_t i) const { return v[i]; }
  friend Triple operator+(Triple a, const Triple& b) {
    for (int i = 0; i < 3; ++i) a.v[i] += b.v[i];
    return a;
  }
  friend Triple operator-(Triple a, const Triple& b) {
    for (int i = 0; i < 3; ++i) a.v[i] -= b.v[i];
    return a;
  }
  friend Triple operator*(Triple a, double s) {
    for (auto& x : a.v) x *= s;
    return a;
  }
  Vec3 real() const { return {v[0].real(), v[1].real(), v[2].real()}; }
};

inline double max_abs(const Triple& t) {
  double m = 0.0;
  for (const auto& x : t.v) m = std::fmax(m, std::fmax(std::fabs(x.real()), std::fabs(x.imag())));
  return m;
}

struct QuadratureOptions {
  double tol = 1e-10;  // absolute, per component, per path
  std::size_t max_intervals = 2000;
};

struct FormIntegral {
  Triple value;
  double error = 0.0;
};

/// Slit-avoiding polyline. Only the first and last vertices may sit on a
/// slit (as SlitPoints) or at a branch point.
class IntegrationPath {
 public:
  IntegrationPath() = default;

  /// Validates that no segment meets a closed slit except at the path's own
  /// end vertices.
  IntegrationPath(const HyperellipticCurve& curve, std::vector<Location> vertices)
      : vertices_(std::move(vertices)) {
    validate(curve);
  }

  const std::vector<Location>& vertices() const { return vertices_; }
  std::size_t segment_count() const { return vertices_.empty() ? 0 : vertices_.size() - 1; }
  bool empty() const { return segment_count() == 0; }

 private:
  void validate(const HyperellipticCurve& curve) const {
    if (vertices_.size() < 1) throw ValidationError("path needs at least one vertex");
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
      const bool inner = i != 0 && i + 1 != vertices_.size();
      const Complex z = coordinate(vertices_[i]);
      if (inner && (std::holds_alternative<SlitPoint>(vertices_[i]) || touches_slit(curve, z)))
        throw ValidationError("interior path vertex lies on a slit");
      if (!inner) detail::resolve(curve, vertices_[i]);  // throws on unresolved cut points
    }
    for (std::size_t i = 0; i + 1 < vertices_.size(); ++i) {
      const Complex p = coordinate(vertices_[i]), q = coordinate(vertices_[i + 1]);
      if (p == q) throw ValidationError("consecutive path vertices coincide");
      if (segment_crosses_slit(curve, p, q))
        throw ValidationError("path segment crosses a slit");
    }
  }

  static bool touches_slit(const HyperellipticCurve& curve, Complex z) {
    if (std::fabs(z.imag()) > curve.slit_tolerance()) return false;
    return curve.slit_containing(z.real()).has_value() ||
           curve.branch_point_near(z).has_value();
  }

  // Does the open segment (p, q) meet any closed slit?
  static bool segment_crosses_slit(const HyperellipticCurve& curve, Complex p, Complex q) {
    const double eps = curve.slit_tolerance();
    const double py = p.imag(), qy = q.imag();
    if (std::fabs(py) <= eps && std::fabs(qy) <= eps) {
      // along the real axis: must not overlap any slit beyond endpoints
      const double lo = std::min(p.real(), q.real()), hi = std::max(p.real(), q.real());
      for (std::size_t j = 0; j < curve.slit_count(); ++j)
        if (hi > curve.slit_left(j) + eps && lo < curve.slit_right(j) - eps) return true;
      return false;
    }
    if ((py > eps && qy > eps) || (py < -eps && qy < -eps)) return false;
    if (std::fabs(py) <= eps || std::fabs(qy) <= eps) return false;  // touches axis only at an end
    const double t = py / (py - qy);
    const double x = p.real() + t * (q.real() - p.real());
    return curve.slit_containing(x).has_value();
  }

  std::vector<Location> vertices_;
};

namespace detail {

// Which half plane a location belongs to: +1 upper/North, -1 lower/South,
// 0 real axis off the slits.
inline int side_of(const HyperellipticCurve& curve, const Location& p) {
  if (const auto* s = std::get_if<SlitPoint>(&p)) return s->bank == Bank::north ? 1 : -1;
  const Complex z = std::get<Complex>(p);
  if (z.imag() > curve.slit_tolerance()) return 1;
  if (z.imag() < -curve.slit_tolerance()) return -1;
  return 0;
}

inline double distance_to_slits(const HyperellipticCurve& curve, Complex z) {
  double d = INFINITY;
  for (std::size_t j = 0; j < curve.slit_count(); ++j) {
    const double x = std::clamp(z.real(), curve.slit_left(j), curve.slit_right(j));
    d = std::min(d, std::abs(z - Complex(x, 0.0)));
  }
  return d;
}

// Minimum distance from the closed segment [p, q] to the slits, sampled
// exactly at the slit endpoints and the axis crossing.
inline double segment_clearance(const HyperellipticCurve& curve, Complex p, Complex q) {
  double d = std::min(distance_to_slits(curve, p), distance_to_slits(curve, q));
  const Complex dq = q - p;
  const double len2 = std::norm(dq);
  for (double a : curve.branch_points()) {
    const double t = std::clamp(((Complex(a, 0.0) - p) * std::conj(dq)).real() / len2, 0.0, 1.0);
    d = std::min(d, distance_to_slits(curve, p + t * dq));
  }
  if ((p.imag() > 0) != (q.imag() > 0) && p.imag() != q.imag()) {
    const double t = p.imag() / (p.imag() - q.imag());
    d = std::min(d, distance_to_slits(curve, p + t * dq));
  }
  return d;
}

}  // namespace detail

/// Deterministic slit-avoiding route between two locations.
///
/// Plain points with clearance >= delta along the straight segment (and no
/// crossing of the real axis left of the last slit) are joined directly.
/// Otherwise both ends are lifted vertically to height +-delta; the route
/// stays in the upper half plane when both ends have Im >= 0, in the lower
/// one when both have Im <= 0, and passes the real axis to the right of the
/// last slit otherwise.
inline IntegrationPath plan_path(const HyperellipticCurve& curve, const Location& from,
                                 const Location& to) {
  const double delta = curve.clearance();
  const Complex p = coordinate(from), q = coordinate(to);
  if (p == q && from.index() == to.index()) {
    if (const auto* a = std::get_if<SlitPoint>(&from)) {
      const auto* b = std::get_if<SlitPoint>(&to);
      if (a->bank == b->bank) return IntegrationPath(curve, {from});
    } else {
      return IntegrationPath(curve, {from});
    }
  }
  const bool plain = std::holds_alternative<Complex>(from) && std::holds_alternative<Complex>(to);
  const double right = curve.slit_right(curve.slit_count() - 1);
  if (plain && !curve.branch_point_near(p) && !curve.branch_point_near(q)) {
    bool crosses_left = false;
    if ((p.imag() > 0) != (q.imag() > 0) && p.imag() != q.imag()) {
      const double t = p.imag() / (p.imag() - q.imag());
      crosses_left = (p + t * (q - p)).real() <= right;
    }
    if (!crosses_left && detail::segment_clearance(curve, p, q) >= delta)
      return IntegrationPath(curve, {from, to});
  }

  const int sp = detail::side_of(curve, from), sq = detail::side_of(curve, to);
  auto lift = [&](Complex z, double s) { return Complex(z.real(), s * delta); };
  auto needs_lift = [&](Complex z) { return std::fabs(z.imag()) < delta; };

  std::vector<Location> v{from};
  auto push = [&](Complex z) {
    if (coordinate(v.back()) != z) v.emplace_back(z);
  };
  if (sp >= 0 && sq >= 0) {
    if (needs_lift(p)) push(lift(p, 1.0));
    if (needs_lift(q)) push(lift(q, 1.0));
  } else if (sp <= 0 && sq <= 0) {
    if (needs_lift(p)) push(lift(p, -1.0));
    if (needs_lift(q)) push(lift(q, -1.0));
  } else {
    const double s = sp > 0 ? 1.0 : -1.0;
    const double xr = right + delta;
    if (needs_lift(p)) push(lift(p, s));
    push(Complex(xr, s * delta));
    push(Complex(xr, -s * delta));
    if (needs_lift(q)) push(lift(q, -s));
  }
  v.push_back(to);
  return IntegrationPath(curve, std::move(v));
}

namespace detail {

inline bool at_branch_point(const HyperellipticCurve& curve, const Location& p) {
  return curve.branch_point_near(coordinate(p)).has_value();
}

inline std::optional<Bank> bank_of(const Location& p) {
  if (const auto* s = std::get_if<SlitPoint>(&p)) return s->bank;
  return std::nullopt;
}

// int_{from}^{to} f dz along a straight segment; a branch-point start is
// handled by z = from + (to - from) s^2.
inline QuadResult<Triple> integrate_segment_from(const WeierstrassData& data, const Location& from,
                                                 const Location& to, bool singular_start,
                                                 double tol, std::size_t max_intervals) {
  const Complex za = coordinate(from), zb = coordinate(to);
  const Complex dz = zb - za;
  // Points grazing a slit take the bank of whichever segment end is a slit point.
  const std::optional<Bank> hint = bank_of(to) ? bank_of(to) : bank_of(from);
  auto eval = [&](Complex z) {
    const FormTriple f = data.forms(detail::resolve(data.curve(), z, hint));
    Triple t;
    t[0] = f.f1;
    t[1] = f.f2;
    t[2] = f.f3;
    return t;
  };
  if (singular_start) {
    const auto k = *data.curve().branch_point_near(za);
    auto weighted = [&](double s) {
      const Complex off = dz * (s * s);
      detail::Resolved r{za + off, std::nullopt, k, off};
      if (std::fabs(r.z.imag()) < data.curve().slit_tolerance()) r.bank = hint;
      const FormTriple f = data.forms(r);
      Triple t;
      t[0] = f.f1;
      t[1] = f.f2;
      t[2] = f.f3;
      const Complex jac = 2.0 * s * dz;
      for (auto& x : t.v) x *= jac;
      return t;
    };
    return integrate_adaptive<Triple>(weighted, 0.0, 1.0, tol, max_intervals);
  }
  auto regular = [&](double s) {
    Triple t = eval(za + dz * s);
    for (auto& x : t.v) x *= dz;
    return t;
  };
  return integrate_adaptive<Triple>(regular, 0.0, 1.0, tol, max_intervals);
}

}  // namespace detail

/// Integral of one straight segment, with square-root substitution at
/// branch-point ends.
inline FormIntegral integrate_segment(const WeierstrassData& data, const Location& from,
                                      const Location& to, double tol,
                                      std::size_t max_intervals = 2000) {
  const auto& curve = data.curve();
  const bool sa = detail::at_branch_point(curve, from);
  const bool sb = detail::at_branch_point(curve, to);
  if (sa && sb) {
    const Location mid = Complex(0.5 * (coordinate(from) + coordinate(to)));
    if (curve.on_open_slit(coordinate(mid)))
      throw ValidationError("segment between branch points runs along a slit");
    const auto r1 = detail::integrate_segment_from(data, from, mid, true, 0.5 * tol, max_intervals);
    const auto r2 = detail::integrate_segment_from(data, to, mid, true, 0.5 * tol, max_intervals);
    return {r1.value - r2.value, r1.error + r2.error};
  }
  if (sb) {
    const auto r = detail::integrate_segment_from(data, to, from, true, tol, max_intervals);
    return {r.value * -1.0, r.error};
  }
  const auto r = detail::integrate_segment_from(data, from, to, sa, tol, max_intervals);
  return {r.value, r.error};
}

/// (int f1 dz, int f2 dz, int f3 dz) along the path.
inline FormIntegral integrate_forms(const WeierstrassData& data, const IntegrationPath& path,
                                    const QuadratureOptions& opt = {}) {
  FormIntegral out;
  const auto& v = path.vertices();
  if (path.empty()) return out;
  const double seg_tol = opt.tol / static_cast<double>(path.segment_count());
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const auto r = integrate_segment(data, v[i], v[i + 1], seg_tol, opt.max_intervals);
    out.value = out.value + r.value;
    out.error += r.error;
  }
  return out;
}

/// Periods of the three forms around one slit.
struct LoopPeriod {
  std::size_t slit = 0;
  Triple value;
  std::array<double, 3> error{};
};

/// Closed rectangular loop around slit j at clearance delta, oriented as
/// boundary of the slit complement (clockwise around the slit).
inline IntegrationPath slit_loop(const HyperellipticCurve& curve, std::size_t j) {
  if (j >= curve.slit_count()) throw ValidationError("slit index out of range");
  const double d = curve.clearance();
  const double l = curve.slit_left(j) - d, r = curve.slit_right(j) + d;
  return IntegrationPath(curve, {Complex(r, 0.0), Complex(r, -d), Complex(l, -d), Complex(l, d),
                                 Complex(r, d), Complex(r, 0.0)});
}

inline LoopPeriod slit_loop_period(const WeierstrassData& data, std::size_t j,
                                   const QuadratureOptions& opt = {}) {
  const auto res = integrate_forms(data, slit_loop(data.curve(), j), opt);
  LoopPeriod lp;
  lp.slit = j;
  lp.value = res.value;
  lp.error = {res.error, res.error, res.error};
  return lp;
}

}  // namespace maxgraph
