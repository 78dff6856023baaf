#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <vector>

#include "weierstrass.hpp"

namespace maxgraph {

/// Radical inverse of `index` in `base`.
inline double halton(std::size_t index, std::size_t base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

/// `count` deterministic points filling the disk |z - center| < radius,
/// from the (2, 3) Halton sequence starting at index 1.
inline std::vector<Complex> halton_disk(std::size_t count, Complex center, double radius) {
  std::vector<Complex> out;
  out.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    const double r = radius * std::sqrt(halton(i, 2));
    out.push_back(center + std::polar(r, 2.0 * std::numbers::pi * halton(i, 3)));
  }
  return out;
}

/// Interior sample set: Halton points in the disk of radius 1.5 * half hull
/// around the hull midpoint, with points within slit tolerance of a slit
/// dropped.
inline std::vector<Complex> interior_samples(const HyperellipticCurve& curve, std::size_t count) {
  std::vector<Complex> out;
  for (const Complex z : halton_disk(count, Complex(curve.center(), 0.0), 1.5 * curve.half_hull())) {
    if (curve.on_open_slit(z) || curve.branch_point_near(z)) continue;
    out.push_back(z);
  }
  return out;
}

/// Point of slit j's boundary loop at parameter t in [0, 2 pi): the north
/// bank left to right for t < pi, then the south bank back. Cosine spacing
/// keeps the square-root ends smooth in t.
inline SlitPoint slit_boundary_point(const HyperellipticCurve& curve, std::size_t j, double t) {
  const double mid = 0.5 * (curve.slit_left(j) + curve.slit_right(j));
  const double half = 0.5 * curve.slit_length(j);
  const double x = std::clamp(mid - half * std::cos(t), curve.slit_left(j), curve.slit_right(j));
  return {j, x, t < std::numbers::pi ? Bank::north : Bank::south};
}

/// Total change of arg f along t in [t0, t1], tracked adaptively so that no
/// accepted step turns the phase by more than `max_turn`. At least
/// `min_steps` steps are taken. Throws if f vanishes or the step collapses.
inline double phase_change(const std::function<Complex(double)>& f, double t0, double t1,
                           std::size_t min_steps = 512, double max_turn = 0.5) {
  const double h_max = (t1 - t0) / static_cast<double>(min_steps);
  const double h_min = (t1 - t0) * 1e-14;
  double t = t0, h = h_max, total = 0.0;
  Complex ft = f(t0);
  if (ft == 0.0) throw GeometryError("argument principle: function vanishes on the contour");
  while (t < t1) {
    const double tn = std::min(t1, t + h);
    const Complex fn = f(tn);
    if (fn == 0.0) throw GeometryError("argument principle: function vanishes on the contour");
    const double turn = std::arg(fn / ft);
    if (std::fabs(turn) > max_turn) {
      h *= 0.5;
      if (h < h_min) throw GeometryError("argument principle: phase step did not resolve");
      continue;
    }
    total += turn;
    t = tn;
    ft = fn;
    h = std::min(h_max, 2.0 * h);
  }
  return total;
}

struct DegreeCount {
  double winding = 0.0;  // raw (n+1)-valued winding sum
  long count = 0;
  double circle_radius = 0.0;
};

/// Number of solutions of g = zeta (|zeta| < 1) on the slit complement by
/// the argument principle on its boundary: a circle about the hull midpoint
/// (grown until |g| < |zeta| / 2 on it, so no roots lie outside) and every
/// slit taken along both banks, where |g| = 1 keeps g - zeta away from 0.
inline DegreeCount gauss_map_degree(const WeierstrassData& data, Complex zeta) {
  if (!(std::abs(zeta) < 1.0)) throw ValidationError("degree target must satisfy |zeta| < 1");
  const auto& curve = data.curve();
  const double pi = std::numbers::pi;
  const Complex m(curve.center(), 0.0);

  DegreeCount out;
  double R = 4.0 * curve.half_hull();
  for (;;) {
    double mx = 0.0;
    for (int k = 0; k < 256; ++k)
      mx = std::max(mx, std::abs(data.g(Location(m + std::polar(R, 2.0 * pi * k / 256.0)))));
    if (mx < 0.5 * std::abs(zeta)) break;
    R *= 2.0;
    if (R > 1e12 * curve.scale()) throw GeometryError("degree check: no root-free outer circle found");
  }
  out.circle_radius = R;
  double total = phase_change(
      [&](double t) { return data.g(Location(m + std::polar(R, t))) - zeta; }, 0.0, 2.0 * pi);
  // The boundary loop runs north bank left to right: clockwise about the
  // slit, i.e. positively for the slit complement.
  for (std::size_t j = 0; j < curve.slit_count(); ++j)
    total += phase_change(
        [&](double t) { return data.g(Location(slit_boundary_point(curve, j, t))) - zeta; }, 0.0,
        2.0 * pi);
  out.winding = total / (2.0 * pi);
  out.count = std::lround(out.winding);
  if (std::fabs(out.winding - static_cast<double>(out.count)) > 0.05) {
    std::ostringstream os;
    os << "degree check: winding " << out.winding << " is not an integer";
    throw GeometryError(os.str());
  }
  return out;
}

/// Points of slit j's boundary where g = e^{i theta}: exact hits plus sign
/// changes of arg(g e^{-i theta}) through 0 on a dense parameter grid.
inline std::size_t boundary_unit_preimages(const WeierstrassData& data, std::size_t j,
                                           std::size_t nodes = 4096) {
  const auto& curve = data.curve();
  const Complex rot = std::polar(1.0, -data.theta());
  std::size_t hits = 0;
  double prev = 0.0;
  bool have_prev = false;
  for (std::size_t k = 0; k < nodes; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
    const Complex v = rot * data.g(Location(slit_boundary_point(curve, j, t)));
    if (std::abs(v - 1.0) < 1e-12) {
      ++hits;
      have_prev = false;
      continue;
    }
    const double a = std::arg(v);
    if (have_prev && (a > 0) != (prev > 0) && std::fabs(a) < 0.5 * std::numbers::pi &&
        std::fabs(prev) < 0.5 * std::numbers::pi)
      ++hits;
    prev = a;
    have_prev = true;
  }
  return hits;
}

struct ArgumentSweep {
  double total_turn = 0.0;     // unwrapped change of arg g around the loop
  std::size_t reversals = 0;   // steps whose turn opposes the net direction
};

/// Sweeps arg g once around slit j (both banks). A boundary component free
/// of critical points gives a strictly monotone argument and one full turn.
inline ArgumentSweep boundary_argument_sweep(const WeierstrassData& data, std::size_t j,
                                             std::size_t nodes = 2048) {
  const auto& curve = data.curve();
  std::vector<double> turns;
  Complex prev = data.g(Location(slit_boundary_point(curve, j, 0.0)));
  for (std::size_t k = 1; k <= nodes; ++k) {
    const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(nodes);
    const Complex v = data.g(Location(slit_boundary_point(curve, j, k == nodes ? 0.0 : t)));
    turns.push_back(std::arg(v / prev));
    prev = v;
  }
  ArgumentSweep s;
  for (double d : turns) s.total_turn += d;
  for (double d : turns)
    if (d * s.total_turn < 0.0 || d == 0.0) ++s.reversals;
  return s;
}

}  // namespace maxgraph
