#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "quadrature.hpp"

namespace maxgraph {

/// Base point on the positive real axis to the right of every slit. With a
/// real base point and theta = 0 the singular plane is exactly {x1 = 0}.
inline Complex default_base_point(const HyperellipticCurve& curve) {
  return {curve.slit_right(curve.slit_count() - 1) + curve.scale(), 0.0};
}

/// X(p) = Re int_{base}^{p} (f1, f2, f3) dz along the planned path.
inline Vec3 eval_X(const WeierstrassData& data, const Location& p, Complex base,
                   const QuadratureOptions& opt = {}) {
  const auto path = plan_path(data.curve(), Location(base), p);
  return integrate_forms(data, path, opt).value.real();
}

struct SlitCollapse {
  Vec3 point;              // mean of the bank samples
  double deviation = 0.0;  // largest coordinate spread among the samples
};

/// Evaluates X at `samples` coordinates of slit j on both banks.
inline SlitCollapse collapse_slit(const WeierstrassData& data, std::size_t j, Complex base,
                                  const QuadratureOptions& opt = {}, std::size_t samples = 16) {
  const auto& c = data.curve();
  const double mid = 0.5 * (c.slit_left(j) + c.slit_right(j)), half = 0.5 * c.slit_length(j);
  Vec3 lo{INFINITY, INFINITY, INFINITY}, hi{-INFINITY, -INFINITY, -INFINITY}, sum{};
  std::size_t count = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    double x = mid + half * std::cos(std::numbers::pi * static_cast<double>(k) /
                                     static_cast<double>(samples - 1));
    if (k == 0) x = c.slit_right(j);
    if (k + 1 == samples) x = c.slit_left(j);
    for (Bank b : {Bank::north, Bank::south}) {
      const Vec3 X = eval_X(data, SlitPoint{j, x, b}, base, opt);
      lo = {std::min(lo.x1, X.x1), std::min(lo.x2, X.x2), std::min(lo.x3, X.x3)};
      hi = {std::max(hi.x1, X.x1), std::max(hi.x2, X.x2), std::max(hi.x3, X.x3)};
      sum += X;
      ++count;
    }
  }
  return {sum * (1.0 / static_cast<double>(count)), max_abs(hi - lo)};
}

/// A sampled entire maximal graph G_tau and its singular set.
struct MaximalGraph {
  WeierstrassData data;
  Complex base_point;
  QuadratureOptions quad;
  std::vector<Vec3> singularities;
  std::vector<double> slit_deviation;
  double growth = 0.0;
};

inline std::vector<SlitCollapse> estimate_singular_points(const WeierstrassData& data, Complex base,
                                                          const QuadratureOptions& opt = {}) {
  std::vector<SlitCollapse> out;
  for (std::size_t j = 0; j < data.curve().slit_count(); ++j)
    out.push_back(collapse_slit(data, j, base, opt));
  return out;
}

/// Builds the graph and its singular points; throws GeometryError when a
/// slit does not collapse to a point within 10 * tol.
inline MaximalGraph build_graph(const WeierstrassData& data, const QuadratureOptions& opt = {},
                                std::optional<Complex> base = std::nullopt) {
  MaximalGraph g{data, base.value_or(default_base_point(data.curve())), opt, {}, {}, data.growth()};
  for (const auto& s : estimate_singular_points(data, g.base_point, opt)) {
    if (s.deviation > 10.0 * opt.tol) {
      std::ostringstream os;
      os << "slit not collapsing: deviation " << s.deviation;
      throw GeometryError(os.str());
    }
    g.singularities.push_back(s.point);
    g.slit_deviation.push_back(s.deviation);
  }
  return g;
}

inline const std::vector<Vec3>& singular_points(const MaximalGraph& g) { return g.singularities; }

inline Vec3 eval_X(const MaximalGraph& g, const Location& p) {
  return eval_X(g.data, p, g.base_point, g.quad);
}

/// Values of X along the closed polygon z_k = center + r e^{2 pi i k / N},
/// chained segment by segment from one path evaluation.
inline std::vector<Vec3> sample_circle(const MaximalGraph& g, Complex center, double r,
                                       std::size_t count) {
  std::vector<Vec3> out(count);
  auto z = [&](std::size_t k) {
    return center + std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                      static_cast<double>(count));
  };
  out[0] = eval_X(g, z(0));
  const double seg_tol = g.quad.tol / static_cast<double>(count);
  for (std::size_t k = 1; k < count; ++k)
    out[k] = out[k - 1] + integrate_segment(g.data, z(k - 1), z(k), seg_tol, g.quad.max_intervals)
                              .value.real();
  return out;
}

/// Least-squares slope of the circle mean of x3 against log r, circles
/// centred at the slit-hull midpoint. Radii are multiples of curve.scale().
inline double log_growth_fit(const MaximalGraph& g, std::vector<double> radii,
                             std::size_t angles = 32) {
  const auto& c = g.data.curve();
  if (radii.size() < 2) throw ValidationError("growth fit needs at least two radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    radii[i] *= c.scale();
    if (radii[i] <= 3.0 * c.half_hull()) throw ValidationError("growth fit radius too small");
    if (i > 0 && !(radii[i] > radii[i - 1])) throw ValidationError("growth fit radii must increase");
  }
  std::vector<double> lx, my;
  for (double r : radii) {
    const auto ring = sample_circle(g, Complex(c.center(), 0.0), r, angles);
    double m = 0.0;
    for (const auto& X : ring) m += X.x3;
    lx.push_back(std::log(r));
    my.push_back(m / static_cast<double>(angles));
  }
  const double n = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += my[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * my[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icpt = (sy - slope * sx) / n;
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) rss += std::pow(my[i] - icpt - slope * lx[i], 2);
  if (std::sqrt(rss / n) > 1e-6 * (1.0 + std::fabs(slope))) {
    std::ostringstream os;
    os << "growth fit residual too large: " << std::sqrt(rss / n);
    throw GeometryError(os.str());
  }
  return slope;
}

// ---------------------------------------------------------------------------
// Mesh sampling.

struct MeshParams {
  std::size_t ring_count = 12;        // cone rings per slit
  double ring_ratio = 0.5;            // consecutive ring distance ratio (inner / outer)
  double inner_ring = 1e-4;           // innermost ring distance / slit length
  std::size_t ring_angles = 64;       // samples per ring, multiple of 4
  std::size_t far_rings = 24;         // circles in the far field
  std::size_t far_angles = 64;
  double far_inner = 1.5;             // far-field inner radius / half hull
  double far_radius = 50.0;           // cutoff radius / scale

  void validate() const {
    if (ring_count < 3 || far_rings < 2 || far_angles < 8 || ring_angles < 8 || ring_angles % 4 != 0)
      throw ValidationError("mesh resolution too small (ring_angles must be a multiple of 4)");
    if (!(ring_ratio > 0.0 && ring_ratio < 1.0) || !(inner_ring > 0.0) || !(far_inner > 1.0) ||
        !(far_radius > 0.0))
      throw ValidationError("invalid mesh parameters");
  }
};

enum class PatchKind { cone, far_field };

/// A structured, angularly periodic grid of vertices: row r, column c at
/// index first + r * cols + c. Cone patches have the slit itself as row 0.
struct Patch {
  PatchKind kind = PatchKind::cone;
  std::size_t slit = 0;
  std::size_t rows = 0, cols = 0, first = 0;
  std::vector<double> levels;  // ring distance (cone) or radius (far field) per row
  Vec3 apex;                   // singular point of a cone patch

  std::size_t at(std::size_t r, std::size_t c) const { return first + r * cols + (c % cols); }
};

struct MeshVertex {
  Vec3 X;
  Complex z;
  std::optional<Bank> bank;
};

struct Mesh {
  std::vector<MeshVertex> vertices;
  std::vector<std::array<std::size_t, 3>> faces;
  std::vector<Patch> patches;
};

namespace detail {

inline void add_patch_faces(Mesh& m, const Patch& p) {
  for (std::size_t r = 0; r + 1 < p.rows; ++r)
    for (std::size_t c = 0; c < p.cols; ++c) {
      const std::size_t v00 = p.at(r, c), v01 = p.at(r, c + 1), v10 = p.at(r + 1, c),
                        v11 = p.at(r + 1, c + 1);
      m.faces.push_back({v00, v10, v11});
      m.faces.push_back({v00, v11, v01});
    }
}

}  // namespace detail

/// Ring distances for slit j: geometric with the configured ratio, shrunk
/// when needed so the outer ring clears the neighbouring slits.
inline std::vector<double> cone_ring_distances(const HyperellipticCurve& curve, std::size_t j,
                                               const MeshParams& mp) {
  const double half = 0.5 * curve.slit_length(j);
  const double delta = curve.clearance();
  double inner = mp.inner_ring * curve.slit_length(j);
  const double growth = std::pow(1.0 / mp.ring_ratio, static_cast<double>(mp.ring_count - 1));
  // semi-minor axis d gives a real-axis overshoot half * (sqrt(1 + (d/half)^2) - 1)
  const double d_max = half * std::sqrt(std::pow(1.0 + delta / half, 2) - 1.0);
  if (inner * growth > d_max) inner = d_max / growth;
  std::vector<double> d(mp.ring_count);
  for (std::size_t k = 0; k < mp.ring_count; ++k)
    d[k] = inner * std::pow(1.0 / mp.ring_ratio, static_cast<double>(k));
  return d;
}

/// Ring rows around every slit plus a radial-angular far-field grid.
inline Mesh sample_mesh(const MaximalGraph& g, const MeshParams& mp = {}) {
  mp.validate();
  const auto& curve = g.data.curve();
  Mesh mesh;
  const double pi = std::numbers::pi;

  for (std::size_t j = 0; j < curve.slit_count(); ++j) {
    Patch p;
    p.kind = PatchKind::cone;
    p.slit = j;
    p.apex = g.singularities[j];
    p.cols = mp.ring_angles;
    p.first = mesh.vertices.size();
    const auto dist = cone_ring_distances(curve, j, mp);
    p.rows = dist.size() + 1;
    p.levels.push_back(0.0);
    p.levels.insert(p.levels.end(), dist.begin(), dist.end());
    const double mid = 0.5 * (curve.slit_left(j) + curve.slit_right(j));
    const double half = 0.5 * curve.slit_length(j);
    const double seg_tol = 0.1 * g.quad.tol / static_cast<double>(p.rows);

    std::vector<Location> prev(p.cols);
    for (std::size_t c = 0; c < p.cols; ++c) {
      const double t = 2.0 * pi * static_cast<double>(c) / static_cast<double>(p.cols);
      Location loc;
      std::optional<Bank> bank;
      if (c == 0) {
        loc = Complex(curve.slit_right(j), 0.0);
      } else if (2 * c == p.cols) {
        loc = Complex(curve.slit_left(j), 0.0);
      } else {
        bank = c < p.cols / 2 ? Bank::north : Bank::south;
        loc = SlitPoint{j, std::clamp(mid + half * std::cos(t), curve.slit_left(j), curve.slit_right(j)),
                        *bank};
      }
      prev[c] = loc;
      mesh.vertices.push_back({g.singularities.at(j), coordinate(loc), bank});
    }
    for (std::size_t r = 1; r < p.rows; ++r) {
      const double mu = std::asinh(p.levels[r] / half);
      for (std::size_t c = 0; c < p.cols; ++c) {
        const double t = 2.0 * pi * static_cast<double>(c) / static_cast<double>(p.cols);
        const Complex z(mid + half * std::cosh(mu) * std::cos(t), half * std::sinh(mu) * std::sin(t));
        const Vec3 X = mesh.vertices[p.at(r - 1, c)].X +
                       integrate_segment(g.data, prev[c], z, seg_tol, g.quad.max_intervals).value.real();
        mesh.vertices.push_back({X, z, std::nullopt});
        prev[c] = z;
      }
    }
    detail::add_patch_faces(mesh, p);
    mesh.patches.push_back(std::move(p));
  }

  {
    Patch p;
    p.kind = PatchKind::far_field;
    p.rows = mp.far_rings;
    p.cols = mp.far_angles;
    p.first = mesh.vertices.size();
    const Complex center(curve.center(), 0.0);
    const double r0 = std::max(mp.far_inner * curve.half_hull(), curve.half_hull() + 2.0 * curve.clearance());
    const double r1 = std::max(mp.far_radius * curve.scale(), 2.0 * r0);
    for (std::size_t r = 0; r < p.rows; ++r)
      p.levels.push_back(r0 * std::pow(r1 / r0, static_cast<double>(r) / static_cast<double>(p.rows - 1)));
    const double seg_tol = g.quad.tol / static_cast<double>(p.cols + p.rows);
    Vec3 spoke{};
    for (std::size_t r = 0; r < p.rows; ++r) {
      auto z = [&](std::size_t c) {
        return center + std::polar(p.levels[r], 2.0 * pi * static_cast<double>(c) / static_cast<double>(p.cols));
      };
      if (r == 0)
        spoke = eval_X(g, z(0));
      else
        spoke = spoke + integrate_segment(g.data, center + p.levels[r - 1], z(0), seg_tol,
                                          g.quad.max_intervals).value.real();
      Vec3 X = spoke;
      mesh.vertices.push_back({X, z(0), std::nullopt});
      for (std::size_t c = 1; c < p.cols; ++c) {
        X = X + integrate_segment(g.data, z(c - 1), z(c), seg_tol, g.quad.max_intervals).value.real();
        mesh.vertices.push_back({X, z(c), std::nullopt});
      }
    }
    detail::add_patch_faces(mesh, p);
    mesh.patches.push_back(std::move(p));
  }
  return mesh;
}

// ---------------------------------------------------------------------------
// Projection to the graph of u over {x3 = 0}.

struct GraphSample {
  double x1 = 0.0, x2 = 0.0, u = 0.0;
  double ux = 0.0, uy = 0.0;
  bool regular = false;  // false for the collapsed singular-point copies
  std::size_t vertex = 0;

  double gradient_norm() const { return std::hypot(ux, uy); }
};

struct GraphFunction {
  std::vector<GraphSample> samples;
  std::size_t fold_count = 0;
  double max_gradient = 0.0;
};

struct ProjectOptions {
  std::size_t neighbors = 12;
  double chord_radius = 0.25;  // multiples of the curve scale
  double chord_slack = 1e-9;   // absolute allowance for |du| - |dx|
  bool throw_on_fold = true;
};

/// Projects mesh vertices to (x1, x2, u) and estimates grad u by
/// least-squares planes through each sample over its k nearest neighbours
/// in projection, drawn from the +-2 row/column structured neighbourhood.
/// On cone patches the fit carries one extra term |x - q| (q the apex) with
/// its linear part removed, so the conical part of u does not bias the
/// slope; near the apex a plain plane overshoots |grad u| = 1.
inline GraphFunction project_to_graph(const Mesh& mesh, double scale, const ProjectOptions& po = {}) {
  GraphFunction gf;
  gf.samples.resize(mesh.vertices.size());
  for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
    const auto& X = mesh.vertices[i].X;
    gf.samples[i] = {X.x1, X.x2, X.x3, 0.0, 0.0, true, i};
  }
  for (const auto& p : mesh.patches) {
    if (p.kind == PatchKind::cone)
      for (std::size_t c = 0; c < p.cols; ++c) gf.samples[p.at(0, c)].regular = false;
  }

  const double merge = 1e-12 * scale;
  for (const auto& p : mesh.patches) {
    const bool cone = p.kind == PatchKind::cone;
    for (std::size_t r = 0; r < p.rows; ++r)
      for (std::size_t c = 0; c < p.cols; ++c) {
        auto& s = gf.samples[p.at(r, c)];
        if (!s.regular) continue;
        struct Cand {
          double d;
          std::size_t idx;
        };
        std::vector<Cand> cand;
        for (int dr = -2; dr <= 2; ++dr) {
          const long rr = static_cast<long>(r) + dr;
          if (rr < 0 || rr >= static_cast<long>(p.rows)) continue;
          for (int dc = -2; dc <= 2; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const std::size_t idx = p.at(static_cast<std::size_t>(rr), c + p.cols + dc);
            const auto& o = gf.samples[idx];
            if (!o.regular) continue;
            const double d = std::hypot(o.x1 - s.x1, o.x2 - s.x2);
            bool dup = false;
            for (const auto& k : cand) {
              const auto& q = gf.samples[k.idx];
              if (std::hypot(q.x1 - o.x1, q.x2 - o.x2) < merge) dup = true;
            }
            if (!dup) cand.push_back({d, idx});
          }
        }
        std::sort(cand.begin(), cand.end(), [](const Cand& a, const Cand& b) {
          return a.d < b.d || (a.d == b.d && a.idx < b.idx);
        });
        const std::size_t k = std::min(po.neighbors, cand.size());
        const double r0 = std::hypot(s.x1 - p.apex.x1, s.x2 - p.apex.x2);
        const double e1 = (s.x1 - p.apex.x1) / r0, e2 = (s.x2 - p.apex.x2) / r0;
        Eigen::MatrixXd M(k, cone ? 3 : 2);
        Eigen::VectorXd rhs(k);
        for (std::size_t i = 0; i < k; ++i) {
          const auto& o = gf.samples[cand[i].idx];
          const double dx = o.x1 - s.x1, dy = o.x2 - s.x2;
          const auto row = static_cast<Eigen::Index>(i);
          M(row, 0) = dx;
          M(row, 1) = dy;
          if (cone) M(row, 2) = std::hypot(o.x1 - p.apex.x1, o.x2 - p.apex.x2) - r0 - e1 * dx - e2 * dy;
          rhs(row) = o.u - s.u;
        }
        const Eigen::VectorXd sol = M.colPivHouseholderQr().solve(rhs);
        s.ux = sol(0);
        s.uy = sol(1);
        gf.max_gradient = std::max(gf.max_gradient, s.gradient_norm());
      }
  }

  // chord test: a spacelike graph has |du| < |dx| for every pair
  const double h = po.chord_radius * scale;
  std::vector<std::size_t> order(gf.samples.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return gf.samples[a].x1 < gf.samples[b].x1; });
  for (std::size_t ii = 0; ii < order.size(); ++ii) {
    const auto& a = gf.samples[order[ii]];
    for (std::size_t jj = ii + 1; jj < order.size(); ++jj) {
      const auto& b = gf.samples[order[jj]];
      if (b.x1 - a.x1 >= h) break;
      const double dx = std::hypot(b.x1 - a.x1, b.x2 - a.x2);
      if (dx < h && std::fabs(b.u - a.u) > dx + po.chord_slack) ++gf.fold_count;
    }
  }
  if (po.throw_on_fold && gf.fold_count > 0) {
    std::ostringstream os;
    os << "fold detected: " << gf.fold_count << " timelike chords";
    throw GeometryError(os.str());
  }
  return gf;
}

/// Light-cone defect max | |(x1,x2) - (q1,q2)| - |x3 - q3| | on one cone ring.
inline double cone_defect(const Mesh& mesh, const Patch& p, std::size_t row, const Vec3& q) {
  double d = 0.0;
  for (std::size_t c = 0; c < p.cols; ++c) {
    const Vec3& X = mesh.vertices[p.at(row, c)].X;
    d = std::max(d, std::fabs(horizontal_distance(X, q) - std::fabs(X.x3 - q.x3)));
  }
  return d;
}

// ---------------------------------------------------------------------------
// Local chart: X near an anchor from short straight integrals, and its
// inverse over the (x1, x2) plane. Only differences of X are accurate to
// roundoff; the anchor value carries the path error.

class LocalChart {
 public:
  LocalChart(const WeierstrassData& data, Complex anchor, Vec3 anchor_value, double tol = 1e-13)
      : data_(&data), anchor_(anchor), value_(anchor_value), tol_(tol) {}

  Complex anchor() const { return anchor_; }

  Vec3 at(Complex z) const {
    if (z == anchor_) return value_;
    return value_ + integrate_segment(*data_, anchor_, z, tol_, 4000).value.real();
  }

  /// Solves (x1, x2)(z) = target by Newton's method from `guess`.
  Complex invert(double x1, double x2, Complex guess) const {
    Complex z = guess;
    for (int it = 0; it < 40; ++it) {
      const Vec3 X = at(z);
      const double r1 = x1 - X.x1, r2 = x2 - X.x2;
      const FormTriple f = data_->forms(Location(z));
      // d x_k = Re f_k dalpha - Im f_k dbeta
      const double a = f.f1.real(), b = -f.f1.imag(), c = f.f2.real(), d = -f.f2.imag();
      const double det = a * d - b * c;
      const double da = (d * r1 - b * r2) / det, db = (a * r2 - c * r1) / det;
      z += Complex(da, db);
      if (std::hypot(da, db) < 1e-15 * (1.0 + std::abs(z))) return z;
    }
    return z;
  }

 private:
  const WeierstrassData* data_;
  Complex anchor_;
  Vec3 value_;
  double tol_;
};

/// Discrete Div(grad u / sqrt(1 - |grad u|^2)) at (x1, x2) on a 3x3 stencil
/// of spacing h, u sampled through the chart.
inline double maximal_operator_residual(const LocalChart& chart, double x1, double x2, double h) {
  std::array<std::array<double, 3>, 3> u{};
  const Complex z0 = chart.invert(x1, x2, chart.anchor());
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      const Complex z = chart.invert(x1 + i * h, x2 + j * h, z0);
      u[i + 1][j + 1] = chart.at(z).x3 - chart.at(chart.anchor()).x3;
    }
  const double ux = (u[2][1] - u[0][1]) / (2 * h), uy = (u[1][2] - u[1][0]) / (2 * h);
  const double uxx = (u[2][1] - 2 * u[1][1] + u[0][1]) / (h * h);
  const double uyy = (u[1][2] - 2 * u[1][1] + u[1][0]) / (h * h);
  const double uxy = (u[2][2] - u[2][0] - u[0][2] + u[0][0]) / (4 * h * h);
  const double w2 = 1.0 - ux * ux - uy * uy;
  return ((1 - uy * uy) * uxx + 2 * ux * uy * uxy + (1 - ux * ux) * uyy) / std::pow(w2, 1.5);
}

struct ResidualConvergence {
  std::vector<double> spacing;
  std::vector<double> residual;  // RMS over the sample points
  double order = 0.0;            // least-squares slope of log residual vs log h
};

/// Far-field residual of the maximal-surface equation under h -> h/2 -> h/4.
/// Points sit at |z - m| = radius * scale; h0 = h_fraction * |(x1,x2)|.
inline ResidualConvergence pde_residual_convergence(const MaximalGraph& g, double radius = 20.0,
                                                    double h_fraction = 0.1, std::size_t points = 8,
                                                    std::size_t levels = 3) {
  const auto& c = g.data.curve();
  std::vector<LocalChart> charts;
  std::vector<Vec3> centers;
  for (std::size_t k = 0; k < points; ++k) {
    const double phi = 2.0 * std::numbers::pi * (static_cast<double>(k) + 0.37) / static_cast<double>(points);
    const Complex z = Complex(c.center(), 0.0) + std::polar(radius * c.scale(), phi);
    const Vec3 X = eval_X(g, z);
    charts.emplace_back(g.data, z, X);
    centers.push_back(X);
  }
  Vec3 hub{};
  for (const auto& q : g.singularities) hub += q;
  hub *= 1.0 / static_cast<double>(g.singularities.size());

  ResidualConvergence rc;
  for (std::size_t l = 0; l < levels; ++l) {
    double ss = 0.0;
    double hmean = 0.0;
    for (std::size_t k = 0; k < points; ++k) {
      const double rho = horizontal_distance(centers[k], hub);
      const double h = h_fraction * rho / std::pow(2.0, static_cast<double>(l));
      hmean += h;
      const double r = maximal_operator_residual(charts[k], centers[k].x1, centers[k].x2, h);
      ss += r * r;
    }
    rc.spacing.push_back(hmean / static_cast<double>(points));
    rc.residual.push_back(std::sqrt(ss / static_cast<double>(points)));
  }
  const double n = static_cast<double>(levels);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t l = 0; l < levels; ++l) {
    const double x = std::log(rc.spacing[l]), y = std::log(rc.residual[l]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  rc.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return rc;
}

}  // namespace maxgraph
