#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "maxgraph/quadrature.hpp"

using namespace maxgraph;
using fixtures::random_curve;
using fixtures::uniform;

namespace {

constexpr double pi = std::numbers::pi;

double real_gap(const Triple& a, const Triple& b) { return max_abs(a.real() - b.real()); }

double gap(const Triple& a, const Triple& b) { return max_abs(a - b); }

// Random point off the slits with a given sign of Im z.
Complex random_point(std::mt19937_64& rng, const HyperellipticCurve& c, double sign) {
  for (;;) {
    const Complex z(c.center() + uniform(rng, -1.5, 1.5) * c.scale(),
                    sign * uniform(rng, 0.0, 1.0) * c.scale());
    if (!c.on_open_slit(z) && !c.branch_point_near(z)) return z;
  }
}

bool stays_in_closed_half(const IntegrationPath& p, double sign) {
  for (const auto& v : p.vertices())
    if (sign * coordinate(v).imag() < 0.0) return false;
  return true;
}

}  // namespace

TEST(Adaptive, KnownIntegrals) {
  auto r = integrate_adaptive<Complex>([](double x) { return Complex(std::cos(x), std::exp(x)); }, 0.0,
                                       1.0, 1e-14);
  EXPECT_NEAR(r.value.real(), std::sin(1.0), 1e-14);
  EXPECT_NEAR(r.value.imag(), std::numbers::e - 1.0, 1e-14);
  // peaked integrand forces refinement
  r = integrate_adaptive<Complex>([](double x) { return Complex(1.0 / (1e-4 + x * x), 0.0); }, -1.0, 1.0,
                                  1e-10);
  EXPECT_NEAR(r.value.real(), 2.0 * std::atan(1.0 / 1e-2) / 1e-2, 1e-9);
  EXPECT_GT(r.intervals, 1u);
}

TEST(Adaptive, UnreachableToleranceReportsAchievedError) {
  try {
    integrate_adaptive<Complex>([](double x) { return Complex(std::sqrt(x), 0.0); }, 0.0, 1.0, 1e-30,
                                200);
    FAIL();
  } catch (const QuadratureError& e) {
    EXPECT_GT(e.achieved(), 1e-30);
    EXPECT_NE(std::string(e.what()).find("achieved"), std::string::npos);
  }
}

TEST(Path, DirectSegmentInOneHalfPlane) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto p = plan_path(c, Complex(-2.0, 1.0), Complex(2.0, 0.5));
  EXPECT_EQ(p.segment_count(), 1u);
}

TEST(Path, NorthToNorthStaysAbove) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto p = plan_path(c, SlitPoint{0, -2.0, Bank::north}, SlitPoint{1, 2.0, Bank::north});
  EXPECT_TRUE(stays_in_closed_half(p, 1.0));
  const auto q = plan_path(c, SlitPoint{0, -2.0, Bank::south}, SlitPoint{1, 2.0, Bank::south});
  EXPECT_TRUE(stays_in_closed_half(q, -1.0));
}

TEST(Path, NorthToSouthGoesAroundTheRightEnd) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto p = plan_path(c, SlitPoint{1, 2.0, Bank::north}, SlitPoint{1, 2.0, Bank::south});
  double right = -INFINITY;
  for (const auto& v : p.vertices()) right = std::max(right, coordinate(v).real());
  EXPECT_NEAR(right, 3.0 + c.clearance(), 1e-15);
  EXPECT_DOUBLE_EQ(c.clearance(), 0.25 * 1.0);  // min(gap 2, half-length 1)
}

TEST(Path, ConstructorRejectsSlitCrossings) {
  const auto c = make_curve({-1, 1});
  EXPECT_THROW(IntegrationPath(c, {Complex(0.0, 1.0), Complex(0.0, -1.0)}), ValidationError);
  EXPECT_THROW(IntegrationPath(c, {Complex(-2.0, 0.0), Complex(2.0, 0.0)}), ValidationError);
  EXPECT_NO_THROW(IntegrationPath(c, {Complex(0.0, 1.0), Complex(2.0, 0.0), Complex(0.0, -1.0)}));
}

TEST(Forms, ConstantF1HasClosedFormIntegral) {
  std::mt19937_64 rng(3);
  const auto c = random_curve(rng, 3);
  const auto d = build_data(c, SpinChoice::parse("010"), 0.0, 1.3);
  for (int i = 0; i < 20; ++i) {
    const Complex a = random_point(rng, c, 1.0), b = random_point(rng, c, i % 2 ? 1.0 : -1.0);
    const auto r = integrate_forms(d, plan_path(c, a, b));
    EXPECT_LT(std::abs(r.value[0] - Complex(0.0, -2.0 * 1.3) * (b - a)), 1e-12);
  }
}

TEST(Forms, ContractibleLoopIntegratesToZero) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto d = build_data(c, SpinChoice::parse("01"));
  const IntegrationPath loop(c, {Complex(-2.5, 0.3), Complex(2.5, 0.3), Complex(2.5, 2.0),
                                 Complex(-2.5, 2.0), Complex(-2.5, 0.3)});
  EXPECT_LT(max_abs(integrate_forms(d, loop).value), 1e-10);
}

TEST(Forms, LargeCircleGivesGrowthResidue) {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto c = random_curve(seed, seed);
    for (const auto& t : enumerate_admissible(c)) {
      const auto d = build_data(c, t, 0.0, 0.7);
      for (double R : {20.0, 80.0}) {
        const double r = R * c.scale();
        std::vector<Location> v;
        for (int k = 0; k <= 64; ++k) v.emplace_back(Complex(c.center(), 0.0) + std::polar(r, 2 * pi * (k % 64) / 64));
        const auto res = integrate_forms(d, IntegrationPath(c, v));
        // the polygon encloses every slit, so only the residue at infinity remains
        EXPECT_LT(std::abs(res.value[2] - Complex(0.0, 2 * pi * d.growth())), 1e-10);
      }
    }
  }
}

TEST(Periods, RealPartsVanishAndResiduesSum) {
  for (unsigned seed = 1; seed <= 6; ++seed) {
    const auto c = random_curve(seed + 50, 1 + seed % 4);
    for (const auto& t : enumerate_admissible(c)) {
      const double theta = seed % 2 ? 0.0 : 0.6;
      const auto d = build_data(c, t, theta, 1.4);
      Complex sum3 = 0.0;
      for (std::size_t j = 0; j < c.slit_count(); ++j) {
        const auto lp = slit_loop_period(d, j);
        // constant f1 when theta = 0; otherwise only its real period must vanish
        EXPECT_LT(theta == 0.0 ? std::abs(lp.value[0]) : std::fabs(lp.value[0].real()), 1e-9);
        EXPECT_LT(std::fabs(lp.value[1].real()), 1e-9);
        EXPECT_LT(std::fabs(lp.value[2].real()), 1e-9);
        sum3 += lp.value[2];
      }
      EXPECT_LT(std::abs(sum3 - Complex(0.0, -2 * pi * d.growth())), 1e-9);
    }
  }
}

TEST(PathIndependence, HomotopicPathsAgree) {
  std::mt19937_64 rng(17);
  const QuadratureOptions opt{1e-10, 4000};
  for (int i = 0; i < 50; ++i) {
    const auto c = random_curve(rng, 1 + i % 4);
    const auto all = enumerate_admissible(c);
    const auto d = build_data(c, all[std::size_t(i) % all.size()]);
    const double s = i % 2 ? 1.0 : -1.0;
    const Complex a = random_point(rng, c, s), b = random_point(rng, c, s);
    const double H = s * 2.0 * c.scale();
    const IntegrationPath detour(c, {a, Complex(a.real(), H), Complex(b.real(), H), b});
    const auto r1 = integrate_forms(d, plan_path(c, a, b), opt);
    const auto r2 = integrate_forms(d, detour, opt);
    EXPECT_LT(gap(r1.value, r2.value), 2 * opt.tol) << "pair " << i;
  }
}

TEST(PathIndependence, BanksAgreeInRealPart) {
  for (unsigned seed = 1; seed <= 4; ++seed) {
    const auto c = random_curve(seed + 70, seed);
    for (const auto& t : enumerate_admissible(c)) {
      const auto d = build_data(c, t);
      const Complex z0(c.branch_points().back() + c.scale(), 0.0);
      for (std::size_t j = 0; j < c.slit_count(); ++j) {
        const double x = c.slit_left(j) + 0.37 * c.slit_length(j);
        const auto n = integrate_forms(d, plan_path(c, z0, SlitPoint{j, x, Bank::north}));
        const auto sth = integrate_forms(d, plan_path(c, z0, SlitPoint{j, x, Bank::south}));
        EXPECT_LT(real_gap(n.value, sth.value), 2e-10);
      }
    }
  }
}

TEST(EndpointSingularity, SquareRootRate) {
  // I(eps) - I(0) for the end sliding into a branch point scales as sqrt(eps)
  const auto c = make_curve({-2.0, -0.5, 0.4, 1.5});
  const auto d = build_data(c, SpinChoice::parse("01"));
  const Complex z0(0.0, 1.0);
  for (double ak : c.branch_points()) {
    const Complex dir = (ak == c.branch_points().back() || ak == c.branch_points().front())
                            ? Complex(ak > 0 ? 1.0 : -1.0, 0.0)
                            : Complex(0.0, 1.0);
    const auto ref = integrate_forms(d, plan_path(c, z0, Complex(ak, 0.0)), {1e-13, 4000}).value;
    std::vector<double> lx, ly;
    for (double eps = 1e-2; eps > 1e-7; eps /= 4) {
      const auto v = integrate_forms(d, plan_path(c, z0, Complex(ak, 0.0) + eps * dir), {1e-13, 4000}).value;
      lx.push_back(std::log(eps));
      ly.push_back(std::log(std::abs(v[2] - ref[2])));
    }
    const double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      sx += lx[k];
      sy += ly[k];
      sxx += lx[k] * lx[k];
      sxy += lx[k] * ly[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    EXPECT_GT(slope, 0.4) << "a = " << ak;
    EXPECT_LT(slope, 0.6) << "a = " << ak;
  }
}

TEST(EndpointSingularity, BranchPointEndsInEitherDirection) {
  const auto c = make_curve({-1, 1});
  const auto d = build_data(c, SpinChoice::parse("0"));
  EXPECT_NO_THROW(integrate_segment(d, Complex(1.0, 0.0), Complex(2.0, 0.0), 1e-12));
  EXPECT_NO_THROW(integrate_segment(d, Complex(2.0, 0.0), Complex(1.0, 0.0), 1e-12));
  EXPECT_THROW(integrate_segment(d, Complex(1.0, 0.0), Complex(-1.0, 0.0), 1e-12), ValidationError);
}

TEST(ErrorEstimates, HonestAgainstTighterReference) {
  std::mt19937_64 rng(23);
  int honest = 0, total = 0;
  for (int i = 0; i < 200; ++i) {
    const auto c = random_curve(rng, 1 + i % 4);
    const auto all = enumerate_admissible(c);
    const auto d = build_data(c, all[std::size_t(i) % all.size()]);
    const double s = i % 2 ? 1.0 : -1.0;
    const Complex a = random_point(rng, c, s), b = random_point(rng, c, s);
    const double tol = 1e-7;
    const auto loose = integrate_segment(d, a, b, tol, 4000);
    const auto tight = integrate_segment(d, a, b, tol / 10, 4000);
    ++total;
    if (loose.error >= gap(loose.value, tight.value)) ++honest;
  }
  EXPECT_GE(honest, (95 * total) / 100);
}
