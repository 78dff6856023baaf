#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "maxgraph/gauss_map.hpp"
#include "maxgraph/quadrature.hpp"

using namespace maxgraph;
using fixtures::random_curve;
using fixtures::uniform;

namespace {

Complex random_point(std::mt19937_64& rng, const HyperellipticCurve& c) {
  for (;;) {
    const Complex z(c.center() + uniform(rng, -1.5, 1.5) * c.scale(), uniform(rng, -1.0, 1.0) * c.scale());
    if (!c.on_open_slit(z) && !c.branch_point_near(z)) return z;
  }
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST(SpinChoice, ParseAndComplement) {
  const auto t = SpinChoice::parse("0110");
  EXPECT_EQ(t.str(), "0110");
  EXPECT_EQ(t.complement().str(), "1001");
  EXPECT_EQ(t.complement().complement(), t);
  EXPECT_THROW(SpinChoice::parse("012"), ValidationError);
  EXPECT_THROW(SpinChoice::parse(""), ValidationError);
  EXPECT_THROW(SpinChoice::parse("01").check(make_curve({-1, 1})), ValidationError);
}

TEST(Enumerate, CountsAndOrder) {
  EXPECT_EQ(enumerate_admissible(make_curve({-1, 1})).size(), 2u);
  const auto n1 = enumerate_admissible(make_curve({-3, -1, 1, 3}));
  ASSERT_EQ(n1.size(), 4u);
  EXPECT_EQ(n1[0].str(), "00");
  EXPECT_EQ(n1[1].str(), "01");
  EXPECT_EQ(n1[2].str(), "10");
  EXPECT_EQ(n1[3].str(), "11");
  const auto n2 = enumerate_admissible(make_curve({0, 1, 2, 3, 4, 5}));
  EXPECT_EQ(n2.size(), 8u);
  EXPECT_TRUE(std::is_sorted(n2.begin(), n2.end()));
}

TEST(Enumerate, SelectedEndpointsIncrease) {
  const auto c = random_curve(7u, 4);
  for (const auto& t : enumerate_admissible(c)) {
    const auto b = t.selected(c);
    EXPECT_TRUE(std::is_sorted(b.begin(), b.end()));
    EXPECT_EQ(std::adjacent_find(b.begin(), b.end()), b.end());
  }
}

TEST(Classes, TwoToTheN) {
  for (std::size_t slits = 1; slits <= 4; ++slits) {
    const auto c = random_curve(unsigned(slits), slits);
    const auto all = enumerate_admissible(c);
    const auto cls = congruence_classes(all);
    EXPECT_EQ(cls.size(), std::size_t{1} << (slits - 1));
    for (const auto& p : cls) {
      EXPECT_FALSE(p.representative[0]);
      EXPECT_EQ(p.mirror, p.representative.complement());
    }
  }
}

TEST(Classes, RejectsListNotClosedUnderComplement) {
  const std::vector<SpinChoice> partial{SpinChoice::parse("00"), SpinChoice::parse("01"),
                                        SpinChoice::parse("11")};
  EXPECT_THROW(congruence_classes(partial), ValidationError);
}

TEST(BuildData, FactorSplit) {
  const auto c0 = make_curve({-1, 1});
  const auto d0 = build_data(c0, SpinChoice::parse("0"));
  EXPECT_EQ(std::vector<double>(d0.P().coefficients().begin(), d0.P().coefficients().end()),
            (std::vector<double>{1.0, 1.0}));
  EXPECT_EQ(std::vector<double>(d0.C().coefficients().begin(), d0.C().coefficients().end()),
            (std::vector<double>{-1.0, 1.0}));

  const auto c1 = make_curve({-3, -1, 1, 3});
  const auto d1 = build_data(c1, SpinChoice::parse("00"));  // b = {-3, 1}
  EXPECT_EQ(d1.selected()[0], -3.0);
  EXPECT_EQ(d1.selected()[1], 1.0);
  EXPECT_EQ(d1.rejected()[0], -1.0);
  EXPECT_EQ(d1.rejected()[1], 3.0);
  // (z + 3)(z - 1) = z^2 + 2z - 3 and (z + 1)(z - 3) = z^2 - 2z - 3
  EXPECT_EQ(d1.P()[0], -3.0);
  EXPECT_EQ(d1.P()[1], 2.0);
  EXPECT_EQ(d1.C()[1], -2.0);
  // product oracle: (z^2 - 1)(z^2 - 9) = z^4 - 10 z^2 + 9
  const Polynomial pc = d1.P() * d1.C();
  const std::vector<double> expect{9.0, 0.0, -10.0, 0.0, 1.0};
  for (std::size_t i = 0; i < expect.size(); ++i) EXPECT_DOUBLE_EQ(pc[i], expect[i]);
}

TEST(BuildData, ProductOfFactorsIsTheCurve) {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto c = random_curve(seed, 1 + seed % 4);
    const Polynomial full = Polynomial::from_roots(c.branch_points());
    for (const auto& t : enumerate_admissible(c)) {
      const auto d = build_data(c, t);
      EXPECT_EQ(d.P().degree(), c.slit_count());
      EXPECT_EQ(d.C().degree(), c.slit_count());
      const Polynomial pc = d.P() * d.C();
      for (std::size_t i = 0; i <= full.degree(); ++i)
        EXPECT_NEAR(pc[i], full[i], 1e-12 * std::max(1.0, std::fabs(full[i])));
    }
  }
}

TEST(BuildData, RejectsBadParameters) {
  const auto c = make_curve({-1, 1});
  EXPECT_THROW(build_data(c, SpinChoice::parse("0"), 0.0, 0.0), ValidationError);
  EXPECT_THROW(build_data(c, SpinChoice::parse("0"), NAN, 1.0), ValidationError);
  EXPECT_THROW(build_data(c, SpinChoice::parse("01")), ValidationError);
  EXPECT_THROW(build_data_from_endpoints(c, {-1.0, 1.0}), ValidationError);
}

TEST(EvalG, HardwiredLimits) {
  const auto c = make_curve({-3, -1, 1, 3});
  for (double theta : {0.0, 0.7}) {
    const auto d = build_data(c, SpinChoice::parse("01"), theta);
    const Complex e = std::polar(1.0, theta);
    for (double b : d.selected()) EXPECT_EQ(eval_g(d, Complex(b, 0.0)), e);
    for (double cc : d.rejected()) EXPECT_EQ(eval_g(d, Complex(cc, 0.0)), -e);
    EXPECT_LT(std::abs(eval_g(d, Complex(1e8, 3e7))), 1e-6);
    EXPECT_EQ(eval_g(d, Complex(INFINITY, 0.0)), 0.0);
  }
}

TEST(EvalG, ApproachesLimitsContinuously) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto d = build_data(c, SpinChoice::parse("00"));
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    EXPECT_LT(std::abs(eval_g(d, Complex(-3.0 - eps, eps)) - 1.0), 10 * std::sqrt(eps));
    EXPECT_LT(std::abs(eval_g(d, Complex(3.0 + eps, eps)) + 1.0), 10 * std::sqrt(eps));
  }
}

TEST(EvalG, BankRelation) {
  // (x, w) -> (x, -w) maps North to South and g e^{-i theta} to its inverse
  const auto c = random_curve(11u, 3);
  for (const auto& t : enumerate_admissible(c)) {
    const auto d = build_data(c, t, 0.4);
    for (std::size_t j = 0; j < c.slit_count(); ++j)
      for (int k = 1; k < 16; ++k) {
        const double x = c.slit_left(j) + c.slit_length(j) * k / 16.0;
        const Complex gn = eval_g(d, SlitPoint{j, x, Bank::north});
        const Complex gs = eval_g(d, SlitPoint{j, x, Bank::south});
        EXPECT_LT(std::abs(gs * gn - std::polar(1.0, 0.8)), 1e-10);
      }
  }
}

TEST(EvalForms, ConstantF1AndConformality) {
  std::mt19937_64 rng(5);
  const auto c = random_curve(rng, 3);
  for (const auto& t : enumerate_admissible(c)) {
    const auto d = build_data(c, t, 0.0, 1.7);
    for (int i = 0; i < 50; ++i) {
      const FormTriple f = eval_forms(d, random_point(rng, c));
      EXPECT_EQ(f.f1, Complex(0.0, -2.0 * 1.7));
      EXPECT_LT(std::abs(isotropy_defect(f)), 1e-11 * (1.0 + std::norm(f.f2)));
    }
  }
}

TEST(EvalForms, RealOnTheRightRay) {
  const auto c = random_curve(3u, 2);
  const auto d = build_data(c, SpinChoice::parse("10"));
  for (double x : {0.5, 1.0, 4.0, 20.0}) {
    const FormTriple f = eval_forms(d, Complex(c.branch_points().back() + x, 0.0));
    EXPECT_EQ(f.f3.imag(), 0.0);
    EXPECT_EQ(f.f2.imag(), 0.0);
  }
}

TEST(EvalForms, EndpointSingularity) {
  const auto c = make_curve({-1, 1});
  const auto d = build_data(c, SpinChoice::parse("0"));
  EXPECT_THROW(eval_forms(d, Complex(-1.0, 0.0)), EndpointSingularityError);
  EXPECT_THROW(eval_forms(d, Complex(1.0, 0.0)), EndpointSingularityError);
  EXPECT_THROW(eval_forms(d, SlitPoint{0, 1.0, Bank::north}), EndpointSingularityError);
  EXPECT_THROW(eval_forms(d, Complex(0.2, 0.0)), OnCutError);
  EXPECT_NO_THROW(eval_forms(d, SlitPoint{0, 0.2, Bank::south}));
}

TEST(EvalForms, SimplifiedMatchesLiteralFormulas) {
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (std::size_t slits = 1; slits <= 4; ++slits) {
    const auto c = random_curve(rng, slits);
    for (double theta : {0.0, 1.1}) {
      const auto all = enumerate_admissible(c);
      for (int i = 0; i < 1000 / 8; ++i) {
        const auto d = build_data(c, all[i % all.size()], theta, 0.8);
        const Complex z = random_point(rng, c);
        const FormTriple a = d.forms(z), b = d.forms_unsimplified(z);
        const double scale = std::max({1.0, std::abs(b.f1), std::abs(b.f2), std::abs(b.f3)});
        worst = std::max({worst, std::abs(a.f1 - b.f1) / scale, std::abs(a.f2 - b.f2) / scale,
                          std::abs(a.f3 - b.f3) / scale});
      }
    }
  }
  EXPECT_LT(worst, 1e-11);
}

TEST(EvalForms, RatioAgreesWithWOverPNearSelectedPoints) {
  // the cancellation-free ratio against w / P on an annulus about each b_j
  const auto c = random_curve(21u, 3);
  const auto d = build_data(c, SpinChoice::parse("011"));
  for (double b : d.selected())
    for (double r : {1e-2, 1e-3})
      for (int k = 0; k < 12; ++k) {
        const Complex z = b + std::polar(r, 2 * std::numbers::pi * (k + 0.5) / 12);
        const Complex literal = eval_w(c, z) / d.P()(z);
        EXPECT_LT(rel(d.ratio(z), literal), 1e-10);
      }
}

TEST(Growth, ResidueFormula) {
  const auto c0 = make_curve({-1, 1});
  EXPECT_DOUBLE_EQ(growth_coefficient(build_data(c0, SpinChoice::parse("0"))), 2.0);
  EXPECT_DOUBLE_EQ(growth_coefficient(build_data(c0, SpinChoice::parse("1"))), -2.0);
  EXPECT_DOUBLE_EQ(growth_coefficient(build_data(c0, SpinChoice::parse("0"), 0.0, 3.0)), 6.0);
  // symmetric curve; alternating endpoints balance
  const auto c1 = make_curve({-3, -1, 1, 3});
  EXPECT_DOUBLE_EQ(growth_coefficient(build_data(c1, SpinChoice::parse("01"))), 0.0);
  const auto c = random_curve(4u, 4);
  for (const auto& t : enumerate_admissible(c))
    EXPECT_DOUBLE_EQ(build_data(c, t).growth(), -build_data(c, t.complement()).growth());
}

TEST(Growth, MatchesRealRayLogFit) {
  // int f3 dz along the real ray grows like c log x
  for (const auto& [a, bits] : std::vector<std::pair<std::vector<double>, std::string>>{
           {{-1, 1}, "0"}, {{-3, -1, 1, 3}, "01"}, {{-2.0, -0.5, 0.3, 1.7, 2.4, 4.0}, "011"}}) {
    const auto c = make_curve(a);
    const auto d = build_data(c, SpinChoice::parse(bits));
    const double x0 = c.branch_points().back() + c.scale();
    auto height = [&](double x) {
      double h = 0.0;
      for (double lo = x0; lo < x; lo *= 2.0)
        h += integrate_segment(d, Complex(lo, 0.0), Complex(std::min(2.0 * lo, x), 0.0), 1e-10)
                 .value[2].real();
      return h;
    };
    const double x1 = 1e5 * c.scale(), x2 = 1e6 * c.scale();
    const double slope = (height(x2) - height(x1)) / std::log(x2 / x1);
    EXPECT_NEAR(slope, d.growth(), 1e-3 * std::max(1.0, std::fabs(d.growth())));
  }
}

// Gauss-map properties on the slit complement.

class GaussMap : public ::testing::TestWithParam<int> {
 protected:
  HyperellipticCurve curve() const {
    return random_curve(unsigned(1000 + GetParam()), 1 + GetParam() % 4);
  }
};

TEST_P(GaussMap, ModulusBelowOneInsideEqualOneOnSlits) {
  const auto c = curve();
  for (const auto& t : enumerate_admissible(c)) {
    const auto d = build_data(c, t, 0.3);
    double mx = 0.0;
    for (const Complex z : interior_samples(c, 2000)) mx = std::max(mx, std::abs(eval_g(d, z)));
    EXPECT_LT(mx, 1.0);
    for (std::size_t j = 0; j < c.slit_count(); ++j)
      for (int k = 0; k <= 32; ++k) {
        const double x = c.slit_left(j) + c.slit_length(j) * k / 32.0;
        for (Bank b : {Bank::north, Bank::south})
          EXPECT_LT(std::fabs(std::abs(eval_g(d, SlitPoint{j, x, b})) - 1.0), 1e-9);
      }
  }
}

TEST_P(GaussMap, DegreeIsSlitCount) {
  const auto c = curve();
  std::mt19937_64 rng{static_cast<unsigned>(GetParam())};
  const auto all = enumerate_admissible(c);
  for (int i = 0; i < 20; ++i) {
    const Complex zeta = std::polar(std::sqrt(uniform(rng, 0.0, 0.98)), uniform(rng, 0.0, 2 * std::numbers::pi));
    const auto d = build_data(c, all[std::size_t(i) % all.size()]);
    const auto k = gauss_map_degree(d, zeta);
    EXPECT_EQ(k.count, static_cast<long>(c.slit_count()));
    EXPECT_NEAR(k.winding, k.count, 1e-6);
  }
}

TEST_P(GaussMap, OneUnitPointPerBoundaryComponent) {
  const auto c = curve();
  for (const auto& t : enumerate_admissible(c)) {
    const auto d = build_data(c, t, 0.9);
    for (std::size_t j = 0; j < c.slit_count(); ++j) {
      EXPECT_EQ(boundary_unit_preimages(d, j), 1u);
      const auto sweep = boundary_argument_sweep(d, j);
      EXPECT_EQ(sweep.reversals, 0u);
      EXPECT_NEAR(std::fabs(sweep.total_turn), 2 * std::numbers::pi, 1e-9);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, GaussMap, ::testing::Range(0, 8));

TEST(GaussMap, TwoSelectedPointsOnOneSlitBreakTheBoundaryCondition) {
  const auto c = make_curve({-3, -1, 1, 3});
  const auto d = build_data_from_endpoints(c, {-3.0, -1.0});
  EXPECT_FALSE(d.one_per_slit());
  EXPECT_EQ(boundary_unit_preimages(d, 0), 2u);
  EXPECT_EQ(boundary_unit_preimages(d, 1), 0u);
}

TEST(GaussMap, DegreeRejectsTargetsOutsideTheDisk) {
  const auto d = build_data(make_curve({-1, 1}), SpinChoice::parse("0"));
  EXPECT_THROW(gauss_map_degree(d, 1.0), ValidationError);
}

TEST(Halton, DeterministicAndInsideDisk) {
  EXPECT_DOUBLE_EQ(halton(1, 2), 0.5);
  EXPECT_DOUBLE_EQ(halton(3, 2), 0.75);
  EXPECT_DOUBLE_EQ(halton(4, 3), 4.0 / 9.0);
  const auto a = halton_disk(500, Complex(1.0, 2.0), 3.0), b = halton_disk(500, Complex(1.0, 2.0), 3.0);
  EXPECT_EQ(a, b);
  for (const Complex z : a) EXPECT_LT(std::abs(z - Complex(1.0, 2.0)), 3.0);
}
