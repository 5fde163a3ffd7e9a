#include <gtest/gtest.h>

#include "caustic/caustic.hpp"
#include "curves.hpp"
#include "generators.hpp"

namespace caustic {
namespace {

using testing::curve;
using testing::Gen;
using testing::pt;

CausticClassReport run(const PlaneCurve& c, const Vec3& S, std::uint64_t seed = 1) {
  ClassOptions opt;
  opt.seed = seed;
  return caustic_class(c, S, opt);
}

void expect_class(const PlaneCurve& c, const Vec3& S, long expected) {
  CausticClassReport r = run(c, S);
  EXPECT_TRUE(r.consistent);
  for (const auto& d : r.diagnostics) ADD_FAILURE() << d;
  EXPECT_EQ(r.mclass_theorem1, expected);
  EXPECT_EQ(r.mclass_ledger, expected);
  EXPECT_EQ(r.mclass_flemma, expected) << r.flemma_note;
  EXPECT_EQ(r.class_value, expected);
  EXPECT_TRUE(r.h_oracle_ok);
}

TEST(Golden, LemniscateFiniteSource) { expect_class(curve(testing::kLemniscate), pt(1, 0, 1), 8); }

TEST(Golden, LemniscateSourceAtInfinity) { expect_class(curve(testing::kLemniscate), pt(1, 2, 0), 12); }

TEST(Golden, QuinticA2) { expect_class(curve(testing::kQuintic), pt(0, 1, 0), 8); }

TEST(Golden, QuinticGeneric) {
  expect_class(curve(testing::kQuintic), pt(2, 3, 1), 13);
  expect_class(curve(testing::kQuintic), pt(1, 1, 1), 12);
}

// x-coordinates of l_1 = V(ix - y + (3i/25) t z) meeting the quintic, t^3 = 20:
// the tangency point a_1 has multiplicity 2.
std::vector<std::pair<Poly<Elem>, int>> l1_section(const ContextPtr& k) {
  Elem u = Elem(QI(mpq_class(3, 25))) * k->generator();
  Poly<Elem> x({Elem(0), Elem(1)});
  Poly<Elem> shifted = x + Poly<Elem>({u});
  Poly<Elem> p = -(shifted * shifted) - x * x * x * x * x;
  return squarefree_decomposition(p);
}

Vec3 on_l1(const Elem& x, const ContextPtr& k, const ContextPtr& K) {
  Elem i(QI::imaginary_unit());
  Elem t = K->lift(k->generator());
  return {x, i * x + i * Elem(QI(mpq_class(3, 25))) * t, Elem(1)};
}

TEST(Golden, QuinticTableWithCubeRootOfTwenty) {
  ContextPtr k = parse_extension("t^3-20");
  PlaneCurve c = curve(testing::kQuintic, k);
  expect_class(c, parse_point("-3/25*t:0:1", k), 9);
  expect_class(c, parse_point("0:3/25*i*t:1", k), 11);
}

TEST(Golden, QuinticRowElevenOnPlainRationals) {
  PlaneCurve c = curve(testing::kQuintic);
  expect_class(c, pt(0, 0, 1), 11);
  expect_class(c, pt(1, 2, 0), 11);
}

TEST(Golden, QuinticTangencyPointA1) {
  ContextPtr k = parse_extension("t^3-20");
  for (const auto& [phi, mult] : l1_section(k)) {
    if (mult != 2) continue;
    ASSERT_EQ(phi.degree(), 1);
    Elem x = -phi[0] * phi[1].inverse();
    expect_class(curve(testing::kQuintic, k), on_l1(x, k, k), 11);
  }
}

TEST(Golden, QuinticOnCurveAndIsotropicTangent) {
  ContextPtr k = parse_extension("t^3-20");
  int seen = 0;
  for (const auto& [phi, mult] : l1_section(k)) {
    if (mult != 1) continue;
    Adjoined K = adjoin_root(k, phi);
    expect_class(curve(testing::kQuintic, K.ctx), on_l1(K.root, k, K.ctx), 10);
    ++seen;
  }
  EXPECT_EQ(seen, 1);
}

TEST(Golden, CounterexampleQuartic) {
  CausticClassReport r = run(curve(testing::kQuartic), pt(0, 0, 1));
  EXPECT_TRUE(r.consistent);
  EXPECT_EQ(r.class_value, 23);
  EXPECT_EQ(r.dual_degree, 12);
  ASSERT_TRUE(r.bl);
  EXPECT_EQ(r.bl->value, 21);
  EXPECT_EQ(r.bl->correction_sum(), 2);
}

TEST(Lemniscate, IndicatorCombinations) {
  PlaneCurve c = curve(testing::kLemniscate);
  expect_class(c, pt(2, 3, 1), 12);
  // on l_{1,I} only, then on l_{1,J} only
  expect_class(c, {Elem(1), Elem(QI(0, 2)), Elem(1)}, 10);
  expect_class(c, {Elem(1), Elem(QI(0, -2)), Elem(1)}, 10);
  // l_{1,I} meets l_{2,J} off C
  expect_class(c, pt(-1, 0, 1), 8);
  // the double point O lies on none of the isotropic tangents
  expect_class(c, pt(0, 0, 1), 10);
}

TEST(Lemniscate, SmoothPointOfTheCurve) {
  ContextPtr k = parse_extension("t^2-2");
  expect_class(curve(testing::kLemniscate, k), parse_point("t:0:1", k), 11);
}

TEST(Lemniscate, TermsForFiniteSource) {
  CausticClassReport r = run(curve(testing::kLemniscate), pt(1, 0, 1));
  EXPECT_EQ(r.dual_degree, 6);
  EXPECT_EQ(r.terms.f, 2 * (2 + 0 + 1 + 1 + 0));
  EXPECT_EQ(r.terms.g, 0);
  EXPECT_EQ(r.terms.f_prime, 0);
  EXPECT_EQ(r.terms.g_prime, 0);
  EXPECT_EQ(r.terms.q_prime, 0);
  EXPECT_EQ(r.terms.mu_I, 2);
  EXPECT_EQ(r.terms.mu_J, 2);
}

TEST(Quintic, TermsForGenericSource) {
  CausticClassReport r = run(curve(testing::kQuintic), pt(2, 3, 1));
  EXPECT_EQ(r.terms.g, 2);
  EXPECT_EQ(r.terms.f, 0);
  EXPECT_EQ(r.terms.q_prime, 0);
}

TEST(Quartic, TheoremTermsAndCorrections) {
  CausticClassReport r = run(curve(testing::kQuartic), pt(0, 0, 1));
  EXPECT_EQ(r.terms.g, 0);
  EXPECT_EQ(r.terms.f, 4);
  EXPECT_EQ(r.terms.f_prime, 0);
  EXPECT_EQ(r.terms.g_prime, 1);
  EXPECT_EQ(r.terms.q_prime, 0);
  ASSERT_TRUE(r.bl);
  EXPECT_EQ(r.bl->corrections, (std::array<long, 4>{1, 1, 0, 0}));
  EXPECT_EQ(r.bl->value + r.bl->correction_sum(), r.mclass);
}

TEST(BrocardLemoyne, NoTangencyMeansNoCorrection) {
  // smooth cubic, source off the curve and off every isotropic tangent
  CausticClassReport r = run(curve(testing::kFermatCubic), pt(2, 5, 1));
  ASSERT_TRUE(r.bl);
  EXPECT_EQ(r.bl->correction_sum(), 0);
  EXPECT_EQ(r.bl->value, r.mclass);
}

TEST(ReflectedMap, WedgeIdentity) {
  Gen g(20);
  for (int trial = 0; trial < 15; ++trial) {
    TriPoly F = g.form(static_cast<int>(g.integer(2, 4)), 3);
    Vec3 S{Elem(g.gaussian(4)), Elem(g.gaussian(4)), Elem(g.coin() ? 1 : 0)};
    if (is_zero_vector(S)) continue;
    auto R = reflected_map_general(F, point_I(), point_J(), S);
    TriPoly x = parse_form("x", nullptr), y = parse_form("y", nullptr), z = parse_form("z", nullptr);
    EXPECT_TRUE((x * R[0] + y * R[1] + z * R[2]).is_zero());
    for (const auto& r : R) EXPECT_TRUE(r.is_zero() || r.degree() == 2 * F.degree() - 1);
  }
}

TEST(ReflectedMap, Equivariance) {
  Gen g(21);
  PlaneCurve c = curve(testing::kQuartic);
  Vec3 S = pt(1, 2, 3);
  ReflectedMap r = reflected_map(c, S);
  for (int trial = 0; trial < 20; ++trial) {
    Mat3 M = g.unimodular(2);
    Mat3 inv = adjugate3(M);
    Mat3 com = cofactor3(M);
    auto moved = reflected_map_general(c.F().substitute_linear(M), mat_apply(inv, point_I()),
                                       mat_apply(inv, point_J()), mat_apply(inv, S));
    for (int k = 0; k < 3; ++k) {
      TriPoly rhs = com[k][0] * moved[0] + com[k][1] * moved[1] + com[k][2] * moved[2];
      EXPECT_EQ(r.R[k].substitute_linear(M), rhs) << "component " << k;
    }
  }
}

TEST(Degeneracy, Cases) {
  EXPECT_TRUE(degeneracy_check(curve(testing::kConic), point_I()).degenerate);
  EXPECT_TRUE(degeneracy_check(curve(testing::kConic), point_J()).degenerate);
  EXPECT_TRUE(degeneracy_check(curve(testing::kConic), pt(0, 0, 1)).degenerate);
  EXPECT_TRUE(degeneracy_check(curve("x - 2*y + z"), pt(1, 1, 1)).degenerate);
  EXPECT_FALSE(degeneracy_check(curve(testing::kConic), pt(1, 2, 3)).degenerate);
  EXPECT_FALSE(degeneracy_check(curve("x^2 + 2*y^2 - z^2"), pt(0, 0, 1)).degenerate);
  // parabola: the finite focus and the direction of the axis
  EXPECT_TRUE(degeneracy_check(curve("y*z - x^2"), {Elem(0), Elem(QI(mpq_class(1, 4))), Elem(1)}).degenerate);
  EXPECT_TRUE(degeneracy_check(curve("y*z - x^2"), pt(0, 1, 0)).degenerate);
  EXPECT_FALSE(degeneracy_check(curve("y*z - x^2"), pt(1, 2, 0)).degenerate);
  EXPECT_FALSE(degeneracy_check(curve("y*z - x^2"), pt(1, 0, 0)).degenerate);
  EXPECT_THROW(run(curve(testing::kConic), pt(0, 0, 1)), DegenerateError);
  EXPECT_THROW(run(curve(testing::kLemniscate), point_I()), DegenerateError);
}

TEST(BasePoints, QuinticGenericSource) {
  Rng rng(22);
  PlaneCurve c = curve(testing::kQuintic);
  Vec3 S = pt(2, 3, 1);
  auto bp = base_points(c, S, rng, 320);
  EXPECT_EQ(testing::total_size(bp), 2);
  EXPECT_EQ(testing::matches(bp, pt(0, 0, 1)), 1);
  EXPECT_EQ(testing::matches(bp, pt(0, 1, 0)), 1);
  // the isotropic tangency point a_1 is not a base point: R does not vanish there
  ContextPtr k = parse_extension("t^3-20");
  ReflectedMap r = reflected_map(curve(testing::kQuintic, k), lift_vec(S, k));
  for (const auto& [phi, mult] : l1_section(k)) {
    if (mult != 2) continue;
    Vec3 a1 = on_l1(-phi[0] * phi[1].inverse(), k, k);
    EXPECT_FALSE(is_zero_vector({r.R[0].eval(a1), r.R[1].eval(a1), r.R[2].eval(a1)}));
  }
}

TEST(BasePoints, EllipseAndIsotropicTangentsThroughTheSource) {
  Rng rng(23);
  // x^2/25 + y^2/9 = 1 with foci (+-4, 0)
  PlaneCurve c = curve("9*x^2 + 25*y^2 - 225*z^2");
  EXPECT_EQ(testing::total_size(base_points(c, pt(3, 5, 1), rng, 128)), 0);
  // both isotropic lines through a focus are tangent
  EXPECT_EQ(testing::total_size(base_points(c, pt(4, 0, 1), rng, 128)), 2);
  // only (IS) is tangent
  EXPECT_EQ(testing::total_size(base_points(c, {Elem(5), Elem(QI(0, 1)), Elem(1)}, rng, 128)), 1);
  // a circle passes through I and J
  auto circle = base_points(curve(testing::kConic), pt(3, 5, 1), rng, 128);
  EXPECT_EQ(testing::total_size(circle), 2);
  EXPECT_EQ(testing::matches(circle, point_I()), 1);
}

// Sum of h_direct over the branches at m, in the given chart.
long sum_h(const PlaneCurve& c, const ReflectedMap& r, const Mat3& M) {
  BiPoly f = local_form(c.F(), M);
  BiPoly fy = f.derivative();
  std::array<BiPoly, 3> lR;
  for (int k = 0; k < 3; ++k) lR[k] = local_form(r.R[k], M);
  long total = 0;
  for (const auto& br : newton_puiseux(Context::rationals(), f, 64 * c.degree()))
    for (auto [w, h] : split_map(br, [&](const Branch& b) {
           return std::pair<long, long>(b.context()->degree(), h_value_direct(b, lR, fy));
         }))
      total += w * h;
  return total;
}

TEST(HValue, IndependentOfTheChart) {
  Gen g(24);
  Rng rng(24);
  struct Case {
    const char* F;
    Vec3 m, S;
  };
  std::vector<Case> cases{{testing::kQuintic, pt(0, 0, 1), pt(2, 3, 1)},
                          {testing::kQuintic, pt(0, 1, 0), pt(2, 3, 1)},
                          {testing::kQuintic, pt(0, 1, 0), pt(0, 1, 0)},
                          {testing::kLemniscate, pt(0, 0, 1), pt(1, 0, 1)},
                          {testing::kQuartic, pt(0, 0, 1), pt(0, 0, 1)}};
  for (const auto& cs : cases) {
    PlaneCurve c = curve(cs.F);
    ReflectedMap r = reflected_map(c, cs.S);
    int mu = multiplicity(c, cs.m);
    long reference = sum_h(c, r, normalization_matrix(c, cs.m, rng).M);
    int charts = 0;
    while (charts < 4) {
      Vec3 c1{Elem(g.gaussian(3)), Elem(g.gaussian(3)), Elem(g.gaussian(3))};
      Vec3 c2{Elem(g.gaussian(3)), Elem(g.gaussian(3)), Elem(g.gaussian(3))};
      Mat3 M = mat_from_columns(c1, c2, cs.m);
      if (det3(M).is_zero() || !is_normalizing(c, M, mu)) continue;
      EXPECT_EQ(sum_h(c, r, M), reference) << cs.F;
      ++charts;
    }
  }
}

TEST(HValue, DispatchMatchesDirectOnRandomCurves) {
  Gen g(25);
  int checked = 0;
  while (checked < 8) {
    int d = static_cast<int>(g.integer(3, 4));
    // through I and J, and singular at the origin
    TriPoly F = g.form(d - 2, 3) * parse_form("x^2 + y^2", nullptr);
    TriPoly extra = g.form(d - 1, 3) * parse_form("z", nullptr);
    TriPoly sum = F + extra;
    TriPoly G(d);
    for (const auto& [e, cf] : sum.terms())
      if (e[2] <= d - 2) G.add_term(e, cf);
    std::optional<PlaneCurve> c;
    try {
      c.emplace(G, Context::rationals());
    } catch (const std::invalid_argument&) {
      continue;
    }
    Vec3 S = g.coin() ? pt(g.integer(-5, 5), g.integer(-5, 5), 1) : pt(1, g.integer(-5, 5), 0);
    try {
      CausticClassReport r = run(*c, S, checked + 1);
      EXPECT_TRUE(r.h_oracle_ok) << G.to_string();
      EXPECT_TRUE(r.consistent) << G.to_string();
    } catch (const DegenerateError&) {
      continue;
    } catch (const std::invalid_argument&) {
      continue;  // reducible: a triangle line is a component
    }
    ++checked;
  }
}

TEST(Corollary, GenericSourceClass) {
  Gen g(26);
  int checked = 0;
  while (checked < 5) {
    int d = static_cast<int>(g.integer(3, 4));
    TriPoly F = g.form(d - 2, 3) * parse_form("x^2 + y^2", nullptr) + g.form(d - 1, 3) * parse_form("z", nullptr);
    std::optional<PlaneCurve> c;
    try {
      c.emplace(F, Context::rationals());
    } catch (const std::invalid_argument&) {
      continue;
    }
    Vec3 S = pt(g.integer(-40, 40), g.integer(-40, 40), g.integer(1, 9));
    CausticClassReport r = run(*c, S, checked + 7);
    EXPECT_TRUE(r.consistent);
    EXPECT_EQ(r.class_value, 2 * r.dual_degree + d - r.terms.g - r.terms.mu_I - r.terms.mu_J) << F.to_string();
    ++checked;
  }
}

TEST(Corollary, ChaslesForSmoothCubic) {
  CausticClassReport r = run(curve(testing::kFermatCubic), pt(7, -3, 2));
  EXPECT_EQ(r.terms.mu_I + r.terms.mu_J + r.terms.g, 0);
  EXPECT_EQ(r.class_value, 2 * 6 + 3);
}

TEST(Delta1, EstimatesOneForTheNamedCurves) {
  struct Case {
    const char* F;
    Vec3 S;
  };
  for (const auto& cs : {Case{testing::kLemniscate, pt(2, 3, 1)}, Case{testing::kQuintic, pt(2, 3, 1)},
                         Case{testing::kQuartic, pt(0, 0, 1)}}) {
    Rng rng(27);
    EXPECT_EQ(delta1_estimate(curve(cs.F), cs.S, rng), 1) << cs.F;
  }
}

TEST(Delta1, EstimatedOptionIsReported) {
  ClassOptions opt;
  opt.delta1.reset();
  CausticClassReport r = caustic_class(curve(testing::kLemniscate), pt(1, 0, 1), opt);
  EXPECT_TRUE(r.delta1_estimated);
  EXPECT_EQ(r.delta1, 1);
  EXPECT_EQ(r.class_value, 8);
}

TEST(Paths, SelectionAndOverride) {
  ClassOptions opt;
  opt.flemma = false;
  opt.ledger = false;
  opt.delta1 = 2;
  CausticClassReport r = caustic_class(curve(testing::kLemniscate), pt(1, 0, 1), opt);
  EXPECT_FALSE(r.mclass_flemma);
  EXPECT_FALSE(r.mclass_ledger);
  EXPECT_EQ(r.mclass, 8);
  EXPECT_EQ(r.class_value, 4);
}

TEST(Extension, ReducibleModulusGivesOneAnswer) {
  // t^2 - 1 splits; both factors describe the same rational source
  ContextPtr k = parse_extension("t^2-1");
  CausticClassReport r = run(curve(testing::kLemniscate, k), parse_point("t^2:0:1", k));
  EXPECT_EQ(r.class_value, 8);
}

}  // namespace
}  // namespace caustic
