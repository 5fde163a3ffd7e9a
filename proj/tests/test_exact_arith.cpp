#include <gtest/gtest.h>

#include <algorithm>

#include "caustic/extension.hpp"
#include "caustic/modp.hpp"
#include "caustic/tripoly.hpp"
#include "generators.hpp"

using namespace caustic;
using caustic::testing::Gen;

namespace {

using PQ = Poly<QI>;
using PPQ = Poly<PQ>;

PQ P(std::initializer_list<long> c) {
  std::vector<QI> v;
  for (long a : c) v.emplace_back(a);
  return PQ(std::move(v));
}

// Sylvester determinant by Gaussian elimination: an oracle independent of the
// subresultant sequence.
QI sylvester_resultant(const PQ& f, const PQ& g) {
  const int m = f.degree(), n = g.degree();
  const int N = m + n;
  std::vector<std::vector<QI>> a(N, std::vector<QI>(N));
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= m; ++k) a[r][r + m - k] = f.coeff(k);
  for (int r = 0; r < m; ++r)
    for (int k = 0; k <= n; ++k) a[n + r][r + n - k] = g.coeff(k);
  QI det(1);
  for (int c = 0; c < N; ++c) {
    int piv = -1;
    for (int r = c; r < N; ++r)
      if (!a[r][c].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) return QI(0);
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    QI inv = a[c][c].inverse();
    for (int r = c + 1; r < N; ++r) {
      if (a[r][c].is_zero()) continue;
      QI f = a[r][c] * inv;
      for (int k = c; k < N; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

PPQ in_y(std::initializer_list<PQ> c) { return PPQ(std::vector<PQ>(c)); }

}  // namespace

TEST(GaussianRational, CanonicalFormAndInverse) {
  QI a(mpq_class(6, -4), mpq_class(2, 8));
  EXPECT_EQ(a.re().get_den(), 2);
  EXPECT_EQ(a.re().get_num(), -3);
  EXPECT_EQ(a.im(), mpq_class(1, 4));
  Gen gen(1);
  for (int k = 0; k < 200; ++k) {
    QI x = gen.rational();
    if (x.is_zero()) continue;
    EXPECT_TRUE((x * x.inverse()).is_one());
  }
  EXPECT_THROW(QI(0).inverse(), std::domain_error);
  EXPECT_EQ(QI::imaginary_unit() * QI::imaginary_unit(), QI(-1));
}

TEST(GaussianRational, FieldAxiomsOnRandomTriples) {
  Gen gen(2);
  for (int k = 0; k < 200; ++k) {
    QI a = gen.rational(), b = gen.rational(), c = gen.rational();
    EXPECT_EQ(a * (b + c), a * b + a * c);
    EXPECT_EQ((a * b) * c, a * (b * c));
    EXPECT_EQ(a - a, QI(0));
  }
}

TEST(Resultant, DistinctLinearFactors) {
  // Sylvester convention: Res(y - 1, y + 1) = 2.
  EXPECT_EQ(resultant(P({-1, 1}), P({1, 1})), QI(2));
  EXPECT_EQ(sylvester_resultant(P({-1, 1}), P({1, 1})), QI(2));
}

TEST(Resultant, EvaluationAtZero) {
  PQ x3 = PQ::monomial(QI(1), 3);
  PPQ f = in_y({-x3, PQ(), PQ(QI(1))});  // y^2 - x^3
  PPQ g = in_y({PQ(), PQ(QI(1))});       // y
  EXPECT_EQ(resultant(f, g), -x3);
}

TEST(Resultant, CuspAgainstLineHasValuationTwo) {
  PQ x = PQ::variable();
  PQ x3 = PQ::monomial(QI(1), 3);
  PPQ f = in_y({-x3, PQ(), PQ(QI(1))});
  PPQ line = in_y({-x, PQ(QI(1))});
  PQ r = resultant(f, line);
  // product of root differences (x^{3/2} - x)(-x^{3/2} - x) = x^2 - x^3
  EXPECT_EQ(r, P({0, 0, 1, -1}));
  EXPECT_EQ(r.low_degree(), 2);
}

TEST(Resultant, MatchesSylvesterDeterminant) {
  Gen gen(3);
  for (int k = 0; k < 60; ++k) {
    PQ f = gen.poly(static_cast<int>(gen.integer(1, 6)));
    PQ g = gen.poly(static_cast<int>(gen.integer(1, 6)));
    EXPECT_EQ(resultant(f, g), sylvester_resultant(f, g)) << f.to_string() << " | " << g.to_string();
  }
}

TEST(Resultant, MultiplicativeInFirstArgument) {
  Gen gen(4);
  for (int k = 0; k < 40; ++k) {
    PQ f = gen.poly(static_cast<int>(gen.integer(1, 4)));
    PQ g = gen.poly(static_cast<int>(gen.integer(1, 4)));
    PQ h = gen.poly(static_cast<int>(gen.integer(1, 4)));
    EXPECT_EQ(resultant(f * g, h), resultant(f, h) * resultant(g, h));
  }
}

TEST(Resultant, BivariateMatchesSpecializationAtRandomPoints) {
  Gen gen(5);
  for (int k = 0; k < 15; ++k) {
    std::vector<PQ> fc, gc;
    for (int j = 0; j <= 3; ++j) fc.push_back(gen.poly(2));
    for (int j = 0; j <= 2; ++j) gc.push_back(gen.poly(2));
    PPQ f(fc), g(gc);
    PQ r = resultant(f, g);
    for (int s = 0; s < 3; ++s) {
      QI x0 = gen.gaussian(7);
      PQ fs = f.map([&](const PQ& c) { return c.eval(x0); });
      PQ gs = g.map([&](const PQ& c) { return c.eval(x0); });
      if (fs.degree() != 3 || gs.degree() != 2) continue;
      EXPECT_EQ(r.eval(x0), sylvester_resultant(fs, gs));
    }
  }
}

TEST(Squarefree, Examples) {
  PQ x3 = PQ::monomial(QI(1), 3);
  EXPECT_EQ(squarefree_part(x3), PQ::variable());
  PQ f = P({-1, 1}) * P({-1, 1}) * P({2, 1});
  EXPECT_EQ(squarefree_part(f), P({-1, 1}) * P({2, 1}));
}

TEST(Squarefree, LemniscateLineAtInfinity) {
  TriPoly x = TriPoly::variable(0), y = TriPoly::variable(1), z = TriPoly::variable(2);
  TriPoly F = (x * x + y * y).pow(2) - Elem(2) * (x * x - y * y) * z * z;
  std::array<Poly<Elem>, 3> line{Poly<Elem>::variable(), Poly<Elem>(Elem(1)), Poly<Elem>()};
  Poly<Elem> r = F.eval_univariate(line);
  PQ rq = r.map([](const Elem& e) { return e.constant_value(); });
  EXPECT_EQ(rq, P({1, 0, 2, 0, 1}));
  EXPECT_EQ(squarefree_part(rq), P({1, 0, 1}));
}

TEST(Squarefree, PropertiesOnRandomProducts) {
  Gen gen(6);
  for (int k = 0; k < 40; ++k) {
    PQ a = gen.poly(static_cast<int>(gen.integer(1, 3)));
    PQ b = gen.poly(static_cast<int>(gen.integer(1, 2)));
    PQ f = a * a * b * gen.poly(1);
    PQ s = squarefree_part(f);
    EXPECT_TRUE((f % s).is_zero());
    EXPECT_EQ(gcd(s, s.derivative()).degree(), 0);
    auto dec = squarefree_decomposition(f);
    PQ prod(QI(1));
    for (auto& [fac, mult] : dec)
      for (int j = 0; j < mult; ++j) prod *= fac;
    EXPECT_EQ(prod, make_monic(f));
  }
}

TEST(Extension, InverseOfGeneratorModCubic) {
  ContextPtr k = Context::make(P({-20, 0, 0, 1}));
  Elem t = k->generator();
  Elem inv = t.inverse();
  EXPECT_EQ(inv, k->element(PQ::monomial(QI(mpq_class(1, 20)), 2)));
  EXPECT_EQ(t * inv, Elem(1));
}

TEST(Extension, ZeroDivisorSplits) {
  ContextPtr k = Context::make(P({0, -1, 1}));  // t^2 - t
  Elem t = k->generator();
  try {
    (void)t.inverse();
    FAIL() << "expected a split";
  } catch (const Split& s) {
    EXPECT_EQ(s.factor() * s.cofactor(), k->modulus());
    EXPECT_EQ(s.factor().degree(), 1);
    bool has_t = s.factor() == PQ::variable() || s.cofactor() == PQ::variable();
    EXPECT_TRUE(has_t);
  }
  EXPECT_THROW((void)t.zero_test(), Split);
}

TEST(Extension, TranslateInvertibleModCubic) {
  ContextPtr k = Context::make(P({-20, 0, 0, 1}));
  Elem e = k->generator() - Elem(1);
  EXPECT_TRUE(e.is_invertible());
  EXPECT_EQ(e * e.inverse(), Elem(1));
}

TEST(Extension, SplittingIsLossless) {
  Gen gen(7);
  for (int k = 0; k < 20; ++k) {
    PQ a = gen.poly(static_cast<int>(gen.integer(1, 3)));
    PQ b = gen.poly(static_cast<int>(gen.integer(1, 3)));
    PQ m = a * b;
    if (gcd(m, m.derivative()).degree() != 0) continue;
    ContextPtr c = Context::make(m);
    try {
      (void)c->element(a).inverse();
      ADD_FAILURE() << "a divides the modulus, inversion must split";
    } catch (const Split& s) {
      EXPECT_EQ(s.factor() * s.cofactor(), c->modulus());
      ContextPtr c1 = c->restrict_to(s.factor());
      ContextPtr c2 = c->restrict_to(s.cofactor());
      EXPECT_EQ(c1->degree() + c2->degree(), c->degree());
    }
  }
}

TEST(Extension, SplitMapRunsOncePerComponent) {
  struct Obj {
    ContextPtr ctx;
    const ContextPtr& context() const { return ctx; }
    Obj restricted(const ContextPtr& c) const { return {c}; }
  };
  ContextPtr k = Context::make(P({0, -1, 1}));
  auto degrees = split_map(Obj{k}, [](const Obj& o) {
    Elem t = o.ctx->generator();
    return t.zero_test() ? 0 : 1;
  });
  ASSERT_EQ(degrees.size(), 2u);
  EXPECT_EQ(degrees[0] + degrees[1], 1);
}

TEST(Extension, AdjoinSquareRootOverQuadraticField) {
  ContextPtr k = Context::make(P({-2, 0, 1}));  // t^2 = 2
  Poly<Elem> phi(std::vector<Elem>{-k->generator(), Elem(0), Elem(1)});  // w^2 - t
  Adjoined a = adjoin_root(k, phi);
  EXPECT_EQ(a.ctx->degree(), 4);
  Elem w = a.root;
  EXPECT_EQ(w * w, k->generator().in(a.ctx));
  EXPECT_EQ(w * w * w * w, Elem(2).in(a.ctx));
}

TEST(Extension, AdjoinOverSplittableBase) {
  // base t^2 - 1 (two rational points), adjoin a root of w^2 - (t + 2)
  ContextPtr k = Context::make(P({-1, 0, 1}));
  Poly<Elem> phi(std::vector<Elem>{-(k->generator() + Elem(2)), Elem(0), Elem(1)});
  Adjoined a = adjoin_root(k, phi);
  EXPECT_EQ(a.ctx->degree(), 4);
  EXPECT_EQ(a.root * a.root, (k->generator() + Elem(2)).in(a.ctx));
}

TEST(Extension, AdjoinOverRationalsIsDirect) {
  Poly<Elem> phi(std::vector<Elem>{Elem(-20), Elem(0), Elem(0), Elem(1)});
  Adjoined a = adjoin_root(Context::rationals(), phi);
  EXPECT_EQ(a.ctx->modulus(), P({-20, 0, 0, 1}));
  EXPECT_EQ(a.root * a.root * a.root, Elem(20));
}

TEST(TriPolyTest, SubstituteIdentityAndSwap) {
  Gen gen(8);
  TriPoly F = gen.form(4);
  EXPECT_EQ(F.substitute_linear(identity3()), F);
  Mat3 swap;
  swap[0][1] = Elem(1);
  swap[1][0] = Elem(1);
  swap[2][2] = Elem(1);
  TriPoly x = TriPoly::variable(0), y = TriPoly::variable(1);
  EXPECT_EQ((x * x).substitute_linear(swap), y * y);
}

TEST(TriPolyTest, RightGroupAction) {
  Gen gen(9);
  for (int k = 0; k < 10; ++k) {
    TriPoly F = gen.form(static_cast<int>(gen.integer(2, 4)));
    Mat3 m = gen.invertible(), n = gen.invertible();
    EXPECT_EQ(F.substitute_linear(mat_mul(m, n)), F.substitute_linear(m).substitute_linear(n));
  }
}

TEST(TriPolyTest, UnimodularRoundTrip) {
  Gen gen(10);
  for (int k = 0; k < 10; ++k) {
    TriPoly F = gen.form(3);
    Mat3 m = gen.unimodular();
    ASSERT_EQ(det3(m), Elem(1));
    EXPECT_EQ(F.substitute_linear(m).substitute_linear(adjugate3(m)), F);
  }
}

TEST(TriPolyTest, EulerIdentity) {
  Gen gen(11);
  TriPoly F = gen.form(5);
  TriPoly euler = TriPoly::variable(0) * F.partial(0) + TriPoly::variable(1) * F.partial(1) +
                  TriPoly::variable(2) * F.partial(2);
  EXPECT_EQ(euler, Elem(5) * F);
}

TEST(TriPolyTest, InhomogeneousTermRejected) {
  TriPoly F(2);
  F.add_term({2, 0, 0}, Elem(1));
  EXPECT_THROW(F.add_term({1, 0, 0}, Elem(1)), std::invalid_argument);
}

namespace {

using PF = Poly<Fp>;

TEST(ModP, PrimeAndSquareRootOfMinusOne) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 5; ++k) {
    ModPrime mp = random_mod_prime(rng);
    EXPECT_EQ(mp.p % 4, 1U);
    EXPECT_EQ(mulmod(mp.sqrt_minus_one, mp.sqrt_minus_one, mp.p), mp.p - 1);
  }
}

TEST(ModP, ReductionIsARingMap) {
  std::mt19937_64 rng(12);
  Gen gen(13);
  ModPrime mp = random_mod_prime(rng);
  FpScope scope(mp);
  for (int k = 0; k < 50; ++k) {
    QI a = gen.gaussian(1000) / gen.nonzero_gaussian(50), b = gen.rational(1000);
    auto ra = reduce_qi(a, mp), rb = reduce_qi(b, mp);
    ASSERT_TRUE(ra && rb);
    EXPECT_EQ(Fp::raw(*reduce_qi(a * b, mp)), Fp::raw(*ra) * Fp::raw(*rb));
    EXPECT_EQ(Fp::raw(*reduce_qi(a + b, mp)), Fp::raw(*ra) + Fp::raw(*rb));
  }
  EXPECT_EQ(Fp::raw(*reduce_qi(QI(0, 1), mp)) * Fp::raw(*reduce_qi(QI(0, 1), mp)), Fp(-1));
  EXPECT_FALSE(reduce_qi(QI(mpq_class(1, mpz_class(static_cast<unsigned long>(mp.p)))), mp).has_value());
}

TEST(ModP, RootsOfSplitProducts) {
  std::mt19937_64 rng(14);
  FpScope scope(random_mod_prime(rng));
  std::uniform_int_distribution<std::uint64_t> dist(0, Fp::modulus() - 1);
  std::uint64_t c = 2;
  while (powmod(c, (Fp::modulus() - 1) / 2, Fp::modulus()) == 1) ++c;
  for (int k = 0; k < 20; ++k) {
    std::vector<std::uint64_t> want;
    PF f(Fp(1));
    for (int j = 0; j < 1 + k % 6; ++j) {
      std::uint64_t r = dist(rng);
      want.push_back(r);
      f = f * PF({-Fp::raw(r), Fp(1)});
    }
    f = f * f * PF({-Fp::raw(c), Fp(0), Fp(1)});
    std::vector<std::uint64_t> got;
    for (const Fp& r : roots_mod_p(f, rng)) got.push_back(r.value());
    std::sort(want.begin(), want.end());
    want.erase(std::unique(want.begin(), want.end()), want.end());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, want);
  }
}

TEST(ModP, NoActivePrimeThrows) { EXPECT_THROW(Fp::modulus(), std::logic_error); }

}  // namespace
