// Acceptance run: one PASS/FAIL line per criterion on stdout, details of
// failures on stderr. Exit status 0 only when every criterion passes.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "caustic/caustic.hpp"
#include "caustic/invariants.hpp"
#include "caustic/parser.hpp"

using namespace caustic;

namespace {

const char* kLemniscate = "(x^2+y^2)^2 - 2*(x^2-y^2)*z^2";
const char* kQuintic = "y^2*z^3 - x^5";
const char* kQuartic = "2*y*z^3 + 2*z^2*y^2 + 2*z*y^3 + 2*y^4 - 2*z^3*x + 2*z*y*x^2 + 5*y^2*x^2 + 3*x^4";

struct Criterion {
  Criterion() = default;
  explicit Criterion(std::string t) : title(std::move(t)) {}

  std::string title;
  bool ok = true;
  std::vector<std::string> notes;

  void fail(const std::string& why) {
    ok = false;
    notes.push_back(why);
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

// Shared across criteria: the h-value oracle is checked on every instance run for 1-5.
struct HOracleLedger {
  int instances = 0;
  int branch_records = 0;
  std::vector<std::string> failures;
} h_ledger;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  QI gaussian(long h) { return QI(integer(-h, h), integer(0, 1) ? integer(-h, h) : 0); }
  TriPoly form(int d, long h, int density = 70) {
    TriPoly f(d);
    for (int a = 0; a <= d; ++a)
      for (int b = 0; a + b <= d; ++b)
        if (integer(0, 99) < density) f.add_term({a, b, d - a - b}, Elem(gaussian(h)));
    if (f.is_zero()) f.add_term({d, 0, 0}, Elem(1));
    return f;
  }
  Rng& engine() { return rng_; }

 private:
  Rng rng_;
};

PlaneCurve curve(const std::string& text, const ContextPtr& base = nullptr) {
  return PlaneCurve(parse_form(text, base), base ? base : Context::rationals());
}

Vec3 pt(long a, long b, long c) { return {Elem(a), Elem(b), Elem(c)}; }

std::string describe(const PlaneCurve& c, const Vec3& S) {
  return c.F().to_string() + " from [" + S[0].to_string() + " : " + S[1].to_string() + " : " +
         S[2].to_string() + "]";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Runs all three paths, records the h oracle, and checks agreement and the time limit.
std::optional<CausticClassReport> run_instance(Criterion& cr, const PlaneCurve& c, const Vec3& S,
                                               double limit_s = 0, std::uint64_t seed = 1) {
  ClassOptions opt;
  opt.seed = seed;
  auto t0 = std::chrono::steady_clock::now();
  try {
    CausticClassReport r = caustic_class(c, S, opt);
    const double s = seconds_since(t0);
    if (limit_s > 0 && s > limit_s)
      cr.fail(describe(c, S) + ": took " + std::to_string(s) + " s, limit " + std::to_string(limit_s));
    ++h_ledger.instances;
    if (!r.h_oracle_ok) h_ledger.failures.push_back(describe(c, S));
    Rng rng(seed);
    h_ledger.branch_records += static_cast<int>(analyze(c, lift_vec(S, c.base()), rng, 64 * c.degree()).branches.size());
    cr.expect(r.consistent, describe(c, S) + ": inconsistent");
    for (const auto& d : r.diagnostics) cr.fail(describe(c, S) + ": " + d);
    const bool agree = r.mclass_theorem1 && r.mclass_ledger && r.mclass_flemma &&
                       *r.mclass_theorem1 == *r.mclass_ledger && *r.mclass_ledger == *r.mclass_flemma;
    cr.expect(agree, describe(c, S) + ": the three mclass paths differ");
    return r;
  } catch (const std::exception& e) {
    cr.fail(describe(c, S) + ": " + e.what());
    return std::nullopt;
  }
}

void expect_class(Criterion& cr, const PlaneCurve& c, const Vec3& S, long expected, double limit_s) {
  auto r = run_instance(cr, c, S, limit_s);
  if (r)
    cr.expect(r->class_value == expected, describe(c, S) + ": class " + std::to_string(r->class_value) +
                                             ", expected " + std::to_string(expected));
}

// Isotropic tangents of the lemniscate: l_{k,I} = V(y - i x -+ i z), l_{k,J} = V(y + i x -+ i z).
bool on_any(const Vec3& S, const QI& slope) {
  const Elem i(QI::imaginary_unit());
  Elem u = S[1] - Elem(slope) * S[0];
  return (u - i * S[2]).is_zero() || (u + i * S[2]).is_zero();
}

Criterion criterion_lemniscate() {
  Criterion cr{"lemniscate golden values and indicator formula"};
  PlaneCurve c = curve(kLemniscate);
  for (const Vec3& S : {pt(1, 2, 0), pt(0, 1, 0), pt(1, 0, 0), pt(3, -1, 0)}) expect_class(cr, c, S, 12, 60);
  expect_class(cr, c, pt(1, 0, 1), 8, 60);

  struct Finite {
    PlaneCurve c;
    Vec3 S;
  };
  ContextPtr k = parse_extension("t^2-2");
  const QI i = QI::imaginary_unit();
  std::vector<Finite> samples = {
      {c, pt(2, 3, 1)},
      {c, {Elem(1), Elem(QI(0, 2)), Elem(1)}},
      {c, {Elem(1), Elem(QI(0, -2)), Elem(1)}},
      {c, pt(-1, 0, 1)},
      {c, pt(1, 0, 1)},
      {c, pt(0, 0, 1)},
      {curve(kLemniscate, k), parse_point("t:0:1", k)},
  };
  int combos[2][2] = {};
  for (const auto& s : samples) {
    const int ind_I = on_any(s.S, i) ? 1 : 0, ind_J = on_any(s.S, -i) ? 1 : 0;
    const int mu = multiplicity(s.c, s.S);
    ++combos[ind_I][ind_J];
    expect_class(cr, s.c, s.S, 12 - 2 * (ind_I + ind_J) - mu, 60);
  }
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      cr.expect(combos[a][b] > 0, "indicator combination (" + std::to_string(a) + ", " + std::to_string(b) +
                                      ") not covered");
  return cr;
}

// x-coordinates of the points of C on l_1 = V(ix - y + (3i/25) t z) with t^3 = 20.
std::vector<std::pair<Poly<Elem>, int>> quintic_l1_section(const ContextPtr& k) {
  Elem u = Elem(QI(mpq_class(3, 25))) * k->generator();
  Poly<Elem> x({Elem(0), Elem(1)});
  Poly<Elem> shifted = x + Poly<Elem>({u});
  return squarefree_decomposition(-(shifted * shifted) - x * x * x * x * x);
}

Vec3 on_l1(const Elem& x, const ContextPtr& k, const ContextPtr& K) {
  const Elem i(QI::imaginary_unit());
  Elem t = K->lift(k->generator());
  return {x, i * x + i * Elem(QI(mpq_class(3, 25))) * t, Elem(1)};
}

Criterion criterion_quintic() {
  Criterion cr{"quintic table, all six rows"};
  PlaneCurve c = curve(kQuintic);
  ContextPtr k = parse_extension("t^3-20");
  PlaneCurve ck = curve(kQuintic, k);
  expect_class(cr, c, pt(0, 1, 0), 8, 120);
  expect_class(cr, ck, parse_point("-3/25*t:0:1", k), 9, 120);
  int simple = 0, tangency = 0;
  for (const auto& [phi, mult] : quintic_l1_section(k)) {
    if (mult == 1) {
      Adjoined K = adjoin_root(k, phi);
      expect_class(cr, curve(kQuintic, K.ctx), on_l1(K.root, k, K.ctx), 10, 120);
      ++simple;
    } else {
      Elem x = -phi[0] * phi[1].inverse();
      expect_class(cr, ck, on_l1(x, k, k), 11, 120);
      ++tangency;
    }
  }
  cr.expect(simple == 1 && tangency == 1, "unexpected shape of C cap l_1");
  expect_class(cr, c, pt(1, 2, 0), 11, 120);
  expect_class(cr, c, pt(0, 0, 1), 11, 120);
  expect_class(cr, ck, parse_point("0:3/25*i*t:1", k), 11, 120);
  expect_class(cr, c, pt(1, 1, 1), 12, 120);
  expect_class(cr, c, pt(2, 3, 1), 13, 120);
  return cr;
}

Criterion criterion_counterexample() {
  Criterion cr{"counterexample quartic: class 23, BL 21, corrections 2"};
  auto r = run_instance(cr, curve(kQuartic), pt(0, 0, 1));
  if (!r) return cr;
  cr.expect(r->class_value == 23, "class " + std::to_string(r->class_value));
  cr.expect(r->bl.has_value(), "no Brocard-Lemoyne value");
  if (r->bl) {
    cr.expect(r->bl->value == 21, "BL " + std::to_string(r->bl->value));
    cr.expect(r->bl->correction_sum() == 2, "correction sum " + std::to_string(r->bl->correction_sum()));
  }
  return cr;
}

Criterion criterion_dual_degrees() {
  Criterion cr{"dual degrees by both paths"};
  const std::vector<std::pair<const char*, int>> cases = {
      {kLemniscate, 6}, {kQuintic, 5}, {kQuartic, 12}, {"x^3 + y^3 + z^3", 6}};
  for (const auto& [text, want] : cases) {
    Rng rng(3);
    PlaneCurve c = curve(text);
    DualDegree dd = dual_degree(c, rng, 64 * c.degree());
    cr.expect(dd.polar == want && dd.ledger == want, std::string(text) + ": polar " + std::to_string(dd.polar) +
                                                         ", ledger " + std::to_string(dd.ledger));
  }
  return cr;
}

Criterion criterion_three_paths() {
  Criterion cr{"three-path agreement on the curve corpus"};
  struct Entry {
    const char* F;
    const char* ext;
    std::vector<const char*> sources;  // finite, at infinity, on the curve
  };
  const std::vector<Entry> corpus = {
      {"9*x^2 + 25*y^2 - 225*z^2", "", {"1:2:3", "1:2:0", "5:0:1"}},
      {"y*z - x^2", "", {"2:-3:1", "1:2:0", "1:1:1"}},
      {"x^2 - 2*y^2 - z^2", "", {"3:1:2", "2:1:0", "1:0:1"}},
      {"y^2*z - x^3 - x^2*z", "", {"1:2:3", "1:1:0", "3:6:1"}},
      {"y^2*z - x^3 - x^2*z", "", {"2:-1:1", "0:1:0", "0:0:1"}},
      {"y^2*z - x^3", "", {"1:2:3", "2:1:0", "1:1:1"}},
      {"y^2*z - x^3", "", {"-1:4:2", "1:0:0", "0:0:1"}},
      {"x^3 + y^3 + z^3", "", {"7:-3:2", "1:2:0", "-1:0:1"}},
      {"y^2*z - x^3 + x*z^2", "", {"2:5:3", "1:3:0", "1:0:1"}},
      {"x^3 + y^3 - 3*x*y*z", "", {"1:2:5", "1:2:0", "3:3:2"}},
      {"x*(x^2 + y^2) - z*(x^2 - y^2)", "", {"2:1:3", "1:3:0", "1:0:1"}},
      {"x^4 + y^4 - z^4", "", {"1:2:3", "2:1:0", "1:0:1"}},
      {"y^2*z^2 - x^4 - y^4", "", {"1:2:3", "1:2:0", "0:0:1"}},
      {kLemniscate, "", {"2:3:1", "1:2:0", "0:0:1"}},
      {kLemniscate, "t^2-2", {"1:0:1", "0:1:0", "t:0:1"}},
      {kQuintic, "", {"2:3:1", "1:2:0", "1:1:1"}},
      {kQuartic, "", {"1:2:3", "1:2:0", "0:0:1"}},
      {"x^5 + y^5 - x*y*z^3", "", {"1:2:3", "1:2:0", "0:0:1"}},
  };
  int curves = 0, instances = 0;
  std::vector<int> degrees;
  for (const auto& e : corpus) {
    ContextPtr base = *e.ext ? parse_extension(e.ext) : nullptr;
    PlaneCurve c = curve(e.F, base);
    ++curves;
    degrees.push_back(c.degree());
    for (std::size_t k = 0; k < e.sources.size(); ++k) {
      Vec3 S = parse_point(e.sources[k], base);
      const bool at_infinity = S[2].is_zero(), on_curve = c.F().eval(S).is_zero();
      const bool kind_ok = k == 0 ? !at_infinity && !on_curve : k == 1 ? at_infinity : on_curve && !at_infinity;
      cr.expect(kind_ok, describe(c, S) + ": source is not of the intended kind");
      if (run_instance(cr, c, S)) ++instances;
    }
  }
  cr.expect(curves >= 12 && instances >= 36, "corpus too small");
  for (int d = 2; d <= 5; ++d)
    cr.expect(std::find(degrees.begin(), degrees.end(), d) != degrees.end(), "no curve of degree " + std::to_string(d));
  return cr;
}

Criterion criterion_corollary() {
  Criterion cr{"generic source: class = 2 d^v + d - g - mu_I - mu_J"};
  Gen g(41);
  const TriPoly circle = parse_form("x^2 + y^2", nullptr), z = parse_form("z", nullptr);
  int checked = 0;
  while (checked < 5) {
    const int d = static_cast<int>(g.integer(3, 4));
    // alternate dense curves with curves through I and J
    TriPoly F = checked % 2 ? g.form(d - 2, 3) * circle + g.form(d - 1, 3) * z : g.form(d, 3, 80);
    std::optional<PlaneCurve> c;
    try {
      c.emplace(F, Context::rationals());
    } catch (const std::invalid_argument&) {
      continue;
    }
    Vec3 S = pt(g.integer(-40, 40), g.integer(-40, 40), g.integer(1, 9));
    if (c->F().eval(S).is_zero() || degeneracy_check(*c, S).degenerate) continue;
    auto r = run_instance(cr, *c, S, 0, 100 + checked);
    if (!r) {
      ++checked;
      continue;
    }
    const long want = 2L * r->dual_degree + d - r->terms.g - r->terms.mu_I - r->terms.mu_J;
    cr.expect(r->class_value == want, describe(*c, S) + ": class " + std::to_string(r->class_value) +
                                          ", corollary " + std::to_string(want));
    ++checked;
  }
  return cr;
}

// Monic in y, only common zero on x = 0 is the origin.
BiPoly random_local(Gen& g, int n, int a, const QI& lead) {
  std::vector<Poly<Elem>> cols(n + 1);
  cols[n] = Poly<Elem>(Elem(1));
  cols[a] = Poly<Elem>(Elem(lead));
  for (int j = 0; j < n; ++j) {
    std::vector<Elem> col(cols[j].coeffs().begin(), cols[j].coeffs().end());
    col.resize(4);
    for (int i = 1; i < 4; ++i)
      if (g.integer(0, 2) == 0) col[i] = Elem(g.gaussian(3));
    cols[j] = Poly<Elem>(std::move(col));
  }
  return BiPoly(std::move(cols));
}

Poly<QI> at_x0_without_y_power(const BiPoly& p) {
  std::vector<QI> c;
  for (const auto& col : p.coeffs()) c.push_back(col.coeff(0).constant_value());
  Poly<QI> r(std::move(c));
  const int low = r.low_degree();
  return Poly<QI>(std::vector<QI>(r.coeffs().begin() + low, r.coeffs().end()));
}

Criterion criterion_oracles() {
  Criterion cr{"oracle suites: intersections, h-values, Bezout"};
  Gen g(43);
  int pairs = 0, tries = 0;
  while (pairs < 50 && tries < 2000) {
    ++tries;
    int n1 = static_cast<int>(g.integer(2, 4)), n2 = static_cast<int>(g.integer(1, 4));
    int a1 = static_cast<int>(g.integer(1, n1 - 1)), a2 = static_cast<int>(g.integer(1, n2));
    BiPoly f = random_local(g, n1, a1, QI(g.integer(1, 3)));
    BiPoly h = random_local(g, n2, a2, QI(-g.integer(1, 3), 1));
    if (gcd(at_x0_without_y_power(f), at_x0_without_y_power(h)).degree() > 0) continue;
    Poly<Elem> res = resultant(f, h);
    if (res.is_zero()) continue;
    int total = 0;
    try {
      for (const auto& b : newton_puiseux(Context::rationals(), f, 64))
        for (auto [w, v] : split_map(b, [&](const Branch& x) {
               return std::pair<int, int>(x.context()->degree(), x.valuation(h));
             }))
          total += w * v;
    } catch (const std::invalid_argument&) {
      continue;
    } catch (const TruncationError&) {
      continue;
    }
    cr.expect(total == res.low_degree(), "local pair: branch sum " + std::to_string(total) + ", resultant " +
                                             std::to_string(res.low_degree()));
    ++pairs;
  }
  cr.expect(pairs >= 50, "only " + std::to_string(pairs) + " local pairs");

  cr.expect(h_ledger.instances > 0 && h_ledger.branch_records > 0, "no instances recorded for the h oracle");
  for (const auto& f : h_ledger.failures) cr.fail("h dispatch differs from direct valuation: " + f);

  int lines = 0;
  while (lines < 100) {
    const int d = static_cast<int>(g.integer(2, 5));
    std::optional<PlaneCurve> c;
    try {
      c.emplace(g.form(d, 3, 60), Context::rationals());
    } catch (const std::invalid_argument&) {
      continue;
    }
    Vec3 line{Elem(g.gaussian(3)), Elem(g.gaussian(3)), Elem(g.gaussian(3))};
    if (is_zero_vector(line)) continue;
    std::vector<LineHit> hits;
    try {
      hits = intersect_with_line(*c, line);
    } catch (const std::invalid_argument&) {
      continue;
    }
    int total = 0;
    for (const auto& hit : hits) total += hit.i * hit.point.size();
    cr.expect(total == d, c->F().to_string() + ": line sum " + std::to_string(total));
    ++lines;
  }
  return cr;
}

Criterion criterion_invariants() {
  Criterion cr{"invariant suite"};
  struct Case {
    const char* F;
    Vec3 S;
  };
  const std::vector<Case> cases = {
      {kLemniscate, pt(1, 0, 1)},        {kQuintic, pt(2, 3, 1)},          {kQuartic, pt(0, 0, 1)},
      {"y^2*z - x^3 - x^2*z", pt(1, 2, 3)}, {"y^2*z - x^3", pt(1, 2, 0)}, {"x^3 + y^3 + z^3", pt(7, -3, 2)},
  };
  for (const auto& cs : cases) {
    PlaneCurve c = curve(cs.F);
    try {
      for (const auto& chk : check_invariants(c, cs.S, 5, 20))
        cr.expect(chk.ok, describe(c, cs.S) + ": " + chk.name + " " + chk.detail);
    } catch (const std::exception& e) {
      cr.fail(describe(c, cs.S) + ": " + e.what());
    }
  }
  return cr;
}

}  // namespace

int main() {
  const std::vector<std::function<Criterion()>> criteria = {
      criterion_lemniscate, criterion_quintic,   criterion_counterexample, criterion_dual_degrees,
      criterion_three_paths, criterion_corollary, criterion_oracles,        criterion_invariants,
  };
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    auto t0 = std::chrono::steady_clock::now();
    Criterion cr;
    try {
      cr = criteria[k]();
    } catch (const std::exception& e) {
      cr.title = "criterion " + std::to_string(k + 1);
      cr.fail(std::string("uncaught: ") + e.what());
    }
    std::ostringstream line;
    line << (cr.ok ? "PASS" : "FAIL") << "  " << k + 1 << ". " << cr.title << " (" << seconds_since(t0) << " s)";
    std::cout << line.str() << std::endl;
    for (const auto& n : cr.notes) std::cerr << "    " << n << "\n";
    all = all && cr.ok;
  }
  return all ? 0 : 1;
}
