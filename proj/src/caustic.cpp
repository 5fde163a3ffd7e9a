#include "caustic/caustic.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>

#include "caustic/modp.hpp"

namespace caustic {

namespace {

using PE = Poly<Elem>;

long divide_total(long total, int base_degree, const char* what) {
  if (total % base_degree != 0)
    throw InconsistentError(std::string(what) + " is not the same for all conjugate configurations");
  return total / base_degree;
}

bool is_cyclic(const Vec3& S) { return same_point(S, point_I()) || same_point(S, point_J()); }

}  // namespace

std::array<TriPoly, 3> reflected_map_general(const TriPoly& G, const Vec3& A, const Vec3& B, const Vec3& S) {
  TriPoly dA = G.polar(A), dB = G.polar(B), dS = G.polar(S);
  TriPoly AB = dA * dB, SA = dS * dA, SB = dS * dB;
  std::array<TriPoly, 3> V;
  for (int k = 0; k < 3; ++k) V[k] = S[k] * AB - B[k] * SA - A[k] * SB;
  TriPoly x = TriPoly::variable(0), y = TriPoly::variable(1), z = TriPoly::variable(2);
  return {y * V[2] - z * V[1], z * V[0] - x * V[2], x * V[1] - y * V[0]};
}

ReflectedMap reflected_map(const PlaneCurve& c, const Vec3& S) {
  if (is_cyclic(S)) throw DegenerateError("the source is a cyclic point");
  return {S, reflected_map_general(c.F(), point_I(), point_J(), S)};
}

TriPoly reflected_polar(const ReflectedMap& r, const Vec3& a) {
  TriPoly p = a[0] * r.R[0] + a[1] * r.R[1] + a[2] * r.R[2];
  if (p.is_zero()) throw DegenerateError("reflected polar vanishes identically");
  return p;
}

Degeneracy degeneracy_check(const PlaneCurve& c, const Vec3& S) {
  if (c.degree() == 1) return {true, "the mirror is a line"};
  if (same_point(S, point_I())) return {true, "the source is the cyclic point I"};
  if (same_point(S, point_J())) return {true, "the source is the cyclic point J"};
  if (c.degree() == 2) {
    auto tangent_through = [&](const Vec3& P) {
      std::array<PE, 3> line;
      for (int k = 0; k < 3; ++k) line[k] = PE(std::vector<Elem>{S[k], P[k]});
      PE r = c.F().eval_univariate(line);
      Elem disc = r.coeff(1) * r.coeff(1) - Elem(4) * r.coeff(0) * r.coeff(2);
      return disc.zero_test();
    };
    // on l_inf both lines are l_inf: only its point of contact is a focus
    const bool at_infinity = S[2].zero_test();
    if (tangent_through(point_I()) && tangent_through(point_J()) && (!at_infinity || c.F().eval(S).zero_test()))
      return {true, "the source is a focus of the conic"};
  }
  return {};
}

HCase h_value_dispatch(const HInput& in, const Branch& b) {
  const int e = in.e, i = in.i;
  const int n = in.I_on_T + in.J_on_T + in.S_on_T;
  const bool special = in.is_I || in.is_J || in.is_S;
  switch (n) {
    case 0:
      return {1, 0, std::nullopt};
    case 1:
      return special ? HCase{3, e, std::nullopt} : HCase{2, 0, std::nullopt};
    case 2:
      if (in.S_on_T) {
        bool own = in.I_on_T ? (in.is_I || in.is_S) : (in.is_J || in.is_S);
        return own ? HCase{5, i, std::nullopt} : HCase{4, i + std::min(i - 2 * e, 0), std::nullopt};
      }
      return (in.is_I || in.is_J) ? HCase{7, i, std::nullopt} : HCase{6, i - e, std::nullopt};
    default:
      break;
  }
  if (in.is_S) {
    if (i != 2 * e) return {10, 2 * i - e, std::nullopt};
    std::optional<int> k1 = first_char_exponent(b, 3 * e);
    return {11, e + std::min(k1.value_or(3 * e), 3 * e), k1};
  }
  if (in.is_I || in.is_J) return {9, 2 * i - e, std::nullopt};
  return {8, 2 * i - 2 * e, std::nullopt};
}

int h_value_direct(const Branch& b, const std::array<BiPoly, 3>& local_R, const BiPoly& fy) {
  auto mv = b.min_valuation({local_R[0], local_R[1], local_R[2]});
  if (!mv) throw DegenerateError("the reflected map vanishes along a branch of the mirror");
  return *mv - 2 * b.valuation(fy);
}

namespace {

struct PointOut {
  HitRecord hit;
  std::vector<BranchRecord> branches;
  std::optional<PointCluster> base;
};

class Analyzer {
 public:
  Analyzer(CausticAnalysis& a, Rng& rng, int cap_x) : a_(a), rng_(rng), cap_x_(cap_x) {}

  std::vector<PointOut> visit(const PointCluster& m, int line, int i, const std::vector<Vec3>& lines) {
    return split_map(m, [&](const PointCluster& q) {
      PointOut out;
      out.hit.line = line;
      out.hit.point = q.to_string();
      out.hit.weight = q.size();
      out.hit.i = i;
      out.hit.mu = multiplicity(a_.curve, q.coords);
      out.hit.is_I = same_point(q.coords, point_I());
      out.hit.is_J = same_point(q.coords, point_J());
      out.hit.is_S = same_point(q.coords, a_.S);
      const int first_line = line < 0 ? static_cast<int>(lines.size()) : line;
      bool owned = true;
      for (int k = 0; k < first_line && owned; ++k) owned = !on_line(lines[k], q.coords);
      if (!owned) return out;
      Vec3 Rm{a_.R.R[0].eval(q.coords), a_.R.R[1].eval(q.coords), a_.R.R[2].eval(q.coords)};
      if (is_zero_vector(Rm)) out.base = q;
      out.branches = branch_records(q, out.hit);
      return out;
    });
  }

 private:
  std::vector<BranchRecord> branch_records(const PointCluster& q, const HitRecord& hit) {
    PointBranches pb = branches_at(a_.curve, q, rng_, cap_x_);
    const Mat3& M = pb.chart.M;
    BiPoly fy = pb.chart.f.derivative();
    std::array<BiPoly, 3> lR;
    for (int k = 0; k < 3; ++k) lR[k] = local_form(a_.R.R[k], M);
    std::vector<BranchRecord> out;
    for (const auto& br : pb.branches) {
      auto recs = split_map(br, [&](const Branch& b) {
        BranchRecord r;
        r.point = hit.point;
        r.weight = b.context()->degree();
        r.mu = hit.mu;
        Vec3 T = branch_tangent(b, M);
        r.input.e = b.e();
        r.input.i = branch_line_intersection(b, M, T);
        r.input.I_on_T = on_line(T, point_I());
        r.input.J_on_T = on_line(T, point_J());
        r.input.S_on_T = on_line(T, a_.S);
        r.input.is_I = hit.is_I;
        r.input.is_J = hit.is_J;
        r.input.is_S = hit.is_S;
        r.i_infinity = branch_line_intersection(b, M, line_at_infinity());
        r.v = b.valuation(fy);
        r.dispatch = h_value_dispatch(r.input, b);
        r.h_direct = h_value_direct(b, lR, fy);
        return r;
      });
      out.insert(out.end(), recs.begin(), recs.end());
    }
    return out;
  }

  CausticAnalysis& a_;
  Rng& rng_;
  int cap_x_;
};

}  // namespace

CausticAnalysis analyze(const PlaneCurve& c, const Vec3& S_in, Rng& rng, int cap_x) {
  CausticAnalysis a;
  a.curve = c;
  a.base_degree = c.base()->degree();
  a.S = lift_vec(S_in, c.base());
  a.S_at_infinity = a.S[2].zero_test();
  a.R = reflected_map(c, a.S);
  auto sing = singular_points(c, rng);
  a.dual = {dual_degree_polar(c, sing, rng), dual_degree_ledger(c, sing, rng, cap_x)};
  if (!a.dual.agree())
    throw InconsistentError("dual degree paths disagree: polar " + std::to_string(a.dual.polar) + ", ledger " +
                            std::to_string(a.dual.ledger));
  a.mu_I = multiplicity(c, point_I());
  a.mu_J = multiplicity(c, point_J());
  a.mu_S = multiplicity(c, a.S);

  std::vector<Vec3> lines{line_at_infinity()};
  if (!a.S_at_infinity) {
    lines.push_back(cross(point_I(), a.S));
    lines.push_back(cross(point_J(), a.S));
  }
  Analyzer an(a, rng, cap_x);
  auto collect = [&](const std::vector<PointOut>& outs, bool hit) {
    for (const auto& o : outs) {
      if (hit) a.hits.push_back(o.hit);
      a.branches.insert(a.branches.end(), o.branches.begin(), o.branches.end());
      if (o.base) a.base_points.push_back(*o.base);
    }
  };
  // Simple roots away from I, J and S are smooth transversal points with h = 0
  // and no contribution to any term, so only the vertices are marked.
  std::vector<std::vector<LineHit>> sections;
  if (a.S_at_infinity) {
    Elem lam = -(cross(a.S, point_J())[2] * cross(point_I(), point_J())[2].inverse());
    sections.push_back(line_section(c, point_I(), a.S, {lam}, false));
  } else {
    sections.push_back(line_section(c, point_I(), point_J(), {}, false));
    sections.push_back(line_section(c, point_I(), a.S, {}, false));
    sections.push_back(line_section(c, point_J(), a.S, {}, false));
  }
  for (int L = 0; L < static_cast<int>(lines.size()); ++L)
    for (const auto& h : sections[L]) collect(an.visit(h.point, L, h.i, lines), true);
  for (const auto& m : sing) collect(an.visit(m, -1, 0, lines), false);
  return a;
}

std::vector<PointCluster> base_points(const PlaneCurve& c, const Vec3& S, Rng& rng, int cap_x) {
  return analyze(c, S, rng, cap_x).base_points;
}

Theorem1Terms theorem1_terms(const CausticAnalysis& a) {
  long g = 0, f = 0, fp = 0, gp = 0, qp = 0, cp = 0;
  for (const auto& h : a.hits) {
    const long w = h.weight;
    if (h.line == 0) g += w * (h.i - h.mu);
    if (h.line == 1) {
      if (h.is_I) f += w * h.i;
      if (!h.is_I && !h.is_S) fp += w * (h.i - h.mu);
      if (h.is_S) gp += w * h.i;
    }
    if (h.line == 2) {
      if (h.is_J) f += w * h.i;
      if (!h.is_J && !h.is_S) fp += w * (h.i - h.mu);
      if (h.is_S) gp += w * h.i;
    }
  }
  for (const auto& r : a.branches) {
    const HInput& in = r.input;
    const long w = r.weight;
    bool special = in.is_I || in.is_J || in.is_S;
    bool isotropic_pair = in.S_on_T && (in.I_on_T != in.J_on_T);
    if (!special && isotropic_pair && in.i >= 2 * in.e) qp += w * (in.i - 2 * in.e);
    if (a.S_at_infinity && in.is_S && r.i_infinity == 2 * in.e) cp += w * (r.dispatch.h - 3 * in.e);
  }
  Theorem1Terms t;
  const int bd = a.base_degree;
  t.g = divide_total(g, bd, "g");
  t.f = divide_total(f, bd, "f");
  t.f_prime = divide_total(fp, bd, "f'");
  t.g_prime = a.S_at_infinity ? 0 : divide_total(gp, bd, "g'") - a.mu_S;
  t.q_prime = divide_total(qp, bd, "q'");
  t.c_prime = divide_total(cp, bd, "c'");
  t.mu_I = a.mu_I;
  t.mu_J = a.mu_J;
  t.mu_S = a.mu_S;
  return t;
}

long mclass_theorem1(const CausticAnalysis& a, const Theorem1Terms& t) {
  const long d = a.curve.degree(), dv = a.dual.polar;
  if (a.S_at_infinity) return 2 * dv + d - 2 * t.g - t.mu_I - t.mu_J - t.mu_S - t.c_prime;
  return 2 * dv + d - 2 * t.f_prime - t.g - t.f - t.g_prime + t.q_prime;
}

long mclass_ledger(const CausticAnalysis& a) {
  const long d = a.curve.degree(), dv = a.dual.polar;
  long h = 0;
  for (const auto& r : a.branches) h += static_cast<long>(r.weight) * r.dispatch.h;
  return 2 * dv + d - divide_total(h, a.base_degree, "sum of h");
}

long mclass_flemma(const CausticAnalysis& a, Rng& rng) {
  const long d = a.curve.degree();
  const long height = 1L << 16;
  auto draw = [&]() {
    Vec3 dir;
    do {
      dir = {Elem(random_gaussian(rng, height)), Elem(random_gaussian(rng, height)), Elem(random_gaussian(rng, height))};
    } while (is_zero_vector(dir));
    TriPoly P = reflected_polar(a.R, dir);
    long total = 0;
    for (const auto& m : a.base_points)
      for (auto [w, i] : split_map(m, [&](const PointCluster& q) {
             return std::pair<long, long>(q.size(), local_intersection_number(a.curve.F(), P, q));
           }))
        total += w * i;
    return d * (2 * d - 1) - divide_total(total, a.base_degree, "base point intersection");
  };
  long first = draw(), second = draw();
  if (first == second) return first;
  long third = draw();
  if (third == first || third == second) return third;
  throw GenericityError("random reflected polars never agreed");
}

BrocardLemoyne brocard_lemoyne(const CausticAnalysis& a, const Theorem1Terms& t) {
  if (a.S_at_infinity) throw std::invalid_argument("the Brocard-Lemoyne formula needs a finite source");
  long fh = 0;
  std::array<long, 4> corr{};
  for (const auto& h : a.hits) {
    if (h.line == 0) continue;
    const long w = h.weight, om = h.i - h.mu;
    fh += w * om;
    if (h.line == 1 && h.is_I) corr[0] += w * om;
    if (h.line == 2 && h.is_J) corr[1] += w * om;
    if (h.line == 1 && h.is_S) corr[2] += w * om;
    if (h.line == 2 && h.is_S) corr[3] += w * om;
  }
  BrocardLemoyne bl;
  for (int k = 0; k < 4; ++k) bl.corrections[k] = divide_total(corr[k], a.base_degree, "correction");
  const long d = a.curve.degree(), dv = a.dual.polar;
  const long f_hat_prime = divide_total(fh, a.base_degree, "f^'");
  bl.value = d + 2 * (dv - f_hat_prime) - t.g - (t.mu_I + t.mu_J) - t.mu_S + t.q_prime;
  return bl;
}

namespace {

using PF = Poly<Fp>;
using BF = Poly<PF>;

// Reduction of elements of the base context: t goes to a root of its modulus mod p.
struct Reducer {
  ContextPtr base;
  ModPrime mp;
  Fp root;

  std::optional<Fp> operator()(const Elem& e) const {
    const Elem lifted = base->lift(e);
    const Poly<QI>& rep = lifted.rep();
    Fp acc;
    for (std::size_t k = rep.size(); k-- > 0;) {
      auto c = reduce_qi(rep[k], mp);
      if (!c) return std::nullopt;
      acc = acc * root + Fp::raw(*c);
    }
    return acc;
  }

  std::optional<BF> operator()(const BiPoly& f) const {
    std::vector<PF> cols;
    for (const auto& col : f.coeffs()) {
      std::vector<Fp> c;
      for (const auto& e : col.coeffs()) {
        auto v = (*this)(e);
        if (!v) return std::nullopt;
        c.push_back(*v);
      }
      cols.push_back(PF(std::move(c)));
    }
    return BF(std::move(cols));
  }
};

Mat3 random_matrix(Rng& rng, long h) {
  while (true) {
    Mat3 m;
    for (auto& row : m)
      for (auto& e : row) e = Elem(random_gaussian(rng, h));
    if (!det3(m).is_zero()) return m;
  }
}

std::optional<Reducer> make_reducer(const ContextPtr& base, Rng& rng) {
  for (int tries = 0; tries < 20; ++tries) {
    ModPrime mp = random_mod_prime(rng);
    FpScope scope(mp);
    std::vector<Fp> m;
    bool ok = true;
    for (const QI& c : base->modulus().coeffs()) {
      auto v = reduce_qi(c, mp);
      ok = ok && v.has_value();
      m.push_back(ok ? Fp::raw(*v) : Fp());
    }
    if (!ok) continue;
    auto roots = roots_mod_p(PF(std::move(m)), rng);
    if (roots.empty()) continue;
    return Reducer{base, mp, roots[std::uniform_int_distribution<std::size_t>(0, roots.size() - 1)(rng)]};
  }
  return std::nullopt;
}

Fp eval2(const BF& f, const Fp& x, const Fp& y) {
  Fp acc;
  for (int j = f.degree(); j >= 0; --j) acc = acc * y + f.coeff(j).eval(x);
  return acc;
}

std::array<Fp, 3> cross_fp(const std::array<Fp, 3>& a, const std::array<Fp, 3>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Points of C (over the algebraic closure of F_p) outside the base locus whose
// image under R is proportional to R(m), for one random point m of C.
std::optional<int> fibre_size_mod_p(const BF& f, const std::array<BF, 3>& r, Rng& rng) {
  const std::uint64_t p = Fp::modulus();
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  auto random_fp = [&]() { return Fp::raw(dist(rng)); };
  for (int attempt = 0; attempt < 40; ++attempt) {
    Fp x0 = random_fp();
    std::vector<Fp> col;
    for (const auto& c : f.coeffs()) col.push_back(c.eval(x0));
    PF fx0(std::move(col));
    if (fx0.degree() < 1) continue;
    auto ys = roots_mod_p(fx0, rng);
    if (ys.empty()) continue;
    Fp y0 = ys.front();
    if (fx0.derivative().eval(y0).is_zero()) continue;
    std::array<Fp, 3> a{eval2(r[0], x0, y0), eval2(r[1], x0, y0), eval2(r[2], x0, y0)};
    if (a[0].is_zero() && a[1].is_zero() && a[2].is_zero()) continue;
    auto combo = [&](const std::array<Fp, 3>& b) {
      return BF(PF(b[0])) * r[0] + BF(PF(b[1])) * r[1] + BF(PF(b[2])) * r[2];
    };
    PF r1 = resultant(f, combo(cross_fp(a, {random_fp(), random_fp(), random_fp()})));
    PF r2 = resultant(f, combo(cross_fp(a, {random_fp(), random_fp(), random_fp()})));
    PF r3 = resultant(f, combo({random_fp(), random_fp(), random_fp()}));
    if (r1.is_zero() || r2.is_zero() || r3.is_zero()) return std::nullopt;
    PF n1 = r1;
    while (true) {
      PF g = gcd(n1, r3);
      if (g.degree() <= 0) break;
      n1 = div_exact_field(n1, g);
    }
    return gcd(squarefree_part(n1), r2).degree();
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> delta1_estimate(const PlaneCurve& c, const Vec3& S, Rng& rng, int trials) {
  ReflectedMap rm = reflected_map(c, lift_vec(S, c.base()));
  std::optional<int> value;
  for (int t = 0; t < trials; ++t) {
    std::optional<int> count;
    for (int attempt = 0; attempt < 6 && !count; ++attempt) {
      Mat3 P = random_matrix(rng, 5);
      BiPoly f = c.F().substitute_linear(P).dehomogenize_z();
      std::array<BiPoly, 3> r;
      for (int k = 0; k < 3; ++k) r[k] = rm.R[k].substitute_linear(P).dehomogenize_z();
      auto red = make_reducer(c.base(), rng);
      if (!red) return std::nullopt;
      FpScope scope(red->mp);
      auto fp = (*red)(f);
      std::array<std::optional<BF>, 3> rp{(*red)(r[0]), (*red)(r[1]), (*red)(r[2])};
      if (!fp || !rp[0] || !rp[1] || !rp[2]) continue;
      if (fp->degree() != c.degree()) continue;
      count = fibre_size_mod_p(*fp, {*rp[0], *rp[1], *rp[2]}, rng);
    }
    if (!count) return std::nullopt;
    if (value && *value != *count) return std::nullopt;
    value = count;
  }
  return value;
}

namespace {

struct Instance {
  PlaneCurve c;
  Vec3 S;
  const ContextPtr& context() const { return c.base(); }
  Instance restricted(const ContextPtr& k) const { return {c.restricted(k), lift_vec(S, k)}; }
};

CausticClassReport run_one(const PlaneCurve& c, const Vec3& S, const ClassOptions& opt) {
  Degeneracy dg = degeneracy_check(c, S);
  if (dg.degenerate) throw DegenerateError(dg.reason);
  const int d = c.degree();
  Rng rng(opt.seed);
  CausticAnalysis a = analyze(c, S, rng, opt.cap_x > 0 ? opt.cap_x : 64 * d);
  CausticClassReport rep;
  rep.d = d;
  rep.dual_degree = a.dual.polar;
  rep.terms = theorem1_terms(a);
  std::vector<long> values;
  if (opt.theorem1) values.push_back(*(rep.mclass_theorem1 = mclass_theorem1(a, rep.terms)));
  if (opt.ledger) {
    values.push_back(*(rep.mclass_ledger = mclass_ledger(a)));
    for (const auto& r : a.branches) {
      if (r.dispatch.h == r.h_direct) continue;
      rep.h_oracle_ok = false;
      std::ostringstream os;
      os << "h mismatch at " << r.point << ": case " << r.dispatch.index << " gives " << r.dispatch.h
         << ", direct valuation gives " << r.h_direct;
      rep.diagnostics.push_back(os.str());
    }
  }
  if (opt.flemma) {
    try {
      values.push_back(*(rep.mclass_flemma = mclass_flemma(a, rng)));
    } catch (const GenericityError& e) {
      rep.flemma_note = std::string("unavailable: ") + e.what();
    }
  }
  if (values.empty()) throw std::invalid_argument("no computation path selected");
  rep.mclass = values.front();
  for (long v : values)
    if (v != rep.mclass) {
      std::ostringstream os;
      os << "mclass paths disagree:";
      if (rep.mclass_theorem1) os << " theorem1=" << *rep.mclass_theorem1;
      if (rep.mclass_ledger) os << " ledger=" << *rep.mclass_ledger;
      if (rep.mclass_flemma) os << " flemma=" << *rep.mclass_flemma;
      rep.diagnostics.push_back(os.str());
      break;
    }
  if (!a.S_at_infinity) {
    rep.bl = brocard_lemoyne(a, rep.terms);
    if (rep.bl->value + rep.bl->correction_sum() != rep.mclass)
      rep.diagnostics.push_back("Brocard-Lemoyne value plus corrections differs from mclass");
  }
  if (opt.delta1) {
    rep.delta1 = *opt.delta1;
  } else {
    auto est = delta1_estimate(c, S, rng);
    if (!est) throw GenericityError("delta1 estimate inconclusive");
    rep.delta1 = *est;
    rep.delta1_estimated = true;
  }
  if (rep.delta1 <= 0 || rep.mclass % rep.delta1 != 0)
    rep.diagnostics.push_back("mclass is not a multiple of delta1");
  rep.class_value = rep.delta1 > 0 ? rep.mclass / rep.delta1 : 0;
  rep.consistent = rep.diagnostics.empty();
  return rep;
}

bool same_report(const CausticClassReport& x, const CausticClassReport& y) {
  auto key = [](const CausticClassReport& r) {
    const auto& t = r.terms;
    return std::vector<long>{r.dual_degree, t.g, t.f, t.f_prime, t.g_prime, t.q_prime, t.mu_I, t.mu_J, t.mu_S,
                             t.c_prime, r.mclass, r.class_value, r.delta1};
  };
  return key(x) == key(y) && x.mclass_theorem1 == y.mclass_theorem1 && x.mclass_ledger == y.mclass_ledger &&
         x.mclass_flemma == y.mclass_flemma;
}

}  // namespace

CausticClassReport caustic_class(const PlaneCurve& c, const Vec3& S, const ClassOptions& opt) {
  auto reports = split_map(Instance{c, lift_vec(S, c.base())},
                           [&](const Instance& in) { return run_one(in.c, in.S, opt); });
  for (const auto& r : reports)
    if (!same_report(r, reports.front()))
      throw InconsistentError("the declared extension is reducible and its factors give different answers");
  return reports.front();
}

}  // namespace caustic
