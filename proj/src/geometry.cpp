#include "caustic/geometry.hpp"

namespace caustic {

namespace {

using PE = Poly<Elem>;

BiPoly local_equation(const TriPoly& F, const Mat3& M) { return F.substitute_linear(M).dehomogenize_z(); }

Vec3 unit(int k) {
  Vec3 v;
  v[k] = Elem(1);
  return v;
}

// Index of a coordinate that is invertible on every root (last one preferred).
int chart_index(const Vec3& m) {
  for (int k = 2; k >= 0; --k)
    if (!m[k].zero_test()) return k;
  throw std::invalid_argument("zero vector is not a projective point");
}

Mat3 chart_matrix(const Vec3& m) {
  int k = chart_index(m);
  int a = k == 0 ? 1 : 0;
  int b = k == 2 ? 1 : 2;
  return mat_from_columns(unit(a), unit(b), m);
}

// Lowest total degree carrying a nonzero coefficient in a local equation.
int order_at_origin(const BiPoly& f, int max_degree) {
  for (int s = 0; s <= max_degree; ++s)
    for (int j = 0; j <= s; ++j)
      if (!f.coeff(j).coeff(s - j).zero_test()) return s;
  return -1;
}

Mat3 random_integer_matrix(Rng& rng, long h) {
  std::uniform_int_distribution<long> dist(-h, h);
  while (true) {
    Mat3 m;
    for (auto& row : m)
      for (auto& v : row) v = Elem(dist(rng));
    if (!det3(m).is_zero()) return m;
  }
}

Vec3 combine(const Elem& lambda, const Vec3& P, const Vec3& Q) {
  return {lambda * P[0] + Q[0], lambda * P[1] + Q[1], lambda * P[2] + Q[2]};
}

// Evaluates the x-coefficients of a bivariate polynomial at x0.
PE specialize_x(const BiPoly& f, const Elem& x0) {
  std::vector<Elem> c;
  c.reserve(f.size());
  for (const auto& col : f.coeffs()) c.push_back(col.eval(x0));
  return PE(std::move(c));
}

struct RootObj {
  ContextPtr ctx;
  Elem root;
  const ContextPtr& context() const { return ctx; }
  RootObj restricted(const ContextPtr& c) const { return {c, c->lift(root)}; }
};

class RetryProjection : public std::exception {};

void append(std::vector<PointCluster>& out, const std::vector<PointCluster>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

}  // namespace

QI random_gaussian(Rng& rng, long h) {
  std::uniform_int_distribution<long> dist(-h, h);
  long re = dist(rng);
  long im = dist(rng);
  return QI(re, im);
}

PlaneCurve::PlaneCurve(TriPoly F, ContextPtr base) : F_(std::move(F)), base_(std::move(base)) {
  if (!base_) base_ = Context::rationals();
  if (F_.is_zero()) throw std::invalid_argument("the zero polynomial does not define a curve");
  if (F_.degree() < 1) throw std::invalid_argument("a curve needs degree at least 1");
  ContextPtr c = F_.context();
  if (c && !base_->descends_from(c.get()))
    throw std::invalid_argument("curve coefficients do not belong to the base field");
  F_ = F_.lifted(base_);
  for (int k = 0; k < 3; ++k) partials_[k] = F_.partial(k);
  if (F_.degree() == 1) return;
  // Squarefree test: with a constant y^d coefficient every factor involves y,
  // so F is squarefree iff its discriminant in y is nonzero.
  for (long a = 0; a <= 6; ++a) {
    for (long b = 0; b <= 6; ++b) {
      Vec3 col{Elem(a), Elem(1), Elem(b)};
      if (!F_.eval(col).is_invertible()) continue;
      Mat3 M = mat_from_columns(unit(0), col, unit(2));
      BiPoly f = local_equation(F_, M);
      BiPoly fy = f.derivative();
      PE disc = resultant(f, fy);
      if (true_degree(disc) < 0) throw std::invalid_argument("curve equation is not squarefree");
      return;
    }
  }
  throw std::invalid_argument("could not certify that the curve equation is squarefree");
}

PlaneCurve PlaneCurve::restricted(const ContextPtr& c) const {
  PlaneCurve r;
  r.F_ = F_.lifted(c);
  for (int k = 0; k < 3; ++k) r.partials_[k] = partials_[k].lifted(c);
  r.base_ = c;
  return r;
}

std::string PointCluster::to_string() const {
  std::string s = "[" + coords[0].to_string() + " : " + coords[1].to_string() + " : " +
                  coords[2].to_string() + "]";
  if (ctx && ctx->degree() > 1) s += " with t a root of " + ctx->modulus().to_string("t");
  return s;
}

Vec3 point_I() { return {Elem(1), Elem(QI::imaginary_unit()), Elem(0)}; }
Vec3 point_J() { return {Elem(1), Elem(-QI::imaginary_unit()), Elem(0)}; }
Vec3 line_at_infinity() { return {Elem(0), Elem(0), Elem(1)}; }

std::vector<PointCluster> normalize(const PointCluster& p) {
  return split_map(p, [](const PointCluster& cur) {
    int k = chart_index(cur.coords);
    Elem inv = cur.coords[k].inverse();
    PointCluster out = cur;
    for (int j = 0; j < 3; ++j) out.coords[j] = j == k ? cur.ctx->lift(Elem(1)) : cur.coords[j] * inv;
    for (int j = k + 1; j < 3; ++j) out.coords[j] = cur.ctx->lift(Elem(0));
    return out;
  });
}

bool is_zero_vector(const Vec3& v) { return v[0].zero_test() && v[1].zero_test() && v[2].zero_test(); }

bool same_point(const Vec3& a, const Vec3& b) { return is_zero_vector(cross(a, b)); }

bool on_line(const Vec3& line, const Vec3& p) { return dot(line, p).zero_test(); }

int multiplicity(const PlaneCurve& c, const Vec3& m) {
  BiPoly f = local_equation(c.F(), chart_matrix(m));
  return order_at_origin(f, c.degree());
}

TangentCone tangent_cone(const PlaneCurve& c, const Vec3& m) {
  BiPoly f = local_equation(c.F(), chart_matrix(m));
  int mu = order_at_origin(f, c.degree());
  if (mu <= 0) throw std::invalid_argument("tangent cone requested at a point off the curve");
  TangentCone tc;
  tc.degree = mu;
  for (int i = 0; i <= mu; ++i) tc.coeffs.push_back(f.coeff(mu - i).coeff(i));
  return tc;
}

bool is_normalizing(const PlaneCurve& c, const Mat3& M, int mu) {
  if (!det3(M).is_invertible()) return false;
  BiPoly f = local_equation(c.F(), M);
  for (int s = 0; s < mu; ++s)
    for (int j = 0; j <= s; ++j)
      if (!f.coeff(j).coeff(s - j).is_zero()) return false;
  return f.coeff(mu).coeff(0).is_invertible();
}

LocalChart normalization_matrix(const PlaneCurve& c, const Vec3& m, Rng& rng) {
  int mu = multiplicity(c, m);
  if (mu == 0) throw std::invalid_argument("normalization requested at a point off the curve");
  ContextPtr ctx = common_context(common_context(m[0].context(), m[1].context()), m[2].context());
  auto attempt = [&](const Mat3& M) -> std::optional<LocalChart> {
    if (!det3(M).is_invertible()) return std::nullopt;
    BiPoly f = local_equation(c.F(), M);
    if (!f.coeff(mu).coeff(0).is_invertible()) return std::nullopt;
    return LocalChart{M, std::move(f), mu};
  };
  if (auto ok = attempt(chart_matrix(m))) return *ok;
  for (int tries = 0; tries < 60; ++tries) {
    long h = 2 + tries / 10;
    Vec3 c1{Elem(random_gaussian(rng, h)), Elem(random_gaussian(rng, h)), Elem(random_gaussian(rng, h))};
    Vec3 c2{Elem(random_gaussian(rng, h)), Elem(random_gaussian(rng, h)), Elem(random_gaussian(rng, h))};
    if (ctx) {
      c1 = lift_vec(c1, ctx);
      c2 = lift_vec(c2, ctx);
    }
    if (auto ok = attempt(mat_from_columns(c1, c2, m))) return *ok;
  }
  throw GenericityError("no normalizing chart found");
}

std::vector<PointCluster> singular_points(const PlaneCurve& c, Rng& rng) {
  const int d = c.degree();
  if (d == 1) return {};
  const ContextPtr& base = c.base();
  for (int tries = 0; tries < 12; ++tries) {
    Mat3 Ms = tries == 0 ? identity3() : random_integer_matrix(rng, 3);
    TriPoly G = c.F().substitute_linear(Ms);
    std::array<TriPoly, 3> dG{G.partial(0), G.partial(1), G.partial(2)};
    std::array<BiPoly, 3> g{dG[0].dehomogenize_z(), dG[1].dehomogenize_z(), dG[2].dehomogenize_z()};
    PE r1 = normalize_d5(resultant(g[0], g[1]));
    PE r2 = normalize_d5(resultant(g[0], g[2]));
    if (r1.is_zero() || r2.is_zero()) continue;
    std::vector<PointCluster> out;
    auto emit = [&](const ContextPtr& ctx, const Vec3& local) {
      append(out, normalize(PointCluster{ctx, mat_apply(lift_mat(Ms, ctx), local)}));
    };
    PE r = gcd(r1, r2);
    if (r.degree() >= 1) {
      Adjoined ax = adjoin_root(base, squarefree_part(r));
      split_map(RootObj{ax.ctx, ax.root}, [&](const RootObj& x0) {
        std::vector<PointCluster> local;
        PE a = specialize_x(g[0], x0.root), b = specialize_x(g[1], x0.root),
           cc = specialize_x(g[2], x0.root);
        PE h = gcd(gcd(a, b), cc);
        if (h.is_zero()) throw std::logic_error("singular locus is not finite");
        if (h.degree() >= 1) {
          Adjoined ay = adjoin_root(x0.ctx, squarefree_part(h));
          Vec3 p{ay.ctx->lift(x0.root), ay.root, ay.ctx->lift(Elem(1))};
          emit(ay.ctx, p);
        }
        return 0;
      });
    }
    // points on z = 0 of the transformed plane
    std::array<PE, 3> at_inf;
    for (int k = 0; k < 3; ++k) {
      std::vector<Elem> coeffs(dG[k].degree() + 1);
      for (const auto& [e, v] : dG[k].terms())
        if (e[2] == 0) coeffs[e[0]] = v;
      at_inf[k] = PE(std::move(coeffs));  // G_k(x, 1, 0)
    }
    PE h = gcd(gcd(at_inf[0], at_inf[1]), at_inf[2]);
    if (h.is_zero()) throw std::logic_error("singular locus is not finite");
    if (h.degree() >= 1) {
      Adjoined ax = adjoin_root(base, squarefree_part(h));
      emit(ax.ctx, {ax.root, ax.ctx->lift(Elem(1)), ax.ctx->lift(Elem(0))});
    }
    Vec3 e0{Elem(1), Elem(0), Elem(0)};
    if (dG[0].eval(e0).zero_test() && dG[1].eval(e0).zero_test() && dG[2].eval(e0).zero_test())
      emit(base, lift_vec(e0, base));
    return out;
  }
  throw GenericityError("singular locus elimination kept degenerating");
}

std::vector<LineHit> line_section(const PlaneCurve& c, const Vec3& P, const Vec3& Q,
                                  const std::vector<Elem>& marked, bool keep_simple) {
  ContextPtr ctx = c.base();
  for (int k = 0; k < 3; ++k) ctx = common_context(common_context(ctx, P[k].context()), Q[k].context());
  std::array<PE, 3> par;
  for (int k = 0; k < 3; ++k) par[k] = PE(std::vector<Elem>{ctx->lift(Q[k]), ctx->lift(P[k])});
  PE phi = normalize_d5(c.F().eval_univariate(par));
  if (phi.is_zero()) throw std::invalid_argument("the line is a component of the curve");
  std::vector<LineHit> hits;
  auto push = [&](const Vec3& p, int i) {
    for (auto& pc : normalize(PointCluster{ctx, lift_vec(p, ctx)})) hits.push_back({pc, i});
  };
  const int iP = c.degree() - phi.degree();
  if (iP > 0) push(P, iP);
  int iQ = 0;
  while (phi[iQ].zero_test()) ++iQ;
  if (iQ > 0) {
    push(Q, iQ);
    phi = PE(std::vector<Elem>(phi.coeffs().begin() + iQ, phi.coeffs().end()));
  }
  for (const Elem& lam : marked) {
    Elem l = ctx->lift(lam);
    int mult = root_multiplicity(phi, l, [](const Elem& e) { return e.zero_test(); });
    if (mult == 0) continue;
    push(combine(l, lift_vec(P, ctx), lift_vec(Q, ctx)), mult);
    PE lin(std::vector<Elem>{-l, Elem(1)});
    for (int j = 0; j < mult; ++j) phi = div_exact_field(phi, lin);
  }
  for (auto& [fac, mult] : squarefree_decomposition(phi)) {
    if (mult == 1 && !keep_simple) continue;
    Adjoined a = adjoin_root(ctx, fac);
    Vec3 p = combine(a.root, lift_vec(P, a.ctx), lift_vec(Q, a.ctx));
    for (auto& pc : normalize(PointCluster{a.ctx, p})) hits.push_back({pc, mult});
  }
  return hits;
}

namespace {

// Two distinct points spanning the line.
std::pair<Vec3, Vec3> points_on_line(const Vec3& line) {
  std::vector<Vec3> cands;
  for (int k = 0; k < 3; ++k) {
    Vec3 p = cross(line, unit(k));
    if (!is_zero_vector(p)) cands.push_back(p);
  }
  if (cands.empty()) throw std::invalid_argument("zero vector is not a line");
  for (std::size_t j = 1; j < cands.size(); ++j)
    if (!same_point(cands[0], cands[j])) return {cands[0], cands[j]};
  throw std::logic_error("could not span the line");
}

}  // namespace

std::vector<LineHit> intersect_with_line(const PlaneCurve& c, const Vec3& line) {
  auto [P, Q] = points_on_line(line);
  return line_section(c, P, Q);
}

int line_intersection_at(const PlaneCurve& c, const Vec3& line, const Vec3& m) {
  if (!on_line(line, m)) throw std::invalid_argument("point is not on the line");
  auto [P, Q] = points_on_line(line);
  Vec3 other = same_point(P, m) ? Q : P;
  ContextPtr ctx = c.base();
  for (int k = 0; k < 3; ++k)
    ctx = common_context(common_context(ctx, m[k].context()), other[k].context());
  std::array<PE, 3> par;
  for (int k = 0; k < 3; ++k) par[k] = PE(std::vector<Elem>{ctx->lift(m[k]), ctx->lift(other[k])});
  PE phi = c.F().eval_univariate(par);
  for (int k = 0; k <= phi.degree(); ++k)
    if (!phi[k].zero_test()) return k;
  throw std::invalid_argument("the line is a component of the curve");
}

int contact_number(const PlaneCurve& c, const Vec3& line, const Vec3& m) {
  if (!on_line(line, m)) return 0;
  int mu = multiplicity(c, m);
  if (mu == 0) return 0;
  return line_intersection_at(c, line, m) - mu;
}

namespace {

BiPoly clean(const BiPoly& f) {
  std::vector<PE> c;
  for (int k = 0; k <= f.degree(); ++k) c.push_back(normalize_d5(f.coeff(k)));
  while (!c.empty() && c.back().is_zero()) c.pop_back();
  return BiPoly(std::move(c));
}

PE x_power(int k, const Elem& c) {
  std::vector<Elem> v(k + 1);
  v[k] = c;
  return PE(std::move(v));
}

}  // namespace

int local_intersection_number(const TriPoly& F, const TriPoly& G, const PointCluster& m) {
  const ContextPtr& ctx = m.ctx;
  Mat3 M;
  bool found = false;
  for (int k = 2; k >= 0 && !found; --k) {
    if (!m.coords[k].is_invertible()) continue;
    // columns: the two other unit vectors, then m
    M = Mat3{};
    for (auto& row : M)
      for (auto& v : row) v = ctx->lift(Elem(0));
    int col = 0;
    for (int j = 0; j < 3; ++j)
      if (j != k) M[j][col++] = ctx->lift(Elem(1));
    for (int j = 0; j < 3; ++j) M[j][2] = m.coords[j];
    found = true;
  }
  if (!found) {
    for (const auto& v : m.coords) (void)v.zero_test();
    throw std::logic_error("local_intersection_number: no invertible coordinate");
  }
  BiPoly f = clean(F.lifted(ctx).substitute_linear(M).dehomogenize_z());
  BiPoly g = clean(G.lifted(ctx).substitute_linear(M).dehomogenize_z());
  auto at_origin = [](const BiPoly& h) { return h.degree() >= 0 && !h.coeff(0).coeff(0).zero_test(); };
  int total = 0;
  for (int step = 0; step < 100000; ++step) {
    if (f.degree() < 0 || g.degree() < 0) throw std::domain_error("common component through the point");
    if (at_origin(f) || at_origin(g)) return total;
    PE a = normalize_d5(f.coeff(0)), b = normalize_d5(g.coeff(0));
    auto deg = [](const PE& p) { return p.is_zero() ? -1 : p.degree(); };
    if (deg(a) > deg(b)) {
      std::swap(f, g);
      std::swap(a, b);
    }
    if (a.is_zero()) {
      if (b.is_zero()) throw std::domain_error("common component through the point");
      int ord = 0;
      while (b[ord].zero_test()) ++ord;
      total += ord;
      f = BiPoly(std::vector<PE>(f.coeffs().begin() + 1, f.coeffs().end()));
      continue;
    }
    // fraction-free: scaling g by the unit lc(a) leaves the local number unchanged
    g = clean(BiPoly(PE(a[a.degree()])) * g - BiPoly(x_power(b.degree() - a.degree(), b[b.degree()])) * f);
  }
  throw std::runtime_error("local_intersection_number: no termination");
}

std::vector<std::pair<PointCluster, int>> resultant_multiplicities(
    const TriPoly& F, const TriPoly& G, const std::vector<PointCluster>& clusters, Rng& rng) {
  const int d = F.degree(), e = G.degree();
  for (int tries = 0; tries < 10; ++tries) {
    Mat3 M = random_integer_matrix(rng, 9);
    BiPoly f = F.substitute_linear(M).dehomogenize_z();
    BiPoly g = G.substitute_linear(M).dehomogenize_z();
    if (f.degree() != d || g.degree() != e) continue;
    if (!f.coeff(d).coeff(0).is_invertible() || !g.coeff(e).coeff(0).is_invertible()) continue;
    PE R = normalize_d5(resultant(f, g));
    if (R.degree() != d * e) continue;
    Mat3 adj = adjugate3(M);
    try {
      std::vector<std::pair<PointCluster, int>> out;
      for (const auto& cl : clusters) {
        auto parts = split_map(cl, [&](const PointCluster& p) {
          if (!G.eval(p.coords).zero_test() || !F.eval(p.coords).zero_test())
            return std::make_pair(p, 0);
          Vec3 q = mat_apply(lift_mat(adj, p.ctx), p.coords);
          if (!q[2].is_invertible()) throw RetryProjection();
          Elem x0 = q[0] * q[2].inverse();
          int mult = root_multiplicity(lift_poly(R, p.ctx), x0, [](const Elem& v) { return v.zero_test(); });
          return std::make_pair(p, mult);
        });
        out.insert(out.end(), parts.begin(), parts.end());
      }
      return out;
    } catch (const RetryProjection&) {
      continue;
    }
  }
  throw GenericityError("no projection in general position for the resultant route");
}

int dual_degree_polar(const PlaneCurve& c, const std::vector<PointCluster>& sing, Rng& rng) {
  const int d = c.degree();
  if (d < 2) throw std::invalid_argument("dual degree needs d >= 2");
  auto draw = [&]() {
    TriPoly polar;
    do {
      Vec3 a{Elem(random_gaussian(rng, 1L << 16)), Elem(random_gaussian(rng, 1L << 16)),
             Elem(random_gaussian(rng, 1L << 16))};
      polar = c.F().polar(a);
    } while (polar.is_zero());
    long total = 0;
    for (auto& [pc, i] : resultant_multiplicities(c.F(), polar, sing, rng)) total += long(pc.size()) * i;
    long bd = c.base()->degree();
    if (total % bd != 0) throw std::logic_error("polar count not uniform over the base field");
    return d * (d - 1) - static_cast<int>(total / bd);
  };
  int v1 = draw(), v2 = draw();
  if (v1 == v2) return v1;
  int v3 = draw();
  if (v3 == v1 || v3 == v2) return v3;
  throw GenericityError("polar draws disagree");
}

}  // namespace caustic
