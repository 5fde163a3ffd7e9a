#include "caustic/puiseux.hpp"

#include <algorithm>
#include <numeric>

namespace caustic {

namespace {

using PE = Poly<Elem>;

BiPoly lift_bipoly(const BiPoly& f, const ContextPtr& c) {
  return f.map([&](const PE& col) { return lift_poly(col, c); });
}

Series lift_series(const Series& s, const ContextPtr& c) {
  Series out;
  out.reserve(s.size());
  for (const auto& a : s) out.push_back(c->lift(a));
  return out;
}

}  // namespace

Series series_mul(const Series& a, const Series& b, int n) {
  Series out(n);
  const int na = std::min<int>(a.size(), n);
  for (int i = 0; i < na; ++i) {
    if (a[i].is_zero()) continue;
    const int nb = std::min<int>(b.size(), n - i);
    for (int j = 0; j < nb; ++j)
      if (!b[j].is_zero()) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series series_inverse(const Series& a, int n) {
  Series b(n);
  if (n == 0) return b;
  Elem inv0 = a.at(0).inverse();
  b[0] = inv0;
  for (int k = 1; k < n; ++k) {
    Elem acc;
    for (int j = 1; j <= k && j < static_cast<int>(a.size()); ++j)
      if (!a[j].is_zero()) acc += a[j] * b[k - j];
    b[k] = -(acc * inv0);
  }
  return b;
}

Series substitute_branch(const BiPoly& h, const Elem& gamma, int e, const Series& y, int n) {
  const int maxi = (n - 1) / e;
  std::vector<Elem> gpow{Elem(1)};
  for (int i = 1; i <= maxi; ++i) gpow.push_back(gpow.back() * gamma);
  auto column = [&](const PE& col) {
    Series s(n);
    for (int i = 0; i <= std::min(col.degree(), maxi); ++i)
      if (!col[i].is_zero()) s[i * e] = col[i] * gpow[i];
    return s;
  };
  Series acc(n);
  for (int j = h.degree(); j >= 0; --j) {
    acc = series_mul(acc, y, n);
    Series c = column(h.coeff(j));
    for (int k = 0; k < n; ++k)
      if (!c[k].is_zero()) acc[k] += c[k];
  }
  return acc;
}

int series_valuation(const Series& s) {
  for (std::size_t k = 0; k < s.size(); ++k)
    if (!s[k].zero_test()) return static_cast<int>(k);
  return -1;
}

Branch Branch::restricted(const ContextPtr& c) const {
  Branch b = *this;
  b.ctx_ = c;
  b.gamma_ = c->lift(gamma_);
  b.A_ = lift_poly(A_, c);
  b.B_ = c->lift(B_);
  b.g_ = lift_bipoly(g_, c);
  b.Y_ = lift_series(Y_, c);
  return b;
}

void Branch::extend_regular(int n) const {
  if (Y_.empty()) Y_.push_back(Elem());
  BiPoly gy = g_.derivative();
  int p = static_cast<int>(Y_.size());
  while (p < n) {
    int p2 = std::min(2 * p, n);
    Y_.resize(p2);
    Series G = substitute_branch(g_, Elem(1), 1, Y_, p2);
    Series D = substitute_branch(gy, Elem(1), 1, Y_, p2);
    Series corr = series_mul(G, series_inverse(D, p2), p2);
    for (int k = 0; k < p2; ++k) Y_[k] -= corr[k];
    p = p2;
  }
}

Series Branch::y_series(int n) const {
  Series y(n);
  for (int k = 0; k < n && k <= A_.degree(); ++k) y[k] = A_[k];
  if (exact_ || n <= K_) return y;
  extend_regular(n - K_);
  for (int k = 0; K_ + k < n; ++k)
    if (!Y_[k].is_zero()) y[K_ + k] += B_ * Y_[k];
  return y;
}

int Branch::valuation(const BiPoly& h) const {
  if (exact_) {
    int dx = 0;
    for (const auto& col : h.coeffs()) dx = std::max(dx, col.degree());
    const int n = e_ * dx + std::max(0, A_.degree()) * std::max(0, h.degree()) + 1;
    int v = series_valuation(substitute_branch(h, gamma_, e_, y_series(n), n));
    if (v < 0) throw std::domain_error("form vanishes identically along the branch");
    return v;
  }
  int n = std::min(cap_, 4 * e_ + K_ + 1);
  while (true) {
    int v = series_valuation(substitute_branch(h, gamma_, e_, y_series(n), n));
    if (v >= 0) return v;
    if (n >= cap_) throw TruncationError("valuation undetermined below the truncation cap");
    n = std::min(2 * n, cap_);
  }
}

std::optional<int> Branch::min_valuation(const std::vector<BiPoly>& hs) const {
  int n = std::min(cap_, 4 * e_ + K_ + 1);
  if (exact_) {
    std::optional<int> best;
    for (const auto& h : hs) {
      try {
        int v = valuation(h);
        if (!best || v < *best) best = v;
      } catch (const std::domain_error&) {
      }
    }
    return best;
  }
  while (true) {
    Series y = y_series(n);
    std::optional<int> best;
    for (const auto& h : hs) {
      int v = series_valuation(substitute_branch(h, gamma_, e_, y, n));
      if (v >= 0 && (!best || v < *best)) best = v;
    }
    if (best || n >= cap_) return best;
    n = std::min(2 * n, cap_);
  }
}

std::optional<int> Branch::first_exponent_off(int r, int limit) const {
  int n = std::min(limit + 1, std::max(8, 4 * e_ + K_ + 1));
  int scanned = 0;
  while (true) {
    Series y = y_series(n);
    for (int k = scanned; k < n; ++k)
      if (static_cast<long>(r) * k % e_ != 0 && !y[k].zero_test()) return k;
    scanned = n;
    if (n > limit) return std::nullopt;
    n = std::min(2 * n, limit + 1);
  }
}

namespace {

struct NPState {
  ContextPtr ctx;
  BiPoly f;
  Elem gamma;
  int E = 1;
  PE A;
  Elem B;
  int K = 0;

  const ContextPtr& context() const { return ctx; }
  NPState restricted(const ContextPtr& c) const {
    return {c, lift_bipoly(f, c), c->lift(gamma), E, lift_poly(A, c), c->lift(B), K};
  }
};

long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Powers of a fixed element, computed on demand.
class PowerCache {
 public:
  explicit PowerCache(Elem w) : pw_{Elem(1), std::move(w)} {}
  const Elem& operator()(int k) {
    while (static_cast<int>(pw_.size()) <= k) pw_.push_back(pw_.back() * pw_[1]);
    return pw_[k];
  }

 private:
  std::vector<Elem> pw_;
};

// Lowest x-exponent with a nonzero coefficient in a column, -1 if the column vanishes.
int column_order(const PE& col) {
  for (int i = 0; i <= col.degree(); ++i)
    if (!col[i].zero_test()) return i;
  return -1;
}

}  // namespace

class PuiseuxBuilder {
 public:
  explicit PuiseuxBuilder(int cap_x) : cap_x_(cap_x) {}

  std::vector<Branch> run(const NPState& s) {
    std::vector<Branch> out;
    for (auto& part : split_map(s, [&](const NPState& t) { return expand(t); }))
      out.insert(out.end(), part.begin(), part.end());
    return out;
  }

 private:
  Branch leaf(const NPState& s, bool exact, BiPoly g) const {
    Branch b;
    b.ctx_ = s.ctx;
    b.gamma_ = s.gamma;
    b.e_ = s.E;
    b.A_ = s.A;
    b.B_ = s.B;
    b.K_ = s.K;
    b.g_ = std::move(g);
    b.exact_ = exact;
    b.cap_ = std::max(cap_x_ * s.E, s.K + 2);
    return b;
  }

  std::vector<Branch> expand(const NPState& s) {
    const BiPoly& f = s.f;
    int n0 = -1;
    for (int j = 0; j <= f.degree() && n0 < 0; ++j)
      if (!f.coeff(j).coeff(0).zero_test()) n0 = j;
    if (n0 < 0) throw std::invalid_argument("x divides the local equation");
    if (n0 == 0) throw std::invalid_argument("origin is not on the curve");
    std::vector<int> ord(n0 + 1);
    for (int j = 0; j <= n0; ++j) ord[j] = column_order(f.coeff(j));
    if (n0 == 1) return {leaf(s, ord[0] < 0, f)};
    if (s.K > cap_x_ * s.E) throw TruncationError("branches not separated below the truncation cap");
    int jmin = 0;
    while (ord[jmin] < 0) ++jmin;
    if (jmin >= 2) throw std::invalid_argument("local equation is not squarefree");
    std::vector<Branch> out;
    if (jmin == 1) out.push_back(leaf(s, true, BiPoly()));
    int ja = n0, ia = 0;
    while (ja > jmin) {
      int jb = -1;
      for (int j = jmin; j < ja; ++j) {
        if (ord[j] < 0) continue;
        // slope (ord[j]-ia)/(ja-j); ties keep the longer edge
        if (jb < 0 || static_cast<long>(ord[j] - ia) * (ja - jb) < static_cast<long>(ord[jb] - ia) * (ja - j))
          jb = j;
      }
      const int di = ord[jb] - ia, dj = ja - jb;
      const int g = std::gcd(di, dj), m = di / g, q = dj / g;
      std::vector<Elem> psi_c;
      for (int k = 0; k <= g; ++k) psi_c.push_back(f.coeff(jb + k * q).coeff(ord[jb] - k * m));
      PE psi = normalize_d5(PE(std::move(psi_c)));
      for (const auto& [fac, mult] : squarefree_decomposition(psi)) {
        if (fac.degree() < 1) continue;
        Adjoined a = adjoin_root(s.ctx, fac);
        NPState ns = descend(s.restricted(a.ctx), a.root, m, q, ia, ja);
        for (auto& part : split_map(ns, [&](const NPState& t) { return expand(t); }))
          out.insert(out.end(), part.begin(), part.end());
      }
      ja = jb;
      ia = ord[jb];
    }
    return out;
  }

  static NPState descend(const NPState& s, const Elem& w, int m, int q, int ia, int ja) {
    int v = 0;
    while ((static_cast<long>(v) * m + 1) % q != 0) ++v;
    const int u = static_cast<int>((static_cast<long>(v) * m + 1) / q);
    const long W = static_cast<long>(q) * ia + static_cast<long>(m) * ja;
    PowerCache pw(w);
    const int dy = s.f.degree();
    std::vector<std::vector<Elem>> rows(dy + 1);
    for (int j = 0; j <= dy; ++j) {
      const PE& col = s.f.coeffs()[j];
      for (int i = 0; i <= col.degree(); ++i) {
        if (col[i].is_zero()) continue;
        const long base = static_cast<long>(q) * i + static_cast<long>(m) * j - W;
        if (base < 0) throw std::logic_error("Newton polygon edge is not a lower edge");
        for (int l = 0; l <= j; ++l) {
          Elem c = col[i] * pw(v * i + u * (j - l)) * Elem(binomial(j, l));
          auto& row = rows[l];
          if (static_cast<long>(row.size()) <= base) row.resize(base + 1);
          row[base] += c;
        }
      }
    }
    std::vector<PE> cols;
    for (auto& r : rows) cols.emplace_back(std::move(r));
    NPState t;
    t.ctx = s.ctx;
    t.f = BiPoly(std::move(cols));
    t.gamma = s.gamma * pw(v * s.E);
    t.E = q * s.E;
    std::vector<Elem> a;
    for (int k = 0; k <= s.A.degree(); ++k) {
      if (s.A[k].is_zero()) continue;
      if (static_cast<int>(a.size()) <= q * k) a.resize(q * k + 1);
      a[q * k] += s.A[k] * pw(v * k);
    }
    const int K1 = q * s.K + m;
    if (static_cast<int>(a.size()) <= K1) a.resize(K1 + 1);
    a[K1] += s.B * pw(v * s.K + u);
    t.A = PE(std::move(a));
    t.B = s.B * pw(v * s.K);
    t.K = K1;
    return t;
  }

  int cap_x_;
};

std::vector<Branch> newton_puiseux(const ContextPtr& ctx, const BiPoly& f, int cap_x) {
  ContextPtr c = ctx ? ctx : Context::rationals();
  NPState s{c, lift_bipoly(f, c), c->lift(Elem(1)), 1, PE(), c->lift(Elem(1)), 0};
  return PuiseuxBuilder(cap_x).run(s);
}

PointBranches branches_at(const PlaneCurve& c, const PointCluster& m, Rng& rng, int cap_x) {
  LocalChart chart = normalization_matrix(c, m.coords, rng);
  std::vector<Branch> br = newton_puiseux(m.ctx, chart.f, cap_x);
  return {m, std::move(chart), std::move(br)};
}

BiPoly local_form(const TriPoly& G, const Mat3& M) { return G.substitute_linear(M).dehomogenize_z(); }

Vec3 branch_tangent(const Branch& b, const Mat3& M) {
  Mat3 Ml = lift_mat(M, b.context());
  Elem a = b.y_series(b.e() + 1)[b.e()] / b.gamma();
  Vec3 centre = mat_apply(Ml, {Elem(0), Elem(0), Elem(1)});
  Vec3 dir = mat_apply(Ml, {Elem(1), a, Elem(0)});
  return cross(centre, dir);
}

int branch_intersection(const Branch& b, const Mat3& M, const TriPoly& G) {
  return b.valuation(local_form(G, M));
}

int branch_line_intersection(const Branch& b, const Mat3& M, const Vec3& line) {
  return branch_intersection(b, M, TriPoly::linear_form(line));
}

std::optional<int> first_char_exponent(const Branch& b, std::optional<int> limit) {
  if (b.e() == 1) return std::nullopt;
  if (limit) return b.first_exponent_off(1, *limit);
  auto k = b.first_exponent_off(1, b.cap());
  if (!k) throw TruncationError("first characteristic exponent beyond the truncation cap");
  return k;
}

namespace {

int intra_branch(const Branch& b) {
  int sum = 0;
  for (int r = 1; r < b.e(); ++r) {
    auto k = b.first_exponent_off(r, b.cap());
    if (!k) throw TruncationError("conjugate probranches not separated below the truncation cap");
    sum += *k;
  }
  return sum;
}

long divide_exact(long total, int size, const char* what) {
  if (total % size != 0) throw std::logic_error(std::string(what) + " differs between conjugate points");
  return total / size;
}

}  // namespace

ValuationLedger v_ledger(const PointBranches& pb) {
  ValuationLedger out;
  BiPoly fy = pb.chart.f.derivative();
  for (const auto& br : pb.branches) {
    auto parts = split_map(br, [&](const Branch& b) {
      LedgerEntry e;
      e.weight = b.context()->degree();
      e.e = b.e();
      e.total = b.valuation(fy);
      e.intra = intra_branch(b);
      e.cross = e.total - e.intra;
      return e;
    });
    for (const auto& e : parts) {
      out.total += static_cast<long>(e.weight) * e.total;
      out.entries.push_back(e);
    }
  }
  return out;
}

int intersection_number(const PlaneCurve& c, const TriPoly& other, const PointCluster& m, Rng& rng,
                        int cap_x) {
  PointBranches pb = branches_at(c, m, rng, cap_x);
  BiPoly g = local_form(other, pb.chart.M);
  long total = 0;
  for (const auto& br : pb.branches)
    for (auto [w, v] : split_map(br, [&](const Branch& b) {
           return std::pair<int, int>(b.context()->degree(), b.valuation(g));
         }))
      total += static_cast<long>(w) * v;
  return static_cast<int>(divide_exact(total, m.size(), "intersection number"));
}

int dual_degree_ledger(const PlaneCurve& c, const std::vector<PointCluster>& sing, Rng& rng, int cap_x) {
  const int d = c.degree();
  long total = 0;
  for (const auto& m : sing) {
    for (const auto& pb : split_map(m, [&](const PointCluster& p) { return branches_at(c, p, rng, cap_x); }))
      total += v_ledger(pb).total;
  }
  const int base = c.base() ? c.base()->degree() : 1;
  return d * (d - 1) - static_cast<int>(divide_exact(total, base, "ledger total"));
}

DualDegree dual_degree(const PlaneCurve& c, Rng& rng, int cap_x) {
  auto sing = singular_points(c, rng);
  return {dual_degree_polar(c, sing, rng), dual_degree_ledger(c, sing, rng, cap_x)};
}

}  // namespace caustic
