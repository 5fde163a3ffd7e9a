#include "caustic/extension.hpp"

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "caustic/modp.hpp"

namespace caustic {

namespace {

std::atomic<std::size_t> next_serial{1};

using PQ = Poly<QI>;
using PPQ = Poly<PQ>;

void check_squarefree(const PQ& m) {
  if (m.degree() < 1) throw std::domain_error("extension modulus must have positive degree");
  if (gcd(m, m.derivative()).degree() != 0)
    throw std::domain_error("extension modulus is not squarefree: " + m.to_string("t"));
}

// Reduction modulo a monic polynomial.
PQ reduce_monic(PQ a, const PQ& m) {
  const int dm = m.degree();
  if (a.degree() < dm) return a;
  std::vector<QI> c = a.coeffs();
  for (int k = static_cast<int>(c.size()) - 1; k >= dm; --k) {
    if (c[k].is_zero()) continue;
    QI q = c[k];
    for (int j = 0; j < dm; ++j) c[k - dm + j] -= q * m[j];
    c[k] = QI();
  }
  c.resize(dm);
  return PQ(std::move(c));
}

// Rigorous coprimality certificate for a and a monic m over Q(i): if the
// reductions modulo a prime p = 1 mod 4 (i -> sqrt(-1)) are coprime, then
// Res(m, a) is nonzero. Returns false when inconclusive.
constexpr ModPrime kModPrimes[] = {{4611686018427387817ULL, 120863620846201794ULL},
                                   {2305843009213705933ULL, 840961202758866373ULL}};

std::optional<std::vector<std::uint64_t>> reduce_poly(const PQ& a, const ModPrime& mp) {
  std::vector<std::uint64_t> out;
  for (const QI& c : a.coeffs()) {
    auto r = reduce_qi(c, mp);
    if (!r) return std::nullopt;
    out.push_back(*r);
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

// Degree of gcd(a, b) in F_p[t], a and b nonzero.
int gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p) {
  while (!b.empty()) {
    std::uint64_t inv = powmod(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      std::uint64_t q = mulmod(a.back(), inv, p);
      std::size_t shift = a.size() - b.size();
      for (std::size_t k = 0; k < b.size(); ++k)
        a[k + shift] = (a[k + shift] + p - mulmod(q, b[k], p)) % p;
      while (!a.empty() && a.back() == 0) a.pop_back();
    }
    std::swap(a, b);
  }
  return static_cast<int>(a.size()) - 1;
}

bool certified_coprime(const PQ& a, const PQ& monic_m) {
  for (const ModPrime& mp : kModPrimes) {
    auto ra = reduce_poly(a, mp), rm = reduce_poly(monic_m, mp);
    if (!ra || !rm) continue;
    if (ra->empty()) return false;
    return gcd_degree_mod(std::move(*rm), std::move(*ra), mp.p) == 0;
  }
  return false;
}

}  // namespace

Split::Split(ContextPtr ctx, Poly<QI> factor, Poly<QI> cofactor)
    : ctx_(std::move(ctx)), factor_(std::move(factor)), cofactor_(std::move(cofactor)) {
  msg_ = "zero divisor in extension #" + std::to_string(ctx_ ? ctx_->serial() : 0) +
         ": modulus splits into degrees " + std::to_string(factor_.degree()) + " and " +
         std::to_string(cofactor_.degree());
}

ContextPtr Context::rationals() {
  static const ContextPtr q = [] {
    std::shared_ptr<Context> c(new Context());
    c->modulus_ = PQ::variable();
    c->serial_ = 0;
    return ContextPtr(c);
  }();
  return q;
}

ContextPtr Context::make(const Poly<QI>& modulus) {
  check_squarefree(modulus);
  std::shared_ptr<Context> c(new Context());
  c->modulus_ = make_monic(modulus);
  c->serial_ = next_serial++;
  return c;
}

ContextPtr Context::make_child(const Poly<QI>& modulus, ContextPtr parent, Poly<QI> parent_image,
                               std::vector<std::string> log) {
  std::shared_ptr<Context> c(new Context());
  c->modulus_ = make_monic(modulus);
  c->parent_ = std::move(parent);
  c->parent_image_ = reduce_monic(std::move(parent_image), c->modulus_);
  c->split_log_ = std::move(log);
  c->serial_ = next_serial++;
  return c;
}

bool Context::descends_from(const Context* ancestor) const {
  for (const Context* p = this; p; p = p->parent_.get())
    if (p == ancestor) return true;
  return false;
}

Elem Context::element(const Poly<QI>& rep) const { return Elem(shared_from_this(), rep); }

Elem Context::generator() const { return element(PQ::variable()); }

Elem Context::lift(const Elem& e) const {
  if (!e.context()) return element(e.rep());
  if (e.context().get() == this) return e;
  if (!parent_) throw std::logic_error("element belongs to an unrelated extension");
  Elem pe = parent_->lift(e);
  if (pe.is_constant()) return element(pe.rep());
  Elem img = element(parent_image_);
  Elem acc = element(PQ());
  const PQ& r = pe.rep();
  for (std::size_t k = r.size(); k-- > 0;) acc = acc * img + Elem(r[k]);
  return acc;
}

ContextPtr Context::restrict_to(const Poly<QI>& factor) const {
  PQ f = make_monic(factor);
  if (f == modulus_) return shared_from_this();
  if (!(modulus_ % f).is_zero()) throw std::logic_error("restriction by a non-divisor of the modulus");
  std::vector<std::string> log = split_log_;
  log.push_back("restrict #" + std::to_string(serial_) + " to " + f.to_string("t"));
  return make_child(f, shared_from_this(), PQ::variable(), std::move(log));
}

// ---------------------------------------------------------------------------

Elem::Elem(ContextPtr ctx, Poly<QI> rep) : ctx_(std::move(ctx)), rep_(std::move(rep)) {
  if (!ctx_) {
    if (rep_.degree() > 0) throw std::logic_error("non-constant element without context");
    return;
  }
  if (rep_.degree() >= ctx_->degree()) rep_ = reduce_monic(std::move(rep_), ctx_->modulus());
}

ContextPtr common_context(const ContextPtr& a, const ContextPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->descends_from(b.get())) return a;
  if (b->descends_from(a.get())) return b;
  throw std::logic_error("mixing elements of unrelated extensions");
}

void Elem::adopt(const Elem& o) {
  if (!o.ctx_ || o.ctx_ == ctx_) return;
  ContextPtr c = common_context(ctx_, o.ctx_);
  if (c != ctx_) *this = c->lift(*this);
}

Elem& Elem::operator+=(const Elem& o) {
  if (o.ctx_ == ctx_ || !o.ctx_) {
    rep_ += o.rep_;
    return *this;
  }
  adopt(o);
  if (o.ctx_ == ctx_) rep_ += o.rep_;
  else rep_ += ctx_->lift(o).rep_;
  return *this;
}

Elem& Elem::operator-=(const Elem& o) {
  if (o.ctx_ == ctx_ || !o.ctx_) {
    rep_ -= o.rep_;
    return *this;
  }
  adopt(o);
  if (o.ctx_ == ctx_) rep_ -= o.rep_;
  else rep_ -= ctx_->lift(o).rep_;
  return *this;
}

Elem& Elem::operator*=(const Elem& o) {
  if (o.ctx_ && o.ctx_ != ctx_) {
    adopt(o);
    if (o.ctx_ != ctx_) return *this *= ctx_->lift(o);
  }
  if (rep_.is_zero()) return *this;
  if (o.rep_.is_zero()) {
    rep_ = PQ();
    return *this;
  }
  if (o.rep_.degree() == 0) {
    rep_ = o.rep_[0] * rep_;
    return *this;
  }
  if (rep_.degree() == 0) {
    rep_ = rep_[0] * o.rep_;
    return *this;
  }
  rep_ = reduce_monic(rep_ * o.rep_, ctx_->modulus());
  return *this;
}

Elem Elem::operator-() const {
  Elem r = *this;
  r.rep_ = -r.rep_;
  return r;
}

bool operator==(const Elem& a, const Elem& b) {
  if (a.ctx_ == b.ctx_ || !a.ctx_ || !b.ctx_) return a.rep_ == b.rep_;
  ContextPtr c = common_context(a.ctx_, b.ctx_);
  return c->lift(a).rep_ == c->lift(b).rep_;
}

bool Elem::zero_test() const {
  if (rep_.is_zero()) return true;
  if (rep_.degree() == 0) return false;
  if (certified_coprime(rep_, ctx_->modulus())) return false;
  PQ g = gcd(rep_, ctx_->modulus());
  if (g.degree() == 0) return false;
  throw Split(ctx_, g, div_exact_field(ctx_->modulus(), g));
}

bool Elem::is_invertible() const {
  if (rep_.is_zero()) return false;
  if (rep_.degree() == 0) return true;
  if (certified_coprime(rep_, ctx_->modulus())) return true;
  return gcd(rep_, ctx_->modulus()).degree() == 0;
}

Elem Elem::inverse() const {
  if (rep_.is_zero()) throw std::domain_error("inverse of zero in extension");
  if (rep_.degree() == 0) return Elem(ctx_, PQ(rep_[0].inverse()));
  auto eg = ext_gcd(rep_, ctx_->modulus());
  if (eg.g.degree() != 0) throw Split(ctx_, eg.g, div_exact_field(ctx_->modulus(), eg.g));
  return Elem(ctx_, eg.s);
}

Elem Elem::in(const ContextPtr& c) const { return c->lift(*this); }

std::string Elem::to_string(const std::string& var) const {
  if (rep_.degree() <= 0) return rep_.coeff(0).to_string();
  return rep_.to_string(var);
}

// ---------------------------------------------------------------------------

Poly<Elem> lift_poly(const Poly<Elem>& p, const ContextPtr& c) {
  return p.map([&](const Elem& e) { return c->lift(e); });
}

Poly<Elem> to_elem_poly(const Poly<QI>& p) {
  return p.map([](const QI& c) { return Elem(c); });
}

int true_degree(const Poly<Elem>& p) {
  for (int k = p.degree(); k >= 0; --k)
    if (!p[k].zero_test()) return k;
  return -1;
}

Poly<Elem> normalize_d5(const Poly<Elem>& p) {
  int d = true_degree(p);
  std::vector<Elem> c(p.coeffs().begin(), p.coeffs().begin() + (d + 1));
  return Poly<Elem>(std::move(c));
}

std::optional<std::pair<Poly<QI>, Poly<QI>>> induced_split(const ContextPtr& c, const Split& s) {
  if (!c) return std::nullopt;
  if (s.context() == c) return std::make_pair(s.factor(), s.cofactor());
  if (!s.context() || !c->descends_from(s.context().get())) return std::nullopt;
  Elem g = c->lift(Elem(s.context(), s.factor()));
  if (g.is_zero()) return std::nullopt;
  PQ gd = gcd(g.rep(), c->modulus());
  if (gd.degree() <= 0 || gd.degree() == c->degree()) return std::nullopt;
  return std::make_pair(gd, div_exact_field(c->modulus(), gd));
}

namespace {

// tau(s) with gcd_t(p(t), B(t,s)) = t - tau(s) on every root of P; CRT over splits.
std::optional<PQ> solve_tau(const PQ& P, const PQ& p, const PPQ& B) {
  ContextPtr c = Context::make(P);
  Poly<Elem> pe = p.map([&](const QI& a) { return c->element(PQ(a)); });
  Poly<Elem> be = B.map([&](const PQ& a) { return c->element(a); });
  try {
    Poly<Elem> g = gcd(pe, be);
    if (g.degree() != 1) return std::nullopt;
    return (-g[0]).rep();
  } catch (const Split& sp) {
    if (sp.context() != c) throw;
    auto t1 = solve_tau(sp.factor(), p, B);
    auto t2 = solve_tau(sp.cofactor(), p, B);
    if (!t1 || !t2) return std::nullopt;
    auto eg = ext_gcd(sp.factor(), sp.cofactor());
    PQ corr = reduce_monic((*t2 - *t1) * eg.s, sp.cofactor());
    return reduce_monic(*t1 + sp.factor() * corr, P);
  }
}

}  // namespace

Adjoined adjoin_root(const ContextPtr& k, const Poly<Elem>& phi_in) {
  if (phi_in.degree() < 1) throw std::domain_error("adjoin_root: polynomial of degree < 1");
  Poly<Elem> phi = make_monic(lift_poly(phi_in, k));
  if (phi.degree() == 1) return {k, -phi[0]};
  std::vector<std::string> log = k->split_log();
  log.push_back("adjoin degree " + std::to_string(phi.degree()) + " over #" +
                std::to_string(k->serial()));
  if (k->degree() == 1) {
    PQ m = phi.map([](const Elem& e) { return e.constant_value(); });
    check_squarefree(m);
    QI gen_value = -k->modulus()[0];
    ContextPtr child = Context::make_child(m, k, PQ(gen_value), std::move(log));
    return {child, child->generator()};
  }
  const PQ& p = k->modulus();
  const int n = p.degree();
  PPQ p_t = p.map([](const QI& a) { return PQ(a); });
  for (long shift = 1; shift <= 64; ++shift) {
    PPQ lin(std::vector<PQ>{PQ::variable(), PQ(QI(-shift))});
    PPQ b;
    PPQ pw(RingTraits<PQ>::one());
    for (int j = 0; j <= phi.degree(); ++j) {
      b += phi[j].rep().map([](const QI& a) { return PQ(a); }) * pw;
      pw *= lin;
    }
    b = pseudo_remainder(b, p_t);
    PQ N = resultant(p_t, b);
    if (N.degree() != n * phi.degree()) continue;
    if (gcd(N, N.derivative()).degree() != 0) continue;
    PQ P = make_monic(N);
    auto tau = solve_tau(P, p, b);
    if (!tau) continue;
    ContextPtr child = Context::make_child(P, k, *tau, log);
    Elem w = child->generator() - Elem(QI(shift)) * child->element(*tau);
    Elem check = lift_poly(phi, child).eval(w);
    if (!check.is_zero()) throw std::logic_error("adjoin_root: primitive element check failed");
    return {child, w};
  }
  throw std::runtime_error("adjoin_root: no separating primitive element found");
}

}  // namespace caustic
