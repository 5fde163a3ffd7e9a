#pragma once

// Dense univariate polynomials over an exact coefficient ring, with the
// algorithms the rest of the library builds on: Euclid over fields,
// pseudo-division and subresultant resultants over integral domains, and
// Yun's squarefree decomposition.

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "caustic/gaussian_rational.hpp"

namespace caustic {

template <class R>
class Poly;

/// Ring hooks used by the generic algorithms. Specialize for new coefficient types.
template <class R>
struct RingTraits {
  static R one() { return R(1); }
  static R from_int(long k) { return R(k); }
};

template <class R>
struct RingTraits<Poly<R>> {
  static Poly<R> one() { return Poly<R>(RingTraits<R>::one()); }
  static Poly<R> from_int(long k) { return Poly<R>(RingTraits<R>::from_int(k)); }
};

inline bool is_zero(const QI& a) { return a.is_zero(); }
inline QI exact_div(const QI& a, const QI& b) { return a / b; }
inline QI field_inverse(const QI& a) { return a.inverse(); }

namespace detail {
template <class T>
bool coeff_zero(const T& x) {
  return is_zero(x);
}
}  // namespace detail

template <class R>
class Poly {
 public:
  using Coeff = R;

  Poly() = default;
  explicit Poly(R c) {
    if (!detail::coeff_zero(c)) c_.push_back(std::move(c));
  }
  explicit Poly(std::vector<R> c) : c_(std::move(c)) { trim(); }

  static Poly monomial(R c, std::size_t k) {
    if (detail::coeff_zero(c)) return {};
    std::vector<R> v(k + 1);
    v[k] = std::move(c);
    return Poly(std::move(v));
  }
  /// The polynomial "x".
  static Poly variable() { return monomial(RingTraits<R>::one(), 1); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  std::size_t size() const { return c_.size(); }
  R coeff(std::size_t k) const { return k < c_.size() ? c_[k] : R(); }
  const R& operator[](std::size_t k) const { return c_[k]; }
  const R& lead() const {
    if (c_.empty()) throw std::logic_error("leading coefficient of zero polynomial");
    return c_.back();
  }
  const std::vector<R>& coeffs() const { return c_; }

  /// Lowest index with a structurally nonzero coefficient; -1 for zero.
  int low_degree() const {
    for (std::size_t k = 0; k < c_.size(); ++k)
      if (!detail::coeff_zero(c_[k])) return static_cast<int>(k);
    return -1;
  }

  void set_coeff(std::size_t k, R v) {
    if (k >= c_.size()) c_.resize(k + 1);
    c_[k] = std::move(v);
    trim();
  }

  Poly& operator+=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] += o.c_[k];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
    for (std::size_t k = 0; k < o.c_.size(); ++k) c_[k] -= o.c_[k];
    trim();
    return *this;
  }
  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  Poly operator-() const {
    Poly r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<R> out(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
      if (detail::coeff_zero(a.c_[i])) continue;
      for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
    }
    return Poly(std::move(out));
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  friend Poly operator*(const R& s, const Poly& p) {
    if (detail::coeff_zero(s)) return {};
    Poly r = p;
    for (auto& c : r.c_) c = s * c;
    r.trim();
    return r;
  }
  friend Poly operator*(const Poly& p, const R& s) { return s * p; }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  /// p(x) * x^k
  Poly shifted(std::size_t k) const {
    if (is_zero()) return {};
    std::vector<R> v(k);
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(std::move(v));
  }

  Poly derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<R> v(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k)
      v[k - 1] = RingTraits<R>::from_int(static_cast<long>(k)) * c_[k];
    return Poly(std::move(v));
  }

  template <class X>
  X eval(const X& x) const {
    X acc{};
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + X(c_[k]);
    return acc;
  }
  R eval(const R& x) const {
    R acc{};
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * x + c_[k];
    return acc;
  }

  /// p(q(x))
  Poly compose(const Poly& q) const {
    Poly acc;
    for (std::size_t k = c_.size(); k-- > 0;) acc = acc * q + Poly(c_[k]);
    return acc;
  }

  template <class F>
  auto map(F&& f) const -> Poly<decltype(f(std::declval<const R&>()))> {
    using S = decltype(f(std::declval<const R&>()));
    std::vector<S> v;
    v.reserve(c_.size());
    for (const auto& c : c_) v.push_back(f(c));
    return Poly<S>(std::move(v));
  }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim() {
    while (!c_.empty() && detail::coeff_zero(c_.back())) c_.pop_back();
  }
  std::vector<R> c_;
};

template <class R>
bool is_zero(const Poly<R>& p) {
  return p.is_zero();
}

template <class R>
std::string Poly<R>::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::string s;
  for (std::size_t k = c_.size(); k-- > 0;) {
    if (detail::coeff_zero(c_[k])) continue;
    if (!s.empty()) s += " + ";
    std::string cs;
    if constexpr (std::is_same_v<R, QI>) cs = c_[k].to_string();
    else cs = "(" + c_[k].to_string() + ")";
    if (k == 0) s += cs;
    else {
      s += cs + "*" + var;
      if (k > 1) s += "^" + std::to_string(k);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Field algorithms. Require field_inverse(R).

template <class R>
std::pair<Poly<R>, Poly<R>> divrem(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly<R>(), a};
  R inv_lead = field_inverse(b.lead());
  std::vector<R> rem = a.coeffs();
  std::vector<R> quo(a.degree() - b.degree() + 1);
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (is_zero(rem[k])) continue;
    R q = rem[k] * inv_lead;
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= q * b[j];
    quo[k - db] = std::move(q);
  }
  rem.resize(db);
  return {Poly<R>(std::move(quo)), Poly<R>(std::move(rem))};
}

template <class R>
Poly<R> operator%(const Poly<R>& a, const Poly<R>& b) {
  return divrem(a, b).second;
}

template <class R>
Poly<R> make_monic(const Poly<R>& p) {
  if (p.is_zero()) return p;
  return field_inverse(p.lead()) * p;
}

/// Monic gcd over a field (zero if both inputs are zero).
template <class R>
Poly<R> gcd(Poly<R> a, Poly<R> b) {
  while (!b.is_zero()) {
    Poly<R> r = divrem(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

/// Returns (g, s, t) with s*a + t*b = g, g monic.
template <class R>
struct ExtGcd {
  Poly<R> g, s, t;
};

template <class R>
ExtGcd<R> ext_gcd(const Poly<R>& a, const Poly<R>& b) {
  Poly<R> r0 = a, r1 = b;
  Poly<R> s0(RingTraits<R>::one()), s1;
  Poly<R> t0, t1(RingTraits<R>::one());
  while (!r1.is_zero()) {
    auto [q, r] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly<R> s2 = s0 - q * s1;
    Poly<R> t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  R inv = field_inverse(r0.lead());
  return {inv * r0, inv * s0, inv * t0};
}

/// Exact quotient a / b over a field; throws if b does not divide a.
template <class R>
Poly<R> div_exact_field(const Poly<R>& a, const Poly<R>& b) {
  auto [q, r] = divrem(a, b);
  if (!r.is_zero()) throw std::logic_error("inexact polynomial division");
  return q;
}

/// Squarefree part f / gcd(f, f'), made monic.
template <class R>
Poly<R> squarefree_part(const Poly<R>& f) {
  if (f.is_zero()) throw std::domain_error("squarefree part of zero");
  if (f.degree() == 0) return Poly<R>(RingTraits<R>::one());
  Poly<R> g = gcd(f, f.derivative());
  return make_monic(div_exact_field(f, g));
}

/// Yun's algorithm: f = lc * prod_k factor_k^k with pairwise coprime monic
/// squarefree factors. Only factors of positive degree are returned.
template <class R>
std::vector<std::pair<Poly<R>, int>> squarefree_decomposition(const Poly<R>& f) {
  std::vector<std::pair<Poly<R>, int>> out;
  if (f.degree() <= 0) return out;
  Poly<R> fm = make_monic(f);
  Poly<R> df = fm.derivative();
  Poly<R> a0 = gcd(fm, df);
  Poly<R> b = div_exact_field(fm, a0);
  Poly<R> c = div_exact_field(df, a0);
  Poly<R> d = c - b.derivative();
  int i = 1;
  while (b.degree() > 0) {
    Poly<R> a = gcd(b, d);
    if (a.degree() > 0) out.emplace_back(a, i);
    b = div_exact_field(b, a);
    c = div_exact_field(d, a);
    d = c - b.derivative();
    ++i;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Integral-domain algorithms. Require exact_div(R, R).

template <class R>
Poly<R> pseudo_remainder(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("pseudo-remainder by zero");
  if (a.degree() < b.degree()) return a;
  int e = a.degree() - b.degree() + 1;
  Poly<R> r = a;
  const R& lb = b.lead();
  while (!r.is_zero() && r.degree() >= b.degree()) {
    Poly<R> s = Poly<R>::monomial(r.lead(), r.degree() - b.degree());
    r = lb * r - s * b;
    --e;
  }
  R f = RingTraits<R>::one();
  for (int k = 0; k < e; ++k) f = f * lb;
  return f * r;
}

template <class R>
R ring_pow(const R& a, int k) {
  R r = RingTraits<R>::one();
  R base = a;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

/// Exact division of polynomials over an integral domain (long division with
/// exact coefficient quotients).
template <class R>
Poly<R> div_exact(const Poly<R>& a, const Poly<R>& b) {
  if (b.is_zero()) throw std::domain_error("division by zero polynomial");
  if (a.is_zero()) return a;
  if (a.degree() < b.degree()) throw std::logic_error("inexact polynomial division");
  std::vector<R> rem = a.coeffs();
  std::vector<R> quo(a.degree() - b.degree() + 1);
  const int db = b.degree();
  for (int k = a.degree(); k >= db; --k) {
    if (is_zero(rem[k])) continue;
    R q = exact_div(rem[k], b.lead());
    for (int j = 0; j <= db; ++j) rem[k - db + j] -= q * b[j];
    quo[k - db] = std::move(q);
  }
  for (int k = 0; k < db; ++k)
    if (!is_zero(rem[k])) throw std::logic_error("inexact polynomial division");
  return Poly<R>(std::move(quo));
}

template <class R>
Poly<R> exact_div(const Poly<R>& a, const Poly<R>& b) {
  return div_exact(a, b);
}

/// Resultant via the subresultant pseudo-remainder sequence.
template <class R>
R resultant(Poly<R> a, Poly<R> b) {
  if (a.is_zero() || b.is_zero()) return R();
  R sign = RingTraits<R>::one();
  if (a.degree() < b.degree()) {
    std::swap(a, b);
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
  }
  if (b.degree() == 0) return sign * ring_pow(b.lead(), a.degree());
  R g = RingTraits<R>::one();
  R h = RingTraits<R>::one();
  while (true) {
    int delta = a.degree() - b.degree();
    if ((a.degree() % 2 == 1) && (b.degree() % 2 == 1)) sign = -sign;
    Poly<R> r = pseudo_remainder(a, b);
    a = std::move(b);
    if (r.is_zero()) return R();
    R div = g * ring_pow(h, delta);
    std::vector<R> rc;
    rc.reserve(r.size());
    for (const auto& c : r.coeffs()) rc.push_back(exact_div(c, div));
    b = Poly<R>(std::move(rc));
    g = a.lead();
    if (delta == 0) {
      // h unchanged
    } else if (delta == 1) {
      h = g;
    } else {
      h = exact_div(ring_pow(g, delta), ring_pow(h, delta - 1));
    }
    if (b.degree() == 0) {
      int da = a.degree();
      R lb = ring_pow(b.lead(), da);
      R hh = da >= 1 ? exact_div(lb, ring_pow(h, da - 1)) : lb;
      return sign * hh;
    }
  }
}

/// Number of times (x - root) divides p (p nonzero). Uses synthetic division;
/// the zero test is supplied by the caller so that dynamic evaluation can
/// split contexts.
template <class R, class ZeroTest>
int root_multiplicity(Poly<R> p, const R& root, ZeroTest&& is_zero_here) {
  if (p.is_zero()) throw std::domain_error("root multiplicity in zero polynomial");
  int m = 0;
  while (p.degree() >= 1) {
    // synthetic division by (x - root)
    const int n = p.degree();
    std::vector<R> q(n);
    R acc = p[n];
    for (int k = n - 1; k >= 0; --k) {
      q[k] = acc;
      acc = acc * root + p[k];
    }
    if (!is_zero_here(acc)) break;
    ++m;
    p = Poly<R>(std::move(q));
  }
  return m;
}

}  // namespace caustic
