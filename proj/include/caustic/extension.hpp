#pragma once

// Dynamic evaluation over Q(i)[t]/(p(t)) with p squarefree (not necessarily
// irreducible). A zero-divisor met during inversion or a zero test raises a
// Split carrying the coprime factorization of the modulus; callers re-run the
// interrupted computation once per factor (see split_map).

#include <exception>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "caustic/gaussian_rational.hpp"
#include "caustic/polynomial.hpp"

namespace caustic {

class Context;
class Elem;
using ContextPtr = std::shared_ptr<const Context>;

/// Thrown when a context's modulus factors as factor * cofactor while
/// deciding an element that is zero on some roots only.
class Split : public std::exception {
 public:
  Split(ContextPtr ctx, Poly<QI> factor, Poly<QI> cofactor);
  const ContextPtr& context() const { return ctx_; }
  const Poly<QI>& factor() const { return factor_; }
  const Poly<QI>& cofactor() const { return cofactor_; }
  const char* what() const noexcept override { return msg_.c_str(); }

 private:
  ContextPtr ctx_;
  Poly<QI> factor_, cofactor_;
  std::string msg_;
};

class Context : public std::enable_shared_from_this<Context> {
 public:
  /// Q(i) itself, modulus t.
  static ContextPtr rationals();
  /// Root context with the given squarefree modulus (made monic).
  static ContextPtr make(const Poly<QI>& modulus);

  const Poly<QI>& modulus() const { return modulus_; }
  int degree() const { return modulus_.degree(); }
  const ContextPtr& parent() const { return parent_; }
  /// Image of the parent's generator, as a polynomial in this generator.
  const Poly<QI>& parent_image() const { return parent_image_; }
  const std::vector<std::string>& split_log() const { return split_log_; }
  std::size_t serial() const { return serial_; }

  bool descends_from(const Context* ancestor) const;
  /// Moves an element of this context or of an ancestor into this context.
  Elem lift(const Elem& e) const;
  Elem generator() const;
  Elem element(const Poly<QI>& rep) const;

  /// Child context for the roots of `factor` (a divisor of the modulus).
  ContextPtr restrict_to(const Poly<QI>& factor) const;
  /// Child context Q(i)[s]/(modulus) with the given parent data; used by adjunction.
  static ContextPtr make_child(const Poly<QI>& modulus, ContextPtr parent, Poly<QI> parent_image,
                               std::vector<std::string> log);

 private:
  Context() = default;
  Poly<QI> modulus_;
  ContextPtr parent_;
  Poly<QI> parent_image_;
  std::vector<std::string> split_log_;
  std::size_t serial_ = 0;
};

/// Element of a context. A null context means a constant of Q(i) that
/// adapts to whichever context it is combined with.
class Elem {
 public:
  Elem() = default;
  Elem(long c) : rep_(QI(c)) {}  // NOLINT(google-explicit-constructor)
  Elem(QI c) : rep_(std::move(c)) {}  // NOLINT(google-explicit-constructor)
  Elem(ContextPtr ctx, Poly<QI> rep);

  const ContextPtr& context() const { return ctx_; }
  const Poly<QI>& rep() const { return rep_; }

  /// Structural zero: zero on every root of the modulus.
  bool is_zero() const { return rep_.is_zero(); }
  bool is_constant() const { return rep_.degree() <= 0; }
  QI constant_value() const { return rep_.coeff(0); }

  /// True if zero on every root, false if invertible; throws Split otherwise.
  bool zero_test() const;
  /// Invertible on every root (never splits).
  bool is_invertible() const;
  /// Throws Split on a zero-divisor and std::domain_error on zero.
  Elem inverse() const;

  Elem& operator+=(const Elem& o);
  Elem& operator-=(const Elem& o);
  Elem& operator*=(const Elem& o);
  friend Elem operator+(Elem a, const Elem& b) { return a += b; }
  friend Elem operator-(Elem a, const Elem& b) { return a -= b; }
  friend Elem operator*(Elem a, const Elem& b) { return a *= b; }
  friend Elem operator/(const Elem& a, const Elem& b) { return a * b.inverse(); }
  Elem operator-() const;

  friend bool operator==(const Elem& a, const Elem& b);
  friend bool operator!=(const Elem& a, const Elem& b) { return !(a == b); }

  /// Lifts into c (c must be this element's context or a descendant).
  Elem in(const ContextPtr& c) const;

  std::string to_string(const std::string& var = "t") const;

 private:
  void adopt(const Elem& o);
  ContextPtr ctx_;
  Poly<QI> rep_;
};

inline bool is_zero(const Elem& a) { return a.is_zero(); }
inline Elem exact_div(const Elem& a, const Elem& b) { return a * b.inverse(); }
inline Elem field_inverse(const Elem& a) { return a.inverse(); }

/// The deeper of two contexts on one ancestry chain (null is the weakest).
ContextPtr common_context(const ContextPtr& a, const ContextPtr& b);

Poly<Elem> lift_poly(const Poly<Elem>& p, const ContextPtr& c);
Poly<Elem> to_elem_poly(const Poly<QI>& p);

/// D5 zero test of every coefficient; returns the true degree (-1 for zero).
int true_degree(const Poly<Elem>& p);
/// Drops trailing coefficients that are zero on every root (D5 tests).
Poly<Elem> normalize_d5(const Poly<Elem>& p);

struct Adjoined {
  ContextPtr ctx;
  Elem root;
};

/// Adjoins a root of phi (squarefree over k, degree >= 1). The new context's
/// roots correspond one-to-one to pairs (root of k's modulus, root of phi).
Adjoined adjoin_root(const ContextPtr& k, const Poly<Elem>& phi);

/// Given a Split raised on `s.context()`, returns the induced factorization
/// of `c`'s modulus when c descends from it (nullopt if not applicable or trivial).
std::optional<std::pair<Poly<QI>, Poly<QI>>> induced_split(const ContextPtr& c, const Split& s);

/// Runs fn(obj) on obj and, whenever a Split of obj's context (or an
/// ancestor) escapes, on the restrictions of obj to both factors.
/// T needs context() and restricted(ContextPtr).
template <class T, class Fn>
auto split_map(const T& obj, Fn&& fn) -> std::vector<decltype(fn(obj))> {
  std::vector<decltype(fn(obj))> out;
  std::vector<T> work{obj};
  while (!work.empty()) {
    T cur = std::move(work.back());
    work.pop_back();
    try {
      out.push_back(fn(cur));
    } catch (const Split& s) {
      auto parts = induced_split(cur.context(), s);
      if (!parts) throw;
      work.push_back(cur.restricted(cur.context()->restrict_to(parts->second)));
      work.push_back(cur.restricted(cur.context()->restrict_to(parts->first)));
    }
  }
  return out;
}

}  // namespace caustic
