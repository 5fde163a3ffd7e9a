#pragma once

#include <array>
#include <map>
#include <string>

#include "caustic/extension.hpp"

namespace caustic {

using Exps = std::array<int, 3>;
using Vec3 = std::array<Elem, 3>;
using Mat3 = std::array<std::array<Elem, 3>, 3>;

/// Bivariate polynomial f(x, y) stored as a polynomial in y whose
/// coefficients are polynomials in x.
using BiPoly = Poly<Poly<Elem>>;

/// Sparse homogeneous polynomial in x, y, z. Every stored monomial has total
/// degree equal to degree(); zero coefficients are never stored.
class TriPoly {
 public:
  TriPoly() = default;
  explicit TriPoly(int degree) : degree_(degree) {}
  static TriPoly monomial(const Elem& c, int a, int b, int cz);
  /// x, y or z for k = 0, 1, 2.
  static TriPoly variable(int k);
  static TriPoly linear_form(const Vec3& coeffs);

  int degree() const { return degree_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Exps, Elem>& terms() const { return terms_; }
  Elem coeff(const Exps& e) const;
  /// Adds c * x^a y^b z^c; throws std::invalid_argument on a degree mismatch.
  void add_term(const Exps& e, const Elem& c);

  TriPoly& operator+=(const TriPoly& o);
  TriPoly& operator-=(const TriPoly& o);
  friend TriPoly operator+(TriPoly a, const TriPoly& b) { return a += b; }
  friend TriPoly operator-(TriPoly a, const TriPoly& b) { return a -= b; }
  TriPoly operator-() const;
  friend TriPoly operator*(const TriPoly& a, const TriPoly& b);
  friend TriPoly operator*(const Elem& s, const TriPoly& p);
  friend bool operator==(const TriPoly& a, const TriPoly& b);
  friend bool operator!=(const TriPoly& a, const TriPoly& b) { return !(a == b); }

  TriPoly pow(int k) const;
  TriPoly partial(int var) const;
  /// x_P F_x + y_P F_y + z_P F_z.
  TriPoly polar(const Vec3& p) const;

  Elem eval(const Vec3& p) const;
  /// F(p0(l), p1(l), p2(l)) for univariate polynomial coordinates.
  Poly<Elem> eval_univariate(const std::array<Poly<Elem>, 3>& p) const;
  /// F o M, i.e. F(M (x,y,z)^T).
  TriPoly substitute_linear(const Mat3& m) const;
  /// F(x, y, 1) as a polynomial in y over polynomials in x.
  BiPoly dehomogenize_z() const;

  TriPoly lifted(const ContextPtr& c) const;
  /// Deepest context among coefficients (null if all constants).
  ContextPtr context() const;
  /// Renders in the syntax accepted by the parser (t for the generator).
  std::string to_string() const;

 private:
  int degree_ = 0;
  std::map<Exps, Elem> terms_;
};

Mat3 identity3();
Mat3 mat_mul(const Mat3& a, const Mat3& b);
Vec3 mat_apply(const Mat3& a, const Vec3& v);
Elem det3(const Mat3& a);
/// Com(M) = det(M) * transpose(M)^{-1}, i.e. the cofactor matrix.
Mat3 cofactor3(const Mat3& a);
/// Adjugate = transpose of the cofactor matrix (M * adj(M) = det(M) * Id).
Mat3 adjugate3(const Mat3& a);
Mat3 mat_from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2);
Mat3 lift_mat(const Mat3& a, const ContextPtr& c);

Vec3 cross(const Vec3& a, const Vec3& b);
Elem dot(const Vec3& a, const Vec3& b);
Vec3 lift_vec(const Vec3& v, const ContextPtr& c);

}  // namespace caustic
