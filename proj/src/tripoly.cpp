#include "caustic/tripoly.hpp"

#include <stdexcept>
#include <vector>

namespace caustic {

TriPoly TriPoly::monomial(const Elem& c, int a, int b, int cz) {
  TriPoly p(a + b + cz);
  p.add_term({a, b, cz}, c);
  return p;
}

TriPoly TriPoly::variable(int k) {
  Exps e{0, 0, 0};
  e[k] = 1;
  TriPoly p(1);
  p.add_term(e, Elem(1));
  return p;
}

TriPoly TriPoly::linear_form(const Vec3& coeffs) {
  TriPoly p(1);
  for (int k = 0; k < 3; ++k) {
    Exps e{0, 0, 0};
    e[k] = 1;
    p.add_term(e, coeffs[k]);
  }
  return p;
}

Elem TriPoly::coeff(const Exps& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Elem() : it->second;
}

void TriPoly::add_term(const Exps& e, const Elem& c) {
  if (e[0] < 0 || e[1] < 0 || e[2] < 0) throw std::invalid_argument("negative exponent");
  if (e[0] + e[1] + e[2] != degree_) {
    if (!terms_.empty()) throw std::invalid_argument("inhomogeneous term");
    degree_ = e[0] + e[1] + e[2];
  }
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.try_emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TriPoly& TriPoly::operator+=(const TriPoly& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) degree_ = o.degree_;
  if (o.degree_ != degree_) throw std::invalid_argument("adding forms of different degrees");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

TriPoly& TriPoly::operator-=(const TriPoly& o) { return *this += -o; }

TriPoly TriPoly::operator-() const {
  TriPoly r = *this;
  for (auto& [e, c] : r.terms_) c = -c;
  return r;
}

TriPoly operator*(const TriPoly& a, const TriPoly& b) {
  TriPoly r(a.degree_ + b.degree_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      r.add_term({ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]}, ca * cb);
  return r;
}

TriPoly operator*(const Elem& s, const TriPoly& p) {
  TriPoly r(p.degree_);
  if (s.is_zero()) return r;
  for (const auto& [e, c] : p.terms_) r.add_term(e, s * c);
  return r;
}

bool operator==(const TriPoly& a, const TriPoly& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

TriPoly TriPoly::pow(int k) const {
  TriPoly r = TriPoly::monomial(Elem(1), 0, 0, 0);
  for (int j = 0; j < k; ++j) r = r * *this;
  return r;
}

TriPoly TriPoly::partial(int var) const {
  TriPoly r(degree_ > 0 ? degree_ - 1 : 0);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exps f = e;
    f[var] -= 1;
    r.add_term(f, Elem(static_cast<long>(e[var])) * c);
  }
  return r;
}

TriPoly TriPoly::polar(const Vec3& p) const {
  TriPoly r(degree_ > 0 ? degree_ - 1 : 0);
  for (int k = 0; k < 3; ++k) r += p[k] * partial(k);
  return r;
}

Elem TriPoly::eval(const Vec3& p) const {
  std::array<std::vector<Elem>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    pw[k].push_back(Elem(1));
    for (int j = 1; j <= degree_; ++j) pw[k].push_back(pw[k].back() * p[k]);
  }
  Elem acc;
  for (const auto& [e, c] : terms_) acc += c * pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]];
  return acc;
}

Poly<Elem> TriPoly::eval_univariate(const std::array<Poly<Elem>, 3>& p) const {
  std::array<std::vector<Poly<Elem>>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    pw[k].push_back(Poly<Elem>(Elem(1)));
    for (int j = 1; j <= degree_; ++j) pw[k].push_back(pw[k].back() * p[k]);
  }
  Poly<Elem> acc;
  for (const auto& [e, c] : terms_) acc += c * (pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]]);
  return acc;
}

TriPoly TriPoly::substitute_linear(const Mat3& m) const {
  std::array<std::vector<TriPoly>, 3> pw;
  for (int k = 0; k < 3; ++k) {
    pw[k].push_back(TriPoly::monomial(Elem(1), 0, 0, 0));
    TriPoly lin = TriPoly::linear_form(m[k]);
    for (int j = 1; j <= degree_; ++j) pw[k].push_back(pw[k].back() * lin);
  }
  TriPoly r(degree_);
  for (const auto& [e, c] : terms_) r += c * (pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]]);
  return r;
}

BiPoly TriPoly::dehomogenize_z() const {
  std::vector<std::vector<Elem>> rows(degree_ + 1, std::vector<Elem>(degree_ + 1));
  for (const auto& [e, c] : terms_) rows[e[1]][e[0]] = c;
  std::vector<Poly<Elem>> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.emplace_back(std::move(r));
  return BiPoly(std::move(out));
}

TriPoly TriPoly::lifted(const ContextPtr& c) const {
  TriPoly r(degree_);
  for (const auto& [e, v] : terms_) r.add_term(e, c->lift(v));
  return r;
}

ContextPtr TriPoly::context() const {
  ContextPtr c;
  for (const auto& [e, v] : terms_) c = common_context(c, v.context());
  return c;
}

std::string TriPoly::to_string() const {
  if (terms_.empty()) return "0";
  static const char* names[3] = {"x", "y", "z"};
  std::string s;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    if (!s.empty()) s += " + ";
    s += "(" + c.to_string() + ")";
    for (int k = 0; k < 3; ++k) {
      if (e[k] == 0) continue;
      s += std::string("*") + names[k];
      if (e[k] > 1) s += "^" + std::to_string(e[k]);
    }
  }
  return s;
}

// ---------------------------------------------------------------------------

Mat3 identity3() {
  Mat3 m;
  for (int i = 0; i < 3; ++i) m[i][i] = Elem(1);
  return m;
}

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Vec3 mat_apply(const Mat3& a, const Vec3& v) {
  Vec3 r;
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k) r[i] += a[i][k] * v[k];
  return r;
}

Elem det3(const Mat3& a) {
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

Mat3 cofactor3(const Mat3& a) {
  Mat3 c;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
      c[i][j] = a[i1][j1] * a[i2][j2] - a[i1][j2] * a[i2][j1];
    }
  return c;
}

Mat3 adjugate3(const Mat3& a) {
  Mat3 c = cofactor3(a);
  Mat3 t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t[i][j] = c[j][i];
  return t;
}

Mat3 mat_from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    m[i][0] = c0[i];
    m[i][1] = c1[i];
    m[i][2] = c2[i];
  }
  return m;
}

Mat3 lift_mat(const Mat3& a, const ContextPtr& c) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r[i][j] = c->lift(a[i][j]);
  return r;
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Elem dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

Vec3 lift_vec(const Vec3& v, const ContextPtr& c) {
  return {c->lift(v[0]), c->lift(v[1]), c->lift(v[2])};
}

}  // namespace caustic
