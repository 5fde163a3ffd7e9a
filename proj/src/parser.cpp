#include "caustic/parser.hpp"

#include <cctype>
#include <map>
#include <vector>

namespace caustic {

ParseError::ParseError(const std::string& msg, std::size_t pos)
    : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos), reason_(msg) {}

namespace {

// Exponents of x, y, z and (when parsing a modulus) t.
using Mono = std::array<int, 4>;
using Sparse = std::map<Mono, Elem>;

void add_into(Sparse& a, const Mono& m, const Elem& c) {
  Elem& slot = a[m];
  slot += c;
  if (slot.is_zero()) a.erase(m);
}

Sparse add(Sparse a, const Sparse& b, bool negate) {
  for (const auto& [m, c] : b) add_into(a, m, negate ? -c : c);
  return a;
}

Sparse mul(const Sparse& a, const Sparse& b) {
  Sparse out;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      Mono m;
      for (int k = 0; k < 4; ++k) m[k] = ma[k] + mb[k];
      add_into(out, m, ca * cb);
    }
  return out;
}

Sparse constant(const Elem& c) {
  Sparse s;
  if (!c.is_zero()) s[{0, 0, 0, 0}] = c;
  return s;
}

bool is_constant(const Sparse& s) { return s.empty() || (s.size() == 1 && s.begin()->first == Mono{}); }

Elem constant_of(const Sparse& s) { return s.empty() ? Elem() : s.begin()->second; }

class Parser {
 public:
  Parser(const std::string& text, ContextPtr ctx, bool t_variable, bool xyz_allowed)
      : s_(text), ctx_(std::move(ctx)), t_variable_(t_variable), xyz_(xyz_allowed) {}

  struct Summand {
    std::size_t pos;
    Sparse value;
  };

  // Top-level sum, keeping each summand with its position.
  std::vector<Summand> summands() {
    std::vector<Summand> out;
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    bool negate = false;
    if (peek('+') || peek('-')) negate = s_[pos_++] == '-';
    while (true) {
      skip();
      std::size_t start = pos_;
      Sparse t = term();
      out.push_back({start, negate ? add({}, t, true) : t});
      skip();
      if (peek('+') || peek('-')) {
        negate = s_[pos_++] == '-';
        continue;
      }
      break;
    }
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected '") + s_[pos_] + "'", pos_);
    return out;
  }

  Sparse whole() {
    Sparse acc;
    for (auto& sm : summands()) acc = add(std::move(acc), sm.value, false);
    return acc;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  Sparse expr() {
    skip();
    bool negate = false;
    if (peek('+') || peek('-')) negate = s_[pos_++] == '-';
    Sparse acc = term();
    if (negate) acc = add({}, acc, true);
    while (peek('+') || peek('-')) {
      bool minus = s_[pos_++] == '-';
      acc = add(std::move(acc), term(), minus);
    }
    return acc;
  }

  Sparse term() {
    Sparse acc = power();
    while (peek('*') || peek('/')) {
      char op = s_[pos_];
      std::size_t at = pos_++;
      Sparse rhs = power();
      if (op == '*') {
        acc = mul(acc, rhs);
        continue;
      }
      if (!is_constant(rhs)) throw ParseError("division by a non-constant", at);
      Elem c = constant_of(rhs);
      try {
        if (c.is_zero()) throw std::domain_error("zero");
        acc = mul(acc, constant(c.inverse()));
      } catch (const std::domain_error&) {
        throw ParseError("division by zero", at);
      } catch (const Split&) {
        throw ParseError("divisor is a zero divisor of the extension", at);
      }
    }
    return acc;
  }

  Sparse power() {
    Sparse b = atom();
    if (!peek('^')) return b;
    ++pos_;
    skip();
    std::size_t at = pos_;
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
      throw ParseError("expected a non-negative integer exponent", at);
    long k = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      k = k * 10 + (s_[pos_++] - '0');
      if (k > 1000) throw ParseError("exponent too large", at);
    }
    Sparse r = constant(Elem(1));
    for (long i = 0; i < k; ++i) r = mul(r, b);
    return r;
  }

  Sparse atom() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    std::size_t at = pos_;
    if (c == '(') {
      ++pos_;
      Sparse e = expr();
      if (!peek(')')) throw ParseError("expected ')'", pos_);
      ++pos_;
      return e;
    }
    if (c == '-' || c == '+') {
      ++pos_;
      Sparse a = power();
      return c == '-' ? add({}, a, true) : a;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string digits;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) digits += s_[pos_++];
      return constant(Elem(QI(mpq_class(mpz_class(digits)))));
    }
    ++pos_;
    Mono m{};
    switch (c) {
      case 'i':
        return constant(Elem(QI::imaginary_unit()));
      case 'x':
      case 'y':
      case 'z':
        if (!xyz_) throw ParseError(std::string("variable '") + c + "' not allowed here", at);
        m[c - 'x'] = 1;
        return Sparse{{m, Elem(1)}};
      case 't':
        if (t_variable_) {
          m[3] = 1;
          return Sparse{{m, Elem(1)}};
        }
        if (!ctx_) throw ParseError("'t' needs an extension (--ext)", at);
        return constant(ctx_->generator());
      default:
        throw ParseError(std::string("unexpected '") + c + "'", at);
    }
  }

  const std::string& s_;
  ContextPtr ctx_;
  bool t_variable_;
  bool xyz_;
  std::size_t pos_ = 0;
};

int total_degree(const Mono& m) { return m[0] + m[1] + m[2]; }

}  // namespace

ContextPtr parse_extension(const std::string& text) {
  Sparse s = Parser(text, nullptr, true, false).whole();
  std::vector<QI> c;
  for (const auto& [m, v] : s) {
    if (static_cast<int>(c.size()) <= m[3]) c.resize(m[3] + 1);
    c[m[3]] = v.constant_value();
  }
  Poly<QI> p(std::move(c));
  if (p.degree() < 1) throw ParseError("extension modulus must have positive degree in t", 0);
  if (gcd(p, p.derivative()).degree() > 0) throw ParseError("extension modulus is not squarefree", 0);
  return Context::make(p);
}

TriPoly parse_form(const std::string& text, const ContextPtr& base) {
  auto parts = Parser(text, base, false, true).summands();
  int deg = -1;
  Sparse acc;
  for (const auto& sm : parts) {
    int sd = -1;
    for (const auto& [m, c] : sm.value) {
      int k = total_degree(m);
      if (sd < 0) sd = k;
      if (k != sd) throw ParseError("inhomogeneous summand", sm.pos);
    }
    if (sd < 0) continue;
    if (deg < 0) deg = sd;
    if (sd != deg)
      throw ParseError("term of degree " + std::to_string(sd) + " in a form of degree " + std::to_string(deg),
                       sm.pos);
    acc = add(std::move(acc), sm.value, false);
  }
  if (acc.empty()) throw ParseError("the form is zero", 0);
  TriPoly F(deg);
  for (const auto& [m, c] : acc) F.add_term({m[0], m[1], m[2]}, base ? base->lift(c) : c);
  return F;
}

Vec3 parse_point(const std::string& text, const ContextPtr& base) {
  Vec3 p;
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    std::size_t end = text.find(':', start);
    if ((k < 2) != (end != std::string::npos))
      throw ParseError("a point needs exactly three coordinates a:b:c", end == std::string::npos ? text.size() : end);
    std::string piece = text.substr(start, k < 2 ? end - start : std::string::npos);
    try {
      Sparse s = Parser(piece, base, false, false).whole();
      p[k] = constant_of(s);
      if (base) p[k] = base->lift(p[k]);
    } catch (const ParseError& e) {
      throw ParseError("bad coordinate: " + e.reason(), start + e.position());
    }
    start = end + 1;
  }
  bool all_zero = true;
  for (const auto& v : p) all_zero = all_zero && v.is_zero();
  if (all_zero) throw ParseError("[0:0:0] is not a point", 0);
  return p;
}

}  // namespace caustic
