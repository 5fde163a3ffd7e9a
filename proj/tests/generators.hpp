#pragma once

// Small hand-rolled generators for property tests.

#include <random>
#include <vector>

#include "caustic/tripoly.hpp"

namespace caustic::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  QI gaussian(long h = 5) { return QI(integer(-h, h), coin() ? integer(-h, h) : 0); }
  QI rational(long h = 9) {
    long den = integer(1, h);
    return QI(mpq_class(integer(-h, h), den), mpq_class(integer(-h, h), integer(1, h)));
  }
  QI nonzero_gaussian(long h = 5) {
    QI a;
    while (a.is_zero()) a = gaussian(h);
    return a;
  }

  Poly<QI> poly(int deg, long h = 5) {
    std::vector<QI> c;
    for (int k = 0; k < deg; ++k) c.push_back(gaussian(h));
    c.push_back(nonzero_gaussian(h));
    return Poly<QI>(std::move(c));
  }

  TriPoly form(int deg, long h = 4, int density_percent = 70) {
    TriPoly f(deg);
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        if (integer(0, 99) < density_percent) f.add_term({a, b, deg - a - b}, Elem(gaussian(h)));
    if (f.is_zero()) f.add_term({deg, 0, 0}, Elem(1));
    return f;
  }

  Mat3 unimodular(long h = 3) {
    // products of elementary matrices stay unimodular
    Mat3 m = identity3();
    for (int step = 0; step < 4; ++step) {
      Mat3 e = identity3();
      int i = static_cast<int>(integer(0, 2));
      int j = (i + 1 + static_cast<int>(integer(0, 1))) % 3;
      e[i][j] = Elem(gaussian(h));
      m = mat_mul(m, e);
    }
    return m;
  }

  Mat3 invertible(long h = 4) {
    while (true) {
      Mat3 m;
      for (auto& row : m)
        for (auto& v : row) v = Elem(gaussian(h));
      if (!det3(m).is_zero()) return m;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace caustic::testing
