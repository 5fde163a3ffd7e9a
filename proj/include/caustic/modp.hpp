#pragma once

// Arithmetic modulo a prime p = 1 mod 4 below 2^62, with i sent to a square
// root of -1. The active prime is per thread and set by FpScope.

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "caustic/polynomial.hpp"

namespace caustic {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p);

struct ModPrime {
  std::uint64_t p = 0;
  std::uint64_t sqrt_minus_one = 0;
};

/// Random prime p = 1 mod 4 in [2^61, 2^62) together with sqrt(-1).
ModPrime random_mod_prime(std::mt19937_64& rng);
/// Image of a Gaussian rational; nullopt if p divides a denominator.
std::optional<std::uint64_t> reduce_qi(const QI& q, const ModPrime& mp);

class Fp {
 public:
  Fp() = default;
  Fp(long k);  // NOLINT(google-explicit-constructor)
  static Fp raw(std::uint64_t v) {
    Fp a;
    a.v_ = v;
    return a;
  }
  static std::uint64_t modulus();

  std::uint64_t value() const { return v_; }
  bool is_zero() const { return v_ == 0; }
  /// Throws std::domain_error on zero.
  Fp inverse() const;

  Fp& operator+=(const Fp& o);
  Fp& operator-=(const Fp& o);
  Fp& operator*=(const Fp& o);
  friend Fp operator+(Fp a, const Fp& b) { return a += b; }
  friend Fp operator-(Fp a, const Fp& b) { return a -= b; }
  friend Fp operator*(Fp a, const Fp& b) { return a *= b; }
  Fp operator-() const { return raw(v_ == 0 ? 0 : modulus() - v_); }
  friend bool operator==(const Fp& a, const Fp& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Fp& a, const Fp& b) { return a.v_ != b.v_; }

 private:
  std::uint64_t v_ = 0;
};

inline bool is_zero(const Fp& a) { return a.is_zero(); }
inline Fp exact_div(const Fp& a, const Fp& b) { return a * b.inverse(); }
inline Fp field_inverse(const Fp& a) { return a.inverse(); }

/// Makes mp the active prime for Fp on this thread until destruction.
class FpScope {
 public:
  explicit FpScope(const ModPrime& mp);
  ~FpScope();
  FpScope(const FpScope&) = delete;
  FpScope& operator=(const FpScope&) = delete;

 private:
  std::uint64_t saved_;
};

/// Distinct roots in F_p of a nonzero polynomial.
std::vector<Fp> roots_mod_p(const Poly<Fp>& f, std::mt19937_64& rng);

}  // namespace caustic
