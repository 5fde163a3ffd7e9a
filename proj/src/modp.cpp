#include "caustic/modp.hpp"

#include <gmpxx.h>

#include <stdexcept>

namespace caustic {

namespace {

thread_local std::uint64_t active_prime = 0;

using PF = Poly<Fp>;

PF mul_mod(const PF& a, const PF& b, const PF& m) { return divrem(a * b, m).second; }

// x^e mod m, where x = base.
PF pow_mod(PF base, std::uint64_t e, const PF& m) {
  PF r(Fp(1));
  base = divrem(base, m).second;
  for (; e; e >>= 1) {
    if (e & 1) r = mul_mod(r, base, m);
    base = mul_mod(base, base, m);
  }
  return r;
}

void split_roots(const PF& g, std::mt19937_64& rng, std::vector<Fp>& out) {
  if (g.degree() < 1) return;
  if (g.degree() == 1) {
    out.push_back(-(g[0] * g[1].inverse()));
    return;
  }
  const std::uint64_t p = Fp::modulus();
  std::uniform_int_distribution<std::uint64_t> dist(0, p - 1);
  while (true) {
    PF shift({Fp::raw(dist(rng)), Fp(1)});
    PF h = pow_mod(shift, (p - 1) / 2, g) - PF(Fp(1));
    PF d = gcd(g, h);
    if (d.degree() < 1 || d.degree() == g.degree()) continue;
    split_roots(d, rng, out);
    split_roots(div_exact_field(g, d), rng, out);
    return;
  }
}

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a, p))
    if (e & 1) r = mulmod(r, a, p);
  return r;
}

ModPrime random_mod_prime(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(1ULL << 61, (1ULL << 62) - 1);
  mpz_class n(static_cast<unsigned long>(dist(rng)));
  while (true) {
    mpz_nextprime(n.get_mpz_t(), n.get_mpz_t());
    if (mpz_fdiv_ui(n.get_mpz_t(), 4) == 1) break;
  }
  ModPrime mp;
  mp.p = n.get_ui();
  for (std::uint64_t c = 2;; ++c) {
    // c is a non-residue exactly when c^((p-1)/2) = -1
    if (powmod(c, (mp.p - 1) / 2, mp.p) == mp.p - 1) {
      mp.sqrt_minus_one = powmod(c, (mp.p - 1) / 4, mp.p);
      return mp;
    }
  }
}

std::optional<std::uint64_t> reduce_qi(const QI& q, const ModPrime& mp) {
  auto part = [&](const mpq_class& r) -> std::optional<std::uint64_t> {
    std::uint64_t den = mpz_fdiv_ui(r.get_den_mpz_t(), mp.p);
    if (den == 0) return std::nullopt;
    std::uint64_t num = mpz_fdiv_ui(r.get_num_mpz_t(), mp.p);
    return mulmod(num, powmod(den, mp.p - 2, mp.p), mp.p);
  };
  auto re = part(q.re()), im = part(q.im());
  if (!re || !im) return std::nullopt;
  return (*re + mulmod(*im, mp.sqrt_minus_one, mp.p)) % mp.p;
}

Fp::Fp(long k) {
  const std::uint64_t p = modulus();
  long r = k % static_cast<long>(p);
  v_ = static_cast<std::uint64_t>(r < 0 ? r + static_cast<long>(p) : r);
}

std::uint64_t Fp::modulus() {
  if (active_prime == 0) throw std::logic_error("no active prime for Fp");
  return active_prime;
}

Fp Fp::inverse() const {
  if (v_ == 0) throw std::domain_error("inverse of zero modulo p");
  return raw(powmod(v_, modulus() - 2, modulus()));
}

Fp& Fp::operator+=(const Fp& o) {
  const std::uint64_t p = modulus();
  v_ = v_ >= p - o.v_ ? v_ - (p - o.v_) : v_ + o.v_;
  return *this;
}

Fp& Fp::operator-=(const Fp& o) {
  const std::uint64_t p = modulus();
  v_ = v_ >= o.v_ ? v_ - o.v_ : v_ + (p - o.v_);
  return *this;
}

Fp& Fp::operator*=(const Fp& o) {
  v_ = mulmod(v_, o.v_, modulus());
  return *this;
}

FpScope::FpScope(const ModPrime& mp) : saved_(active_prime) { active_prime = mp.p; }

FpScope::~FpScope() { active_prime = saved_; }

std::vector<Fp> roots_mod_p(const Poly<Fp>& f, std::mt19937_64& rng) {
  if (f.is_zero()) throw std::domain_error("roots of the zero polynomial");
  std::vector<Fp> out;
  if (f.degree() < 1) return out;
  PF m = make_monic(f);
  PF x({Fp(0), Fp(1)});
  PF g = gcd(m, pow_mod(x, Fp::modulus(), m) - x);
  split_roots(make_monic(g), rng, out);
  return out;
}

}  // namespace caustic
