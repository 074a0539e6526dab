#include "pitgen/field.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace pitgen {

// Deterministic Miller-Rabin; the first twelve prime bases cover all of u64.
bool is_prime(u64 n) {
  if (n < 2) return false;
  static constexpr u64 bases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : bases)
    if (n % q == 0) return n == q;
  u64 d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  for (u64 a : bases) {
    u64 x = 1, b = a, e = d;
    for (; e; e >>= 1, b = mulmod(b, b, n))
      if (e & 1) x = mulmod(x, b, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mulmod(x, x, n);
      composite = x != n - 1;
    }
    if (composite) return false;
  }
  return true;
}

u64 smallest_prime_at_least(u64 b) {
  if (b <= 2) return 2;
  for (u64 c = b;; ++c)
    if (is_prime(c)) return c;
}

int floor_lg(u64 x) {
  if (x == 0) throw PreconditionError("floor_lg(0)");
  return 63 - __builtin_clzll(x);
}

int ceil_lg(u64 x) {
  if (x == 0) throw PreconditionError("ceil_lg(0)");
  return x == 1 ? 0 : floor_lg(x - 1) + 1;
}

u64 mulmod(u64 a, u64 b, u64 p) {
  return static_cast<u64>(static_cast<unsigned __int128>(a) * b % p);
}

u64 addmod(u64 a, u64 b, u64 p) { return a >= p - b ? a - (p - b) : a + b; }

u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

namespace {

u64 reduce_literal(u64 lit, u64 p) {
  i64 s = static_cast<i64>(lit);
  if (s >= 0) return static_cast<u64>(s) % p;
  u64 m = static_cast<u64>(-(s + 1)) % p;  // -(s+1) avoids overflow at INT64_MIN
  return submod(submod(0, m, p), 1 % p, p);
}

u64 common_modulus(const Felt& a, const Felt& b) {
  if (a.bound() && b.bound() && a.modulus() != b.modulus())
    throw FieldMismatch("elements of F_" + std::to_string(a.modulus()) + " and F_" +
                        std::to_string(b.modulus()));
  return a.bound() ? a.modulus() : b.modulus();
}

i64 lit(const Felt& a) { return static_cast<i64>(a.value()); }

}  // namespace

Felt Felt::in(u64 p) const {
  if (p_ == p) return *this;
  if (p_) throw FieldMismatch("rebinding an element to a different field");
  return raw(reduce_literal(v_, p), p);
}

Felt Felt::operator-() const {
  if (!p_) return Felt(0) - *this;
  return raw(v_ ? p_ - v_ : 0, p_);
}

Felt operator+(const Felt& a, const Felt& b) {
  u64 p = common_modulus(a, b);
  if (!p) {
    Felt r;
    r.v_ = static_cast<u64>(lit(a) + lit(b));
    return r;
  }
  return Felt::raw(addmod(a.in(p).v_, b.in(p).v_, p), p);
}

Felt operator-(const Felt& a, const Felt& b) {
  u64 p = common_modulus(a, b);
  if (!p) {
    Felt r;
    r.v_ = static_cast<u64>(lit(a) - lit(b));
    return r;
  }
  return Felt::raw(submod(a.in(p).v_, b.in(p).v_, p), p);
}

Felt operator*(const Felt& a, const Felt& b) {
  u64 p = common_modulus(a, b);
  if (!p) {
    Felt r;
    r.v_ = static_cast<u64>(lit(a) * lit(b));
    return r;
  }
  return Felt::raw(mulmod(a.in(p).v_, b.in(p).v_, p), p);
}

Felt operator/(const Felt& a, const Felt& b) {
  u64 p = common_modulus(a, b);
  if (b.is_zero()) throw DivisionByZero("division by zero");
  if (!p) {
    if (lit(a) % lit(b) != 0) throw PreconditionError("inexact division of unbound literals");
    Felt r;
    r.v_ = static_cast<u64>(lit(a) / lit(b));
    return r;
  }
  return a.in(p) * b.in(p).inverse();
}

bool operator==(const Felt& a, const Felt& b) {
  u64 p = common_modulus(a, b);
  if (!p) return a.v_ == b.v_;
  return a.in(p).v_ == b.in(p).v_;
}

Felt Felt::inverse() const {
  if (is_zero()) throw DivisionByZero("inverse of zero");
  if (!p_) {
    if (lit(*this) == 1 || lit(*this) == -1) return *this;
    throw PreconditionError("inverse of an unbound literal");
  }
  // extended Euclid on (v, p), tracking the coefficient of v
  i64 t0 = 0, t1 = 1;
  u64 r0 = p_, r1 = v_;
  while (r1) {
    u64 q = r0 / r1;
    u64 r2 = r0 - q * r1;
    r0 = r1;
    r1 = r2;
    // coefficients stay below p in magnitude; 128-bit keeps q*t1 safe
    __int128 t2 = static_cast<__int128>(t0) - static_cast<__int128>(q) * t1;
    t0 = t1;
    t1 = static_cast<i64>(t2);
  }
  if (r0 != 1) throw DivisionByZero("element not invertible");
  i64 m = t0 % static_cast<i64>(p_);
  if (m < 0) m += static_cast<i64>(p_);
  return raw(static_cast<u64>(m), p_);
}

Felt Felt::pow(u64 e) const {
  if (!p_) {
    i64 base = lit(*this), acc = 1;
    for (u64 i = 0; i < e; ++i) acc *= base;
    Felt r;
    r.v_ = static_cast<u64>(acc);
    return r;
  }
  u64 acc = 1 % p_, base = v_;
  while (e) {
    if (e & 1) acc = mulmod(acc, base, p_);
    base = mulmod(base, base, p_);
    e >>= 1;
  }
  return raw(acc, p_);
}

std::ostream& operator<<(std::ostream& os, const Felt& x) {
  if (x.bound()) return os << x.value();
  return os << static_cast<i64>(x.value());
}

Field::Field(u64 p) : p_(p) {
  if (!is_prime(p)) throw PrimalityError(std::to_string(p) + " is not prime");
}

Felt Field::operator()(i64 v) const {
  return Felt::raw(reduce_literal(static_cast<u64>(v), p_), p_);
}

Felt Field::constant(u64 i) const {
  if (i >= p_)
    throw FieldTooSmall("F_" + std::to_string(p_) + " has no constant #" + std::to_string(i));
  return Felt::raw(i, p_);
}

Field make_field(u64 p) { return Field(p); }

u64 Rng::below(u64 n) {
  if (n == 0) throw PreconditionError("Rng::below(0)");
  u64 limit = ~u64{0} - (~u64{0} % n);
  for (;;) {
    u64 x = eng_();
    if (x < limit) return x % n;
  }
}

Felt primitive_root(const Field& f) {
  u64 p = f.p();
  if (p == 2) return f.one();
  std::vector<u64> primes;
  u64 m = p - 1;
  for (u64 q = 2; q <= m / q; ++q) {
    if (m % q == 0) {
      primes.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) primes.push_back(m);
  for (u64 g = 2; g < p; ++g) {
    Felt x = f.from_u64(g);
    bool ok = true;
    for (u64 q : primes)
      if (x.pow((p - 1) / q).is_one()) {
        ok = false;
        break;
      }
    if (ok) return x;
  }
  throw PreconditionError("no primitive root");  // unreachable for prime p
}

}  // namespace pitgen
