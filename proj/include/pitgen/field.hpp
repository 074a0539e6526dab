#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>

#include <Eigen/Core>

#include "pitgen/errors.hpp"

namespace pitgen {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);
u64 smallest_prime_at_least(u64 b);

// floor(log2 x) for x >= 1, computed from the bit length; floor_lg(1) == 0.
int floor_lg(u64 x);
// ceil(log2 x) for x >= 1.
int ceil_lg(u64 x);

// Element of F_p.  A Felt with modulus 0 is an unbound integer literal; it
// takes the modulus of whatever bound element it meets.  This is what lets
// Eigen write Scalar(0) and Scalar(1) without knowing p.
class Felt {
 public:
  Felt() = default;
  Felt(int literal) : v_(static_cast<u64>(static_cast<i64>(literal))) {}  // NOLINT

  static Felt raw(u64 residue, u64 p) {
    Felt f;
    f.v_ = residue;
    f.p_ = p;
    return f;
  }

  u64 value() const { return v_; }
  u64 modulus() const { return p_; }
  bool bound() const { return p_ != 0; }
  bool is_zero() const { return v_ == 0; }
  bool is_one() const { return p_ ? v_ == 1 : static_cast<i64>(v_) == 1; }

  // The same value as an element of F_p.
  Felt in(u64 p) const;

  Felt operator-() const;
  Felt& operator+=(const Felt& o) { return *this = *this + o; }
  Felt& operator-=(const Felt& o) { return *this = *this - o; }
  Felt& operator*=(const Felt& o) { return *this = *this * o; }
  Felt& operator/=(const Felt& o) { return *this = *this / o; }

  friend Felt operator+(const Felt& a, const Felt& b);
  friend Felt operator-(const Felt& a, const Felt& b);
  friend Felt operator*(const Felt& a, const Felt& b);
  friend Felt operator/(const Felt& a, const Felt& b);
  friend bool operator==(const Felt& a, const Felt& b);
  friend bool operator!=(const Felt& a, const Felt& b) { return !(a == b); }

  Felt inverse() const;
  Felt pow(u64 e) const;

 private:
  u64 v_ = 0;
  u64 p_ = 0;
};

std::ostream& operator<<(std::ostream& os, const Felt& x);

inline bool is_zero(const Felt& x) { return x.is_zero(); }
inline Felt inverse(const Felt& x) { return x.inverse(); }

class Field {
 public:
  explicit Field(u64 p);

  u64 p() const { return p_; }
  Felt operator()(i64 v) const;
  Felt from_u64(u64 v) const { return Felt::raw(v % p_, p_); }
  Felt zero() const { return Felt::raw(0, p_); }
  Felt one() const { return Felt::raw(1 % p_, p_); }
  // Element i of the fixed enumeration 0, 1, 2, ... used for the constants
  // xi_i and eta_h; i must be below p.
  Felt constant(u64 i) const;

  bool operator==(const Field& o) const { return p_ == o.p_; }
  bool operator!=(const Field& o) const { return p_ != o.p_; }

 private:
  u64 p_;
};

Field make_field(u64 p);

u64 mulmod(u64 a, u64 b, u64 p);
u64 addmod(u64 a, u64 b, u64 p);
u64 submod(u64 a, u64 b, u64 p);

// mt19937_64 with our own rejection reduction, so streams are identical on
// every standard library.
class Rng {
 public:
  explicit Rng(u64 seed) : eng_(seed) {}
  u64 next() { return eng_(); }
  u64 below(u64 n);
  Felt element(const Field& f) { return Felt::raw(below(f.p()), f.p()); }
  Felt nonzero(const Field& f) { return Felt::raw(1 + below(f.p() - 1), f.p()); }

 private:
  std::mt19937_64 eng_;
};

// Primitive root of F_p, found by search over 2, 3, ...
Felt primitive_root(const Field& f);

}  // namespace pitgen

namespace Eigen {
template <>
struct NumTraits<pitgen::Felt> : GenericNumTraits<pitgen::Felt> {
  typedef pitgen::Felt Real;
  typedef pitgen::Felt NonInteger;
  typedef pitgen::Felt Nested;
  typedef pitgen::Felt Literal;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 0,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 3,
    MulCost = 6
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  static inline Real highest() { return Real(0); }
  static inline Real lowest() { return Real(0); }
};
}  // namespace Eigen
