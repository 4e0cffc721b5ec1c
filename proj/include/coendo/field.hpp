#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace coendo {

struct FieldSpec {
  enum class Kind { rationals, prime };
  Kind kind = Kind::rationals;
  uint32_t p = 0;  // 0 iff rationals

  static FieldSpec rationals() { return {}; }
  static FieldSpec prime(uint32_t p);
  std::string name() const;
  bool operator==(const FieldSpec&) const = default;
};

bool is_prime(uint64_t n);

// Prime field F_p with p < 2^31, elements stored reduced in [0, p).
class Fp {
 public:
  using E = uint32_t;

  Fp() = default;  // placeholder for default-constructed containers; unusable
  explicit Fp(uint32_t p);
  uint32_t p() const { return p_; }
  FieldSpec spec() const { return FieldSpec::prime(p_); }

  E zero() const { return 0; }
  E one() const { return 1; }
  E from_int(long long v) const {
    long long r = v % static_cast<long long>(p_);
    return static_cast<E>(r < 0 ? r + p_ : r);
  }
  E add(E a, E b) const {
    uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  E sub(E a, E b) const { return a >= b ? a - b : a + p_ - b; }
  E neg(E a) const { return a ? p_ - a : 0; }
  E mul(E a, E b) const { return static_cast<E>(uint64_t(a) * b % p_); }
  E inv(E a) const;
  // acc += a*b
  void addmul(E& acc, E a, E b) const {
    acc = static_cast<E>((uint64_t(a) * b + acc) % p_);
  }
  // acc -= a*b
  void submul(E& acc, E a, E b) const { acc = sub(acc, mul(a, b)); }
  bool is_zero(E a) const { return a == 0; }
  bool is_one(E a) const { return a == 1; }
  bool eq(E a, E b) const { return a == b; }

  std::string str(E a) const { return std::to_string(a); }
  // Accepts "n", "-n" or "a/b".
  E parse(const std::string& s) const;
  bool operator==(const Fp& o) const { return p_ == o.p_; }

 private:
  uint32_t p_ = 0;
};

class Qf {
 public:
  using E = mpq_class;

  FieldSpec spec() const { return FieldSpec::rationals(); }
  E zero() const { return E(0); }
  E one() const { return E(1); }
  E from_int(long long v) const { return E(static_cast<long>(v)); }
  E add(const E& a, const E& b) const { return a + b; }
  E sub(const E& a, const E& b) const { return a - b; }
  E neg(const E& a) const { return -a; }
  E mul(const E& a, const E& b) const { return a * b; }
  E inv(const E& a) const;
  void addmul(E& acc, const E& a, const E& b) const { acc += a * b; }
  void submul(E& acc, const E& a, const E& b) const { acc -= a * b; }
  bool is_zero(const E& a) const { return sgn(a) == 0; }
  bool is_one(const E& a) const { return a == 1; }
  bool eq(const E& a, const E& b) const { return a == b; }

  std::string str(const E& a) const { return a.get_str(); }
  E parse(const std::string& s) const;
  bool operator==(const Qf&) const { return true; }
};

}  // namespace coendo
