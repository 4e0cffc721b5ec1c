#include "coendo/field.hpp"

#include <stdexcept>

namespace coendo {

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

FieldSpec FieldSpec::prime(uint32_t p) {
  if (!is_prime(p) || p >= (1u << 31))
    throw std::invalid_argument("field characteristic " + std::to_string(p) +
                                " is not a supported prime");
  FieldSpec s;
  s.kind = Kind::prime;
  s.p = p;
  return s;
}

std::string FieldSpec::name() const {
  return kind == Kind::rationals ? "Q" : "F" + std::to_string(p);
}

Fp::Fp(uint32_t p) : p_(p) { FieldSpec::prime(p); }

Fp::E Fp::inv(E a) const {
  if (a == 0) throw std::domain_error("inverse of zero in F_p");
  uint64_t r = 1, b = a, e = p_ - 2;
  while (e) {
    if (e & 1) r = r * b % p_;
    b = b * b % p_;
    e >>= 1;
  }
  return static_cast<E>(r);
}

Fp::E Fp::parse(const std::string& s) const {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return from_int(std::stoll(s));
    E num = from_int(std::stoll(s.substr(0, slash)));
    E den = from_int(std::stoll(s.substr(slash + 1)));
    return mul(num, inv(den));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad scalar '" + s + "' for F" +
                                std::to_string(p_));
  }
}

Qf::E Qf::inv(const E& a) const {
  if (sgn(a) == 0) throw std::domain_error("inverse of zero in Q");
  return E(1) / a;
}

Qf::E Qf::parse(const std::string& s) const {
  E r;
  if (r.set_str(s, 10) != 0)
    throw std::invalid_argument("bad rational scalar '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

}  // namespace coendo
