// Exact rational arithmetic on top of GMP.
#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "polywalk/domain.hpp"

namespace polywalk {

using Rational = mpq_class;
using BigInt = mpz_class;

/// Raised when an exact computation would exceed its size budget.
class RationalGrowthError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OracleOptions {
  /// Largest denominator, in bits, any intermediate may reach.
  std::size_t max_denominator_bits = 1'000'000;
};

/// num/den in lowest terms (the two-argument mpq_class constructor does not
/// reduce).
inline Rational frac(long num, long den) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

inline std::size_t denominator_bits(const Rational& x) {
  return mpz_sizeinbase(x.get_den_mpz_t(), 2);
}

inline void check_growth(const Rational& x, const OracleOptions& opt) {
  if (denominator_bits(x) > opt.max_denominator_bits)
    throw RationalGrowthError("rational denominator exceeded " +
                              std::to_string(opt.max_denominator_bits) + " bits");
}

inline Rational pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

inline std::string to_string(const Rational& x) { return x.get_str(); }

inline double to_double(const Rational& x) { return x.get_d(); }

/// Parses "a/b", an integer, or a plain decimal such as "0.45" (read exactly
/// as 45/100).
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw DomainError("empty rational");
  Rational out;
  const auto dot = s.find('.');
  if (dot == std::string::npos) {
    if (out.set_str(s, 10) != 0) throw DomainError("malformed rational '" + s + "'");
    if (out.get_den() == 0) throw DomainError("zero denominator in '" + s + "'");
    out.canonicalize();
    return out;
  }
  if (s.find_first_of("/eE") != std::string::npos) throw DomainError("malformed decimal '" + s + "'");
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  const std::size_t frac_len = s.size() - dot - 1;
  if (digits.empty() || digits == "-" || digits == "+") throw DomainError("malformed decimal '" + s + "'");
  if (digits.front() == '+') digits.erase(0, 1);
  BigInt num;
  if (num.set_str(digits, 10) != 0) throw DomainError("malformed decimal '" + s + "'");
  BigInt den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
  out = Rational(num, den);
  out.canonicalize();
  return out;
}

/// A probability held exactly, strictly inside (0, 1).
class RationalProb {
 public:
  explicit RationalProb(Rational value) : value_(std::move(value)) {
    value_.canonicalize();
    if (!(value_ > 0 && value_ < 1))
      throw DomainError("probability must lie strictly inside (0, 1), got " + value_.get_str());
  }
  RationalProb(long num, long den) : RationalProb(Rational(num, den)) {}

  static RationalProb parse(std::string_view text) { return RationalProb(parse_rational(text)); }

  const Rational& p() const { return value_; }
  Rational q() const { return Rational(1 - value_); }
  /// r = q/p.
  Rational odds() const { return Rational(q() / value_); }
  bool symmetric() const { return value_ == Rational(1, 2); }
  RationalProb swapped() const { return RationalProb(q()); }
  double to_double() const { return value_.get_d(); }
  std::string str() const { return value_.get_str(); }

  friend bool operator==(const RationalProb& a, const RationalProb& b) { return a.value_ == b.value_; }

 private:
  Rational value_;
};

}  // namespace polywalk
