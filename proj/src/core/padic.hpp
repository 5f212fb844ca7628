#pragma once

// Exact arithmetic on p-adic rationals: valuations, fractional parts,
// additive characters and canonical balls.

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "core/errors.hpp"

namespace fuglede {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Valuation of zero.
inline constexpr std::int64_t kInfiniteValuation =
    std::numeric_limits<std::int64_t>::max();

/// A validated prime p. Construction throws ErrorCode::NotPrime for
/// composite or out-of-range values.
class PrimeContext {
 public:
  explicit PrimeContext(std::int64_t p);

  std::int64_t p() const noexcept { return p_; }

  friend bool operator==(const PrimeContext&, const PrimeContext&) = default;

 private:
  std::int64_t p_;
};

void require_same_context(const PrimeContext& a, const PrimeContext& b);

/// p^e as a checked 64-bit integer (e >= 0). Throws Overflow past 2^62.
std::int64_t ipow(std::int64_t p, std::int64_t e);

/// p^e as an exact rational, any sign of e.
Rational rational_pow(std::int64_t p, std::int64_t e);

/// v_p of an integer or rational; kInfiniteValuation for zero.
std::int64_t valuation(const BigInt& n, std::int64_t p);
std::int64_t valuation(const Rational& x, std::int64_t p);

/// x mod p^k for x in Z_p (denominator prime to p), result in [0, p^k).
std::int64_t residue_mod(const Rational& x, std::int64_t p, std::int64_t k);

/// Modular inverse of a unit modulo m (m > 1).
std::int64_t inverse_mod(std::int64_t a, std::int64_t m);

/// Parses "a/b" or "a" into a reduced rational; throws Parse.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& x);

class PAdicScalar {
 public:
  PAdicScalar(PrimeContext ctx, Rational value)
      : ctx_(ctx), value_(std::move(value)) {}
  PAdicScalar(PrimeContext ctx, std::int64_t value)
      : ctx_(ctx), value_(value) {}

  const PrimeContext& context() const noexcept { return ctx_; }
  const Rational& value() const noexcept { return value_; }
  std::int64_t p() const noexcept { return ctx_.p(); }

  PAdicScalar operator-() const { return {ctx_, -value_}; }
  friend PAdicScalar operator+(const PAdicScalar& a, const PAdicScalar& b);
  friend PAdicScalar operator-(const PAdicScalar& a, const PAdicScalar& b);
  friend PAdicScalar operator*(const PAdicScalar& a, const PAdicScalar& b);
  friend bool operator==(const PAdicScalar& a, const PAdicScalar& b) {
    return a.ctx_ == b.ctx_ && a.value_ == b.value_;
  }

 private:
  PrimeContext ctx_;
  Rational value_;
};

std::int64_t valuation(const PAdicScalar& x);

/// |x|_p = p^{-v_p(x)}, exactly; zero for x = 0.
Rational abs_p(const PAdicScalar& x);

/// Fractional part {x}: the negative-power tail of the Hensel expansion,
/// extracted digit by digit. Result lies in [0, 1) with denominator
/// p^{max(0, -v_p(x))}.
Rational frac_part(const PAdicScalar& x);

/// e^{2 pi i k / p^n} in canonical form: n = 0 and k = 0, or p does not
/// divide k.
class RootOfUnity {
 public:
  RootOfUnity(PrimeContext ctx, std::int64_t order_exp, std::int64_t numerator);

  static RootOfUnity identity(PrimeContext ctx) { return {ctx, 0, 0}; }
  /// The root e^{2 pi i q} for a rational q with p-power denominator.
  static RootOfUnity from_fraction(PrimeContext ctx, const Rational& q);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t order_exp() const noexcept { return order_exp_; }
  std::int64_t numerator() const noexcept { return numerator_; }
  bool is_identity() const noexcept { return order_exp_ == 0; }

  RootOfUnity operator*(const RootOfUnity& other) const;
  RootOfUnity inverse() const;

  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;

 private:
  PrimeContext ctx_;
  std::int64_t order_exp_;
  std::int64_t numerator_;
};

/// chi_xi(x) = chi(xi x) = e^{2 pi i {xi x}}.
RootOfUnity character(const PAdicScalar& xi, const PAdicScalar& x);

/// p^v (c + p^M Z_p), the ball of radius p^{-(v+M)} around p^v c.
class Ball {
 public:
  /// Validates 0 <= c < p^M and rewrites to the canonical (minimal M) form.
  Ball(PrimeContext ctx, std::int64_t v, std::int64_t M, std::int64_t c);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t v() const noexcept { return v_; }
  std::int64_t M() const noexcept { return M_; }
  std::int64_t c() const noexcept { return c_; }

  /// Exponent r with radius p^r, i.e. r = -(v + M).
  std::int64_t radius_exp() const noexcept { return -(v_ + M_); }
  PAdicScalar center() const;
  Rational measure() const;

  friend bool operator==(const Ball&, const Ball&) = default;

 private:
  PrimeContext ctx_;
  std::int64_t v_;
  std::int64_t M_;
  std::int64_t c_;
};

/// B(0, p^r) = p^{-r} Z_p.
Ball ball_around_zero(PrimeContext ctx, std::int64_t radius_exp);

enum class BallRelation { Equal, FirstContainsSecond, SecondContainsFirst, Disjoint };

const char* ball_relation_name(BallRelation r) noexcept;

bool ball_member(const PAdicScalar& x, const Ball& b);
BallRelation ball_relation(const Ball& a, const Ball& b);

}  // namespace fuglede
