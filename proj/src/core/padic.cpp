#include "core/padic.hpp"

#include <cctype>

namespace fuglede {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotPrime: return "NotPrime";
    case ErrorCode::EmptySet: return "EmptySet";
    case ErrorCode::NotVanishing: return "NotVanishing";
    case ErrorCode::NotIndicator: return "NotIndicator";
    case ErrorCode::ConstructionFailed: return "ConstructionFailed";
    case ErrorCode::ScopeTooLarge: return "ScopeTooLarge";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NotASpectrumEvidence: return "NotASpectrumEvidence";
    case ErrorCode::NonRepresentable: return "NonRepresentable";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

namespace {

constexpr std::int64_t kMaxPrime = std::int64_t{1} << 20;

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t floor_mod(const BigInt& a, std::int64_t m) {
  BigInt r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

}  // namespace

PrimeContext::PrimeContext(std::int64_t p) : p_(p) {
  if (p > kMaxPrime || !is_prime(p)) {
    fail(ErrorCode::NotPrime, "p = " + std::to_string(p) + " is not a supported prime");
  }
}

void require_same_context(const PrimeContext& a, const PrimeContext& b) {
  if (a != b) {
    fail(ErrorCode::InvalidArgument, "mismatched primes " + std::to_string(a.p()) +
                                         " and " + std::to_string(b.p()));
  }
}

std::int64_t ipow(std::int64_t p, std::int64_t e) {
  if (e < 0) fail(ErrorCode::InvalidArgument, "negative exponent in ipow");
  constexpr std::int64_t kLimit = std::int64_t{1} << 62;
  std::int64_t r = 1;
  for (std::int64_t i = 0; i < e; ++i) {
    if (r > kLimit / p) {
      fail(ErrorCode::Overflow, std::to_string(p) + "^" + std::to_string(e) +
                                    " exceeds the 62-bit exponent range");
    }
    r *= p;
  }
  return r;
}

Rational rational_pow(std::int64_t p, std::int64_t e) {
  BigInt q = boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(e < 0 ? -e : e));
  return e < 0 ? Rational(BigInt(1), q) : Rational(q);
}

std::int64_t valuation(const BigInt& n, std::int64_t p) {
  if (n == 0) return kInfiniteValuation;
  BigInt m = n;
  std::int64_t v = 0;
  while (m % p == 0) {
    m /= p;
    ++v;
  }
  return v;
}

std::int64_t valuation(const Rational& x, std::int64_t p) {
  if (x == 0) return kInfiniteValuation;
  return valuation(numerator(x), p) - valuation(denominator(x), p);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = ((a % m) + m) % m, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t q = old_r / r;
    std::int64_t t = old_r - q * r;
    old_r = r;
    r = t;
    t = old_s - q * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) fail(ErrorCode::InvalidArgument, "value is not invertible modulo " + std::to_string(m));
  return ((old_s % m) + m) % m;
}

std::int64_t residue_mod(const Rational& x, std::int64_t p, std::int64_t k) {
  const BigInt& den = denominator(x);
  if (den % p == 0) fail(ErrorCode::InvalidArgument, format_rational(x) + " is not in Z_p");
  std::int64_t m = ipow(p, k);
  if (m == 1) return 0;
  std::int64_t a = floor_mod(numerator(x), m);
  std::int64_t b = inverse_mod(floor_mod(den, m), m);
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

Rational parse_rational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto parse_int = [&](std::string_view s) {
    s = trim(s);
    std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (s.size() == start) fail(ErrorCode::Parse, "empty integer in rational '" + std::string(text) + "'");
    for (std::size_t i = start; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        fail(ErrorCode::Parse, "bad character at position " + std::to_string(i) + " in '" +
                                   std::string(text) + "'");
      }
    }
    std::string digits(s.substr(s[0] == '+' ? 1 : 0));
    return BigInt(digits);
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt num = parse_int(text.substr(0, slash));
  BigInt den = parse_int(text.substr(slash + 1));
  if (den == 0) fail(ErrorCode::Parse, "zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

std::string format_rational(const Rational& x) {
  return numerator(x).str() + "/" + denominator(x).str();
}

PAdicScalar operator+(const PAdicScalar& a, const PAdicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  return {a.ctx_, a.value_ + b.value_};
}

PAdicScalar operator-(const PAdicScalar& a, const PAdicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  return {a.ctx_, a.value_ - b.value_};
}

PAdicScalar operator*(const PAdicScalar& a, const PAdicScalar& b) {
  require_same_context(a.ctx_, b.ctx_);
  return {a.ctx_, a.value_ * b.value_};
}

std::int64_t valuation(const PAdicScalar& x) { return valuation(x.value(), x.p()); }

Rational abs_p(const PAdicScalar& x) {
  std::int64_t v = valuation(x);
  if (v == kInfiniteValuation) return Rational(0);
  return rational_pow(x.p(), -v);
}

Rational frac_part(const PAdicScalar& x) {
  const std::int64_t p = x.p();
  Rational rest = x.value();
  Rational result = 0;
  for (std::int64_t v = valuation(rest, p); v < 0 && v != kInfiniteValuation;
       v = valuation(rest, p)) {
    Rational place = rational_pow(p, v);
    std::int64_t digit = residue_mod(rest / place, p, 1);
    result += digit * place;
    rest -= digit * place;
  }
  return result;
}

RootOfUnity::RootOfUnity(PrimeContext ctx, std::int64_t order_exp, std::int64_t numerator)
    : ctx_(ctx), order_exp_(order_exp), numerator_(0) {
  if (order_exp < 0) fail(ErrorCode::InvalidArgument, "negative root-of-unity order");
  const std::int64_t modulus = ipow(ctx.p(), order_exp);
  std::int64_t k = ((numerator % modulus) + modulus) % modulus;
  while (order_exp_ > 0 && k % ctx.p() == 0) {
    k /= ctx.p();
    --order_exp_;
  }
  if (k == 0) order_exp_ = 0;
  numerator_ = k;
}

RootOfUnity RootOfUnity::from_fraction(PrimeContext ctx, const Rational& q) {
  const BigInt& den = denominator(q);
  std::int64_t n = valuation(den, ctx.p());
  if (boost::multiprecision::pow(BigInt(ctx.p()), static_cast<unsigned>(n)) != den) {
    fail(ErrorCode::InvalidArgument, "denominator of " + format_rational(q) + " is not a power of p");
  }
  std::int64_t modulus = ipow(ctx.p(), n);
  return {ctx, n, floor_mod(boost::multiprecision::numerator(q), modulus)};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& other) const {
  require_same_context(ctx_, other.ctx_);
  std::int64_t n = std::max(order_exp_, other.order_exp_);
  std::int64_t modulus = ipow(ctx_.p(), n);
  auto lift = [&](const RootOfUnity& r) {
    return static_cast<__int128>(r.numerator_) * ipow(ctx_.p(), n - r.order_exp_);
  };
  return {ctx_, n, static_cast<std::int64_t>((lift(*this) + lift(other)) % modulus)};
}

RootOfUnity RootOfUnity::inverse() const { return {ctx_, order_exp_, -numerator_}; }

RootOfUnity character(const PAdicScalar& xi, const PAdicScalar& x) {
  return RootOfUnity::from_fraction(xi.context(), frac_part(xi * x));
}

Ball::Ball(PrimeContext ctx, std::int64_t v, std::int64_t M, std::int64_t c)
    : ctx_(ctx), v_(v), M_(M), c_(c) {
  if (M < 0) fail(ErrorCode::InvalidArgument, "ball depth M must be nonnegative");
  if (c < 0 || c >= ipow(ctx.p(), M)) {
    fail(ErrorCode::InvalidArgument, "ball digit c = " + std::to_string(c) + " outside [0, p^M)");
  }
  if (c_ == 0) {
    v_ += M_;
    M_ = 0;
  }
  while (M_ > 0 && c_ % ctx.p() == 0) {
    c_ /= ctx.p();
    ++v_;
    --M_;
  }
}

PAdicScalar Ball::center() const {
  return {ctx_, Rational(c_) * rational_pow(ctx_.p(), v_)};
}

Rational Ball::measure() const { return rational_pow(ctx_.p(), -(v_ + M_)); }

Ball ball_around_zero(PrimeContext ctx, std::int64_t radius_exp) {
  return {ctx, -radius_exp, 0, 0};
}

const char* ball_relation_name(BallRelation r) noexcept {
  switch (r) {
    case BallRelation::Equal: return "Equal";
    case BallRelation::FirstContainsSecond: return "FirstContainsSecond";
    case BallRelation::SecondContainsFirst: return "SecondContainsFirst";
    case BallRelation::Disjoint: return "Disjoint";
  }
  return "Unknown";
}

bool ball_member(const PAdicScalar& x, const Ball& b) {
  require_same_context(x.context(), b.context());
  std::int64_t v = valuation(x - b.center());
  return v == kInfiniteValuation || v >= b.v() + b.M();
}

BallRelation ball_relation(const Ball& a, const Ball& b) {
  require_same_context(a.context(), b.context());
  if (a.radius_exp() == b.radius_exp()) {
    return ball_member(b.center(), a) ? BallRelation::Equal : BallRelation::Disjoint;
  }
  if (a.radius_exp() > b.radius_exp()) {
    return ball_member(b.center(), a) ? BallRelation::FirstContainsSecond : BallRelation::Disjoint;
  }
  return ball_member(a.center(), b) ? BallRelation::SecondContainsFirst : BallRelation::Disjoint;
}

}  // namespace fuglede
