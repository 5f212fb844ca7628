#include "core/cyclotomic.hpp"

#include <algorithm>

namespace fuglede {

namespace {

std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
}

}  // namespace

CyclotomicSum::CyclotomicSum(PrimeContext ctx, std::int64_t order_exp)
    : ctx_(ctx), order_exp_(order_exp), modulus_(0) {
  if (order_exp < 0) fail(ErrorCode::InvalidArgument, "negative cyclotomic order");
  modulus_ = ipow(ctx.p(), order_exp);
}

CyclotomicSum::CyclotomicSum(PrimeContext ctx, std::int64_t order_exp, const Coefficients& coeffs)
    : CyclotomicSum(ctx, order_exp) {
  for (const auto& [j, a] : coeffs) add_term(j, a);
}

CyclotomicSum CyclotomicSum::constant(PrimeContext ctx, const BigInt& value) {
  CyclotomicSum s(ctx, 0);
  s.add_term(0, value);
  return s;
}

CyclotomicSum CyclotomicSum::from_root(const RootOfUnity& root, const BigInt& coeff) {
  CyclotomicSum s(root.context(), root.order_exp());
  s.add_term(root.numerator(), coeff);
  return s;
}

void CyclotomicSum::add_term(std::int64_t exponent, const BigInt& coeff) {
  if (coeff == 0) return;
  std::int64_t j = ((exponent % modulus_) + modulus_) % modulus_;
  auto [it, inserted] = coeffs_.try_emplace(j, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) coeffs_.erase(it);
  }
}

void CyclotomicSum::add_root(const RootOfUnity& root, const BigInt& coeff) {
  require_same_context(ctx_, root.context());
  if (root.order_exp() > order_exp_) *this = lifted(root.order_exp());
  add_term(root.numerator() * ipow(ctx_.p(), order_exp_ - root.order_exp()), coeff);
}

CyclotomicSum CyclotomicSum::lifted(std::int64_t order_exp) const {
  if (order_exp < order_exp_) fail(ErrorCode::InvalidArgument, "cannot lift to a lower order");
  CyclotomicSum out(ctx_, order_exp);
  const std::int64_t step = ipow(ctx_.p(), order_exp - order_exp_);
  for (const auto& [j, a] : coeffs_) out.coeffs_.emplace_hint(out.coeffs_.end(), j * step, a);
  return out;
}

CyclotomicSum& CyclotomicSum::operator+=(const CyclotomicSum& other) {
  require_same_context(ctx_, other.ctx_);
  if (other.order_exp_ > order_exp_) *this = lifted(other.order_exp_);
  const std::int64_t step = ipow(ctx_.p(), order_exp_ - other.order_exp_);
  for (const auto& [j, a] : other.coeffs_) add_term(j * step, a);
  return *this;
}

CyclotomicSum& CyclotomicSum::operator-=(const CyclotomicSum& other) {
  require_same_context(ctx_, other.ctx_);
  if (other.order_exp_ > order_exp_) *this = lifted(other.order_exp_);
  const std::int64_t step = ipow(ctx_.p(), order_exp_ - other.order_exp_);
  for (const auto& [j, a] : other.coeffs_) add_term(j * step, -a);
  return *this;
}

CyclotomicSum& CyclotomicSum::operator*=(const BigInt& factor) {
  if (factor == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& [j, a] : coeffs_) a *= factor;
  return *this;
}

CyclotomicSum operator*(const CyclotomicSum& a, const CyclotomicSum& b) {
  require_same_context(a.ctx_, b.ctx_);
  const std::int64_t n = std::max(a.order_exp_, b.order_exp_);
  CyclotomicSum x = a.lifted(n);
  CyclotomicSum y = b.lifted(n);
  CyclotomicSum out(a.ctx_, n);
  for (const auto& [i, ai] : x.coeffs_) {
    for (const auto& [j, bj] : y.coeffs_) out.add_term((i + j) % out.modulus_, ai * bj);
  }
  return out;
}

CyclotomicSum normalize(const CyclotomicSum& s) {
  const std::int64_t p = s.context().p();
  std::int64_t n = s.order_exp();
  std::int64_t divisor = 1;
  while (n > 0) {
    bool all_divisible = std::all_of(s.coeffs().begin(), s.coeffs().end(), [&](const auto& kv) {
      return (kv.first / divisor) % p == 0;
    });
    if (!all_divisible) break;
    divisor *= p;
    --n;
  }
  if (n == s.order_exp()) return s;
  CyclotomicSum out(s.context(), n);
  for (const auto& [j, a] : s.coeffs()) out.add_term(j / divisor, a);
  return out;
}

bool is_zero(const CyclotomicSum& raw) {
  CyclotomicSum s = normalize(raw);
  if (s.order_exp() == 0) return s.has_no_terms();
  const std::int64_t p = s.context().p();
  const std::int64_t coset_step = s.modulus() / p;
  // Every residue class mod p^{n-1} must be absent or fully present with one
  // common coefficient.
  std::map<std::int64_t, std::pair<std::int64_t, const BigInt*>> classes;
  for (const auto& [j, a] : s.coeffs()) {
    auto [it, inserted] = classes.try_emplace(j % coset_step, 1, &a);
    if (!inserted) {
      if (*it->second.second != a) return false;
      ++it->second.first;
    }
  }
  return std::all_of(classes.begin(), classes.end(),
                     [&](const auto& kv) { return kv.second.first == p; });
}

CyclotomicSum canonical_form(const CyclotomicSum& raw) {
  CyclotomicSum s = normalize(raw);
  if (s.order_exp() == 0) return s;
  const std::int64_t p = s.context().p();
  const std::int64_t coset_step = s.modulus() / p;
  const std::int64_t top = (p - 1) * coset_step;
  CyclotomicSum out(s.context(), s.order_exp());
  for (const auto& [j, a] : s.coeffs()) {
    if (j < top) {
      out.add_term(j, a);
    } else {
      // omega^{r + (p-1)q} = -sum_{t < p-1} omega^{r + t q}
      std::int64_t r = j - top;
      for (std::int64_t t = 0; t + 1 < p; ++t) out.add_term(r + t * coset_step, -a);
    }
  }
  return normalize(out);
}

bool equal_values(const CyclotomicSum& a, const CyclotomicSum& b) { return is_zero(a - b); }

std::optional<BigInt> as_integer(const CyclotomicSum& s) {
  CyclotomicSum c = canonical_form(s);
  if (c.order_exp() != 0) return std::nullopt;
  if (c.has_no_terms()) return BigInt(0);
  return c.coeffs().begin()->second;
}

CyclotomicSum scale_exponents(const CyclotomicSum& s, std::int64_t u) {
  const std::int64_t p = s.context().p();
  if (u % p == 0) {
    fail(ErrorCode::InvalidArgument, "scale factor " + std::to_string(u) + " is divisible by p");
  }
  const std::int64_t m = s.modulus();
  const std::int64_t unit = ((u % m) + m) % m;
  CyclotomicSum out(s.context(), s.order_exp());
  for (const auto& [j, a] : s.coeffs()) out.add_term(mulmod(j, unit, m), a);
  return out;
}

CyclotomicSum conjugate(const CyclotomicSum& s) { return scale_exponents(s, -1); }

std::vector<std::vector<std::int64_t>> decompose_vanishing(const CyclotomicSum& s) {
  for (const auto& [j, a] : s.coeffs()) {
    if (a != 1) fail(ErrorCode::NotIndicator, "coefficient of exponent " + std::to_string(j) + " is not 1");
  }
  if (!is_zero(s)) fail(ErrorCode::NotVanishing, "sum of roots of unity does not vanish");
  std::vector<std::vector<std::int64_t>> blocks;
  if (s.has_no_terms()) return blocks;
  const std::int64_t coset_step = s.modulus() / s.context().p();
  std::map<std::int64_t, std::vector<std::int64_t>> by_residue;
  for (const auto& [j, a] : s.coeffs()) by_residue[j % coset_step].push_back(j);
  for (auto& [r, block] : by_residue) blocks.push_back(std::move(block));
  return blocks;
}

CyclotomicSum character_sum(const PAdicScalar& xi, std::span<const PAdicScalar> points) {
  CyclotomicSum sum(xi.context());
  for (const auto& c : points) sum.add_root(character(xi, c));
  return sum;
}

std::vector<std::int64_t> vanishing_level_set(std::span<const PAdicScalar> points,
                                              std::span<const std::int64_t> levels) {
  if (points.empty()) fail(ErrorCode::InvalidArgument, "vanishing_level_set needs a nonempty set");
  const PrimeContext& ctx = points.front().context();
  std::vector<std::int64_t> out;
  for (std::int64_t i : levels) {
    PAdicScalar xi(ctx, rational_pow(ctx.p(), i));
    if (is_zero(character_sum(xi, points))) out.push_back(i);
  }
  return out;
}

}  // namespace fuglede
