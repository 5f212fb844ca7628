#pragma once

// Integer combinations of p^n-th roots of unity with an exact zero test.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "core/padic.hpp"

namespace fuglede {

/// sum_j a_j * omega^j with omega = e^{2 pi i / p^n}. Exponents live in
/// [0, p^n); zero coefficients are never stored.
class CyclotomicSum {
 public:
  using Coefficients = std::map<std::int64_t, BigInt>;

  explicit CyclotomicSum(PrimeContext ctx, std::int64_t order_exp = 0);
  CyclotomicSum(PrimeContext ctx, std::int64_t order_exp, const Coefficients& coeffs);

  static CyclotomicSum constant(PrimeContext ctx, const BigInt& value);
  static CyclotomicSum from_root(const RootOfUnity& root, const BigInt& coeff = 1);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t order_exp() const noexcept { return order_exp_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  const Coefficients& coeffs() const noexcept { return coeffs_; }
  bool has_no_terms() const noexcept { return coeffs_.empty(); }

  /// Adds coeff * omega^exponent at the current order.
  void add_term(std::int64_t exponent, const BigInt& coeff);
  /// Adds coeff * root, raising the order first if the root needs it.
  void add_root(const RootOfUnity& root, const BigInt& coeff = 1);

  /// Same value written at a higher order (order_exp >= current).
  CyclotomicSum lifted(std::int64_t order_exp) const;

  CyclotomicSum& operator+=(const CyclotomicSum& other);
  CyclotomicSum& operator-=(const CyclotomicSum& other);
  CyclotomicSum& operator*=(const BigInt& factor);
  friend CyclotomicSum operator+(CyclotomicSum a, const CyclotomicSum& b) { return a += b; }
  friend CyclotomicSum operator-(CyclotomicSum a, const CyclotomicSum& b) { return a -= b; }
  friend CyclotomicSum operator*(const CyclotomicSum& a, const CyclotomicSum& b);

  /// Structural equality of the stored representation (not of values; use
  /// equal_values for that).
  friend bool operator==(const CyclotomicSum&, const CyclotomicSum&) = default;

 private:
  PrimeContext ctx_;
  std::int64_t order_exp_;
  std::int64_t modulus_;
  Coefficients coeffs_;
};

/// Rewrites to the minimal order: n = 0, or some exponent is prime to p.
CyclotomicSum normalize(const CyclotomicSum& s);

/// Exact zero test: after normalization, the coefficient vector is constant
/// on every coset i + p^{n-1}{0, ..., p-1}.
bool is_zero(const CyclotomicSum& s);

/// Unique representative of the value: coefficients expressed in the basis
/// omega^j, j < (p-1) p^{n-1}, at the minimal order.
CyclotomicSum canonical_form(const CyclotomicSum& s);

bool equal_values(const CyclotomicSum& a, const CyclotomicSum& b);

/// The value as an integer, if it is one.
std::optional<BigInt> as_integer(const CyclotomicSum& s);

/// j -> u j mod p^n. Requires gcd(u, p) = 1; u = -1 is complex conjugation.
CyclotomicSum scale_exponents(const CyclotomicSum& s, std::int64_t u);
CyclotomicSum conjugate(const CyclotomicSum& s);

/// Splits a vanishing 0/1 sum into blocks {r + t p^{n-1} : t < p}.
/// Throws NotIndicator or NotVanishing when the preconditions fail.
std::vector<std::vector<std::int64_t>> decompose_vanishing(const CyclotomicSum& s);

/// Levels i for which sum_{c in C} chi(p^i c) vanishes.
std::vector<std::int64_t> vanishing_level_set(std::span<const PAdicScalar> points,
                                              std::span<const std::int64_t> levels);

/// sum_{c in C} chi(xi c).
CyclotomicSum character_sum(const PAdicScalar& xi, std::span<const PAdicScalar> points);

}  // namespace fuglede
