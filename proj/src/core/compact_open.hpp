#pragma once

// Compact open subsets of Q_p in a single frame: a finite union of balls of
// equal radius p^v (c + p^M Z_p).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "core/cyclotomic.hpp"
#include "core/padic.hpp"

namespace fuglede {

class CompactOpenSet {
 public:
  /// Builds the set p^v (digits + p^M Z_p) and rewrites it to canonical
  /// form (minimal M, then maximal v). Throws EmptySet or InvalidArgument.
  static CompactOpenSet from_frame(PrimeContext ctx, std::int64_t v, std::int64_t M,
                                   std::vector<std::int64_t> digits);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t p() const noexcept { return ctx_.p(); }
  std::int64_t v() const noexcept { return v_; }
  std::int64_t M() const noexcept { return M_; }
  const std::vector<std::int64_t>& digits() const noexcept { return digits_; }

  /// Radius exponent of the constituent balls, -(v + M).
  std::int64_t cell_radius_exp() const noexcept { return -(v_ + M_); }

  std::vector<Ball> balls() const;
  bool contains(const PAdicScalar& x) const;

  /// Digits of the same set written in a finer frame (v', M') with v' <= v
  /// and v' + M' >= v + M.
  std::vector<std::int64_t> digits_in_frame(std::int64_t v, std::int64_t M) const;

  friend bool operator==(const CompactOpenSet&, const CompactOpenSet&) = default;

 private:
  CompactOpenSet(PrimeContext ctx, std::int64_t v, std::int64_t M, std::vector<std::int64_t> digits)
      : ctx_(ctx), v_(v), M_(M), digits_(std::move(digits)) {}

  PrimeContext ctx_;
  std::int64_t v_;
  std::int64_t M_;
  std::vector<std::int64_t> digits_;
};

/// True when (v, M, digits) is already in canonical form.
bool is_canonical_frame(PrimeContext ctx, std::int64_t v, std::int64_t M,
                        std::span<const std::int64_t> digits);

/// Union of arbitrary balls, refined to the finest radius and canonicalized.
CompactOpenSet normalize_set(std::span<const Ball> balls);

Rational measure(const CompactOpenSet& omega);

/// p^power * sum. The zero value is stored as power 0 with an empty sum.
struct ScaledCyclotomic {
  std::int64_t power;
  CyclotomicSum sum;

  bool is_zero_value() const { return fuglede::is_zero(sum); }
  std::optional<Rational> as_rational() const;
};

bool equal_values(const ScaledCyclotomic& a, const ScaledCyclotomic& b);

/// Exact Fourier transform of the indicator of omega at xi.
ScaledCyclotomic indicator_fourier(const CompactOpenSet& omega, const PAdicScalar& xi);

/// m(omega ∩ (omega + xi)).
Rational autocorrelation(const CompactOpenSet& omega, const PAdicScalar& xi);

/// l such that the transform of 1_omega is invariant under shifts |u|_p <= p^l.
std::int64_t local_constancy_parameter(const CompactOpenSet& omega);

/// Smallest n with omega ⊂ B(0, p^n).
std::int64_t support_exponent(const CompactOpenSet& omega);

/// Residue tree of a digit set: vertices at level i are the residues of the
/// digits mod p^{i+1}; child_counts[i][k] is the number of level-i children
/// of the k-th level-(i-1) vertex (the root for i = 0).
struct DigitTree {
  std::int64_t p;
  std::int64_t depth;
  std::vector<std::vector<std::int64_t>> vertices;
  std::vector<std::vector<std::int64_t>> child_counts;

  std::size_t leaf_count() const { return depth == 0 ? 1 : vertices.back().size(); }
};

DigitTree digit_tree(PrimeContext ctx, std::int64_t M, std::span<const std::int64_t> digits);
DigitTree digit_tree(const CompactOpenSet& omega);

struct Homogeneity {
  bool homogeneous;
  std::vector<std::int64_t> branching_levels;
};

Homogeneity is_p_homogeneous(const DigitTree& tree);
Homogeneity is_p_homogeneous(const CompactOpenSet& omega);

}  // namespace fuglede
