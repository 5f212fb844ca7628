#include "core/compact_open.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace fuglede {

namespace {

void sort_unique(std::vector<std::int64_t>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

// One canonicalization step; returns false when nothing changed.
bool reduce_once(std::int64_t p, std::int64_t& v, std::int64_t& M, std::vector<std::int64_t>& digits) {
  if (M == 0) return false;
  const std::int64_t parent_mod = ipow(p, M - 1);
  std::map<std::int64_t, std::int64_t> children;
  for (std::int64_t c : digits) ++children[c % parent_mod];
  if (std::all_of(children.begin(), children.end(), [&](const auto& kv) { return kv.second == p; })) {
    std::vector<std::int64_t> merged;
    merged.reserve(children.size());
    for (const auto& kv : children) merged.push_back(kv.first);
    digits = std::move(merged);
    --M;
    return true;
  }
  if (std::all_of(digits.begin(), digits.end(), [&](std::int64_t c) { return c % p == 0; })) {
    for (auto& c : digits) c /= p;
    ++v;
    --M;
    return true;
  }
  return false;
}

void validate_digits(std::int64_t p, std::int64_t M, std::span<const std::int64_t> digits) {
  if (M < 0) fail(ErrorCode::InvalidArgument, "frame depth M must be nonnegative");
  const std::int64_t modulus = ipow(p, M);
  for (std::int64_t c : digits) {
    if (c < 0 || c >= modulus) {
      fail(ErrorCode::InvalidArgument,
           "digit " + std::to_string(c) + " outside [0, " + std::to_string(modulus) + ")");
    }
  }
}

}  // namespace

CompactOpenSet CompactOpenSet::from_frame(PrimeContext ctx, std::int64_t v, std::int64_t M,
                                          std::vector<std::int64_t> digits) {
  if (digits.empty()) fail(ErrorCode::EmptySet, "compact open set needs at least one digit");
  validate_digits(ctx.p(), M, digits);
  sort_unique(digits);
  while (reduce_once(ctx.p(), v, M, digits)) {
  }
  return CompactOpenSet(ctx, v, M, std::move(digits));
}

bool is_canonical_frame(PrimeContext ctx, std::int64_t v, std::int64_t M,
                        std::span<const std::int64_t> digits) {
  std::vector<std::int64_t> sorted(digits.begin(), digits.end());
  sort_unique(sorted);
  if (sorted.size() != digits.size() || !std::equal(sorted.begin(), sorted.end(), digits.begin())) {
    return false;
  }
  return !reduce_once(ctx.p(), v, M, sorted);
}

std::vector<Ball> CompactOpenSet::balls() const {
  std::vector<Ball> out;
  out.reserve(digits_.size());
  for (std::int64_t c : digits_) out.emplace_back(ctx_, v_, M_, c);
  return out;
}

bool CompactOpenSet::contains(const PAdicScalar& x) const {
  require_same_context(ctx_, x.context());
  std::int64_t vx = valuation(x);
  if (vx != kInfiniteValuation && vx < v_) return false;
  std::int64_t r = residue_mod(x.value() * rational_pow(p(), -v_), p(), M_);
  return std::binary_search(digits_.begin(), digits_.end(), r);
}

std::vector<std::int64_t> CompactOpenSet::digits_in_frame(std::int64_t v, std::int64_t M) const {
  if (v > v_ || v + M < v_ + M_) {
    fail(ErrorCode::InvalidArgument, "target frame is coarser than the set's frame");
  }
  const std::int64_t shift = ipow(p(), v_ - v);
  const std::int64_t step = ipow(p(), v_ - v + M_);
  const std::int64_t copies = ipow(p(), v + M - v_ - M_);
  std::vector<std::int64_t> out;
  out.reserve(digits_.size() * static_cast<std::size_t>(copies));
  for (std::int64_t c : digits_) {
    for (std::int64_t t = 0; t < copies; ++t) out.push_back(c * shift + t * step);
  }
  std::sort(out.begin(), out.end());
  return out;
}

CompactOpenSet normalize_set(std::span<const Ball> balls) {
  if (balls.empty()) fail(ErrorCode::EmptySet, "normalize_set needs at least one ball");
  const PrimeContext ctx = balls.front().context();
  std::int64_t v0 = balls.front().v();
  std::int64_t finest = balls.front().v() + balls.front().M();
  for (const auto& b : balls) {
    require_same_context(ctx, b.context());
    v0 = std::min(v0, b.v());
    finest = std::max(finest, b.v() + b.M());
  }
  const std::int64_t M0 = finest - v0;
  std::set<std::int64_t> digits;
  for (const auto& b : balls) {
    const std::int64_t shift = b.v() - v0;
    const std::int64_t base = b.c() * ipow(ctx.p(), shift);
    const std::int64_t step = ipow(ctx.p(), shift + b.M());
    const std::int64_t copies = ipow(ctx.p(), M0 - shift - b.M());
    for (std::int64_t t = 0; t < copies; ++t) digits.insert(base + t * step);
  }
  return CompactOpenSet::from_frame(ctx, v0, M0, {digits.begin(), digits.end()});
}

Rational measure(const CompactOpenSet& omega) {
  return Rational(static_cast<std::int64_t>(omega.digits().size())) *
         rational_pow(omega.p(), -(omega.v() + omega.M()));
}

std::optional<Rational> ScaledCyclotomic::as_rational() const {
  auto n = as_integer(sum);
  if (!n) return std::nullopt;
  return Rational(*n) * rational_pow(sum.context().p(), power);
}

bool equal_values(const ScaledCyclotomic& a, const ScaledCyclotomic& b) {
  const std::int64_t e = std::min(a.power, b.power);
  CyclotomicSum x = a.sum;
  CyclotomicSum y = b.sum;
  x *= BigInt(ipow(x.context().p(), a.power - e));
  y *= BigInt(ipow(y.context().p(), b.power - e));
  return equal_values(x, y);
}

ScaledCyclotomic indicator_fourier(const CompactOpenSet& omega, const PAdicScalar& xi) {
  require_same_context(omega.context(), xi.context());
  const PrimeContext& ctx = omega.context();
  const std::int64_t cell = omega.v() + omega.M();
  const std::int64_t vxi = valuation(xi);
  ScaledCyclotomic zero{0, CyclotomicSum(ctx)};
  if (vxi != kInfiniteValuation && vxi < -cell) return zero;
  CyclotomicSum sum(ctx);
  const Rational scale = rational_pow(ctx.p(), omega.v());
  for (std::int64_t c : omega.digits()) {
    sum.add_root(character(xi, PAdicScalar(ctx, -scale * c)));
  }
  if (is_zero(sum)) return zero;
  return {-cell, normalize(sum)};
}

Rational autocorrelation(const CompactOpenSet& omega, const PAdicScalar& xi) {
  require_same_context(omega.context(), xi.context());
  const std::int64_t p = omega.p();
  const std::int64_t vxi = valuation(xi);
  if (vxi != kInfiniteValuation && vxi < omega.v()) return 0;
  const std::int64_t modulus = ipow(p, omega.M());
  const std::int64_t shift = residue_mod(xi.value() * rational_pow(p, -omega.v()), p, omega.M());
  const auto& d = omega.digits();
  std::int64_t overlap = 0;
  for (std::int64_t c : d) {
    if (std::binary_search(d.begin(), d.end(), (c + shift) % modulus)) ++overlap;
  }
  return Rational(overlap) * rational_pow(p, -(omega.v() + omega.M()));
}

std::int64_t support_exponent(const CompactOpenSet& omega) {
  std::int64_t n = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t c : omega.digits()) {
    std::int64_t reach = c == 0 ? -(omega.v() + omega.M())
                                : -(omega.v() + valuation(BigInt(c), omega.p()));
    n = std::max(n, reach);
  }
  return n;
}

std::int64_t local_constancy_parameter(const CompactOpenSet& omega) {
  return -support_exponent(omega);
}

DigitTree digit_tree(PrimeContext ctx, std::int64_t M, std::span<const std::int64_t> digits) {
  if (digits.empty()) fail(ErrorCode::EmptySet, "digit tree of an empty set");
  validate_digits(ctx.p(), M, digits);
  const std::int64_t p = ctx.p();
  DigitTree tree{p, M, {}, {}};
  std::vector<std::int64_t> parents{0};
  std::int64_t parent_mod = 1;
  for (std::int64_t level = 0; level < M; ++level) {
    const std::int64_t mod = parent_mod * p;
    std::vector<std::int64_t> level_vertices;
    level_vertices.reserve(digits.size());
    for (std::int64_t c : digits) level_vertices.push_back(c % mod);
    sort_unique(level_vertices);
    std::map<std::int64_t, std::int64_t> counts;
    for (std::int64_t x : level_vertices) ++counts[x % parent_mod];
    std::vector<std::int64_t> per_parent;
    per_parent.reserve(parents.size());
    for (std::int64_t parent : parents) per_parent.push_back(counts[parent]);
    tree.vertices.push_back(level_vertices);
    tree.child_counts.push_back(std::move(per_parent));
    parents = std::move(level_vertices);
    parent_mod = mod;
  }
  return tree;
}

DigitTree digit_tree(const CompactOpenSet& omega) {
  return digit_tree(omega.context(), omega.M(), omega.digits());
}

Homogeneity is_p_homogeneous(const DigitTree& tree) {
  Homogeneity result{true, {}};
  for (std::int64_t level = 0; level < tree.depth; ++level) {
    const auto& counts = tree.child_counts[static_cast<std::size_t>(level)];
    bool all_full = std::all_of(counts.begin(), counts.end(), [&](std::int64_t k) { return k == tree.p; });
    bool all_unary = std::all_of(counts.begin(), counts.end(), [](std::int64_t k) { return k == 1; });
    if (all_full) {
      result.branching_levels.push_back(level);
    } else if (!all_unary) {
      return {false, {}};
    }
  }
  return result;
}

Homogeneity is_p_homogeneous(const CompactOpenSet& omega) { return is_p_homogeneous(digit_tree(omega)); }

}  // namespace fuglede
