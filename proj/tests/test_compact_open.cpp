#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "core/compact_open.hpp"
#include "oracles.hpp"

using namespace fuglede;

namespace {

std::complex<long double> numeric(const ScaledCyclotomic& f) {
  std::map<std::int64_t, long long> coeffs;
  for (const auto& [j, a] : f.sum.coeffs()) coeffs[j] = static_cast<long long>(a);
  return oracle::evaluate(coeffs, f.sum.context().p(), f.sum.order_exp()) *
         static_cast<long double>(oracle::rational_power(f.sum.context().p(), f.power));
}

std::vector<std::int64_t> subset(std::uint64_t mask) { return oracle::members(mask); }

/// m(Omega ∩ (Omega + xi)) for Omega ⊂ Z_p and xi ∈ Z_p by counting residues mod p^R.
Rational sampled_autocorrelation(std::int64_t p, std::int64_t M, const std::vector<std::int64_t>& digits,
                                 const Rational& xi, std::int64_t R) {
  std::int64_t hits = 0;
  const std::int64_t cells = oracle::power(p, R);
  for (std::int64_t j = 0; j < cells; ++j) {
    if (oracle::member(j, p, 0, M, digits) && oracle::member(Rational(j) - xi, p, 0, M, digits)) ++hits;
  }
  return Rational(hits, cells);
}

CompactOpenSet random_set(std::mt19937_64& rng, std::int64_t p) {
  const std::int64_t M = 1 + static_cast<std::int64_t>(rng() % 4);
  const std::int64_t v = static_cast<std::int64_t>(rng() % 5) - 2;
  std::vector<std::int64_t> digits;
  for (std::int64_t c = 0; c < ipow(p, M); ++c) {
    if (rng() % 3 == 0) digits.push_back(c);
  }
  if (digits.empty()) digits.push_back(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(ipow(p, M))));
  return CompactOpenSet::from_frame(PrimeContext(p), v, M, digits);
}

}  // namespace

TEST_CASE("canonical frames") {
  const PrimeContext p2(2), p3(3);
  auto zp = CompactOpenSet::from_frame(p2, 0, 1, {0, 1});
  CHECK(zp.v() == 0);
  CHECK(zp.M() == 0);
  CHECK(zp.digits() == std::vector<std::int64_t>{0});
  auto even = CompactOpenSet::from_frame(p2, 0, 3, {0, 2, 4, 6});
  CHECK(even == CompactOpenSet::from_frame(p2, 1, 0, {0}));
  auto mixed = CompactOpenSet::from_frame(p3, 0, 2, {3, 4, 6, 7, 0, 1});
  CHECK(mixed.M() == 1);
  CHECK(mixed.digits() == std::vector<std::int64_t>{0, 1});
  CHECK(is_canonical_frame(p2, 0, 2, std::vector<std::int64_t>{0, 3}));
  CHECK_FALSE(is_canonical_frame(p2, 0, 2, std::vector<std::int64_t>{0, 2}));
  CHECK_THROWS_AS(CompactOpenSet::from_frame(p2, 0, 2, {}), Error);
  CHECK_THROWS_AS(CompactOpenSet::from_frame(p2, 0, 2, {4}), Error);
}

TEST_CASE("normalize_set examples") {
  const PrimeContext p2(2), p3(3);
  std::vector<Ball> zp{Ball(p3, 0, 0, 0)};
  CHECK(normalize_set(zp) == CompactOpenSet::from_frame(p3, 0, 0, {0}));

  std::vector<Ball> halves{Ball(p2, 0, 1, 0), Ball(p2, 0, 1, 1)};
  auto merged = normalize_set(halves);
  CHECK(merged.v() == 0);
  CHECK(merged.M() == 0);

  std::vector<Ball> two{Ball(p2, 0, 2, 0), Ball(p2, 0, 2, 1)};
  auto s = normalize_set(two);
  CHECK(s.v() == 0);
  CHECK(s.M() == 2);
  CHECK(s.digits() == std::vector<std::int64_t>{0, 1});
  for (std::int64_t j = -40; j < 40; ++j) {
    const Rational x(j, 3);
    bool expected = oracle::member(x, 2, 0, 2, {0}) || oracle::member(x, 2, 0, 2, {1});
    CHECK(s.contains(PAdicScalar(p2, x)) == expected);
  }

  std::vector<Ball> none;
  CHECK_THROWS_AS(normalize_set(none), Error);
}

TEST_CASE("normalize_set is idempotent and preserves membership") {
  std::mt19937_64 rng(12);
  for (std::int64_t p : {2, 3}) {
    const PrimeContext ctx(p);
    for (int t = 0; t < 60; ++t) {
      std::vector<Ball> balls;
      for (int k = 0; k < 1 + static_cast<int>(rng() % 4); ++k) {
        std::int64_t M = static_cast<std::int64_t>(rng() % 3);
        balls.emplace_back(ctx, static_cast<std::int64_t>(rng() % 4) - 2, M,
                           static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(ipow(p, M))));
      }
      CompactOpenSet s = normalize_set(balls);
      auto again = s.balls();
      CHECK(normalize_set(again) == s);
      for (int i = 0; i < 200; ++i) {
        PAdicScalar x(ctx, Rational(static_cast<std::int64_t>(rng() % 2000) - 1000, 1) * rational_pow(p, -3) /
                               (p == 2 ? 3 : 2));
        bool expected = false;
        for (const auto& b : balls) expected |= ball_member(x, b);
        CHECK(s.contains(x) == expected);
      }
    }
  }
}

TEST_CASE("measure examples") {
  CHECK(measure(CompactOpenSet::from_frame(PrimeContext(5), 0, 0, {0})) == 1);
  CHECK(measure(CompactOpenSet::from_frame(PrimeContext(2), 0, 2, {0, 3})) == Rational(1, 2));
  CHECK(measure(CompactOpenSet::from_frame(PrimeContext(3), -1, 1, {1})) == 1);
}

TEST_CASE("fourier transform examples") {
  const PrimeContext p2(2), p3(3);
  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  auto at_zero = indicator_fourier(omega, PAdicScalar(p2, 0));
  CHECK(at_zero.as_rational() == Rational(1, 2));

  auto zp = CompactOpenSet::from_frame(p3, 0, 0, {0});
  CHECK(indicator_fourier(zp, PAdicScalar(p3, Rational(1, 3))).is_zero_value());
  CHECK(indicator_fourier(zp, PAdicScalar(p3, Rational(2, 3))).is_zero_value());

  auto f = indicator_fourier(omega, PAdicScalar(p2, Rational(1, 4)));
  CHECK_FALSE(f.is_zero_value());
  auto quad = oracle::fourier_quadrature(2, 0, 2, {0, 3}, Rational(1, 4), 6);
  CHECK(std::abs(numeric(f) - quad) < 1e-9);
  auto closed = (oracle::chi(0, 2) + oracle::chi(Rational(-3, 4), 2)) * 0.25L;
  CHECK(std::abs(numeric(f) - closed) < 1e-12);
}

TEST_CASE("fourier transform matches quadrature and vanishes beyond the support") {
  std::mt19937_64 rng(21);
  for (std::int64_t p : {2, 3}) {
    for (int t = 0; t < 25; ++t) {
      CompactOpenSet omega = random_set(rng, p);
      const std::int64_t s = omega.v() + omega.M();
      for (int i = 0; i < 6; ++i) {
        const std::int64_t e = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(s + 3 - omega.v())) ;
        Rational xi = Rational(static_cast<std::int64_t>(rng() % 50)) * rational_pow(p, -(omega.v() + e));
        xi /= (p == 2 ? 3 : 5);
        auto f = indicator_fourier(omega, PAdicScalar(omega.context(), xi));
        auto quad = oracle::fourier_quadrature(p, omega.v(), omega.M(), omega.digits(), xi, omega.M() + 3);
        if (xi == 0 || valuation(xi, p) >= -s) {
          CHECK(std::abs(numeric(f) - quad) < 1e-9);
        } else {
          CHECK(f.is_zero_value());
        }
      }
    }
  }
}

TEST_CASE("plancherel at zero, exhaustively for p = 2, M <= 3") {
  const PrimeContext p2(2);
  for (std::int64_t M = 0; M <= 3; ++M) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ipow(2, M)); ++mask) {
      auto omega = CompactOpenSet::from_frame(p2, 0, M, subset(mask));
      CHECK(indicator_fourier(omega, PAdicScalar(p2, 0)).as_rational() == measure(omega));
      CHECK(autocorrelation(omega, PAdicScalar(p2, 0)) == measure(omega));
    }
  }
}

TEST_CASE("autocorrelation examples") {
  const PrimeContext p2(2), p3(3);
  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  CHECK(autocorrelation(omega, PAdicScalar(p2, 0)) == Rational(1, 2));
  CHECK(autocorrelation(omega, PAdicScalar(p2, Rational(1, 2))) == 0);
  CHECK(autocorrelation(omega, PAdicScalar(p2, 3)) == Rational(1, 4));
  CHECK(sampled_autocorrelation(2, 2, {0, 3}, 3, 6) == Rational(1, 4));
  auto tri = CompactOpenSet::from_frame(p3, 0, 2, {0, 1, 5});
  CHECK(autocorrelation(tri, PAdicScalar(p3, Rational(1, 9))) == 0);
}

TEST_CASE("autocorrelation agrees with sampling and is symmetric") {
  std::mt19937_64 rng(31);
  for (std::int64_t p : {2, 3}) {
    const PrimeContext ctx(p);
    for (int t = 0; t < 30; ++t) {
      const std::int64_t M = 1 + static_cast<std::int64_t>(rng() % 3);
      std::vector<std::int64_t> digits;
      for (std::int64_t c = 0; c < ipow(p, M); ++c) {
        if (rng() % 2) digits.push_back(c);
      }
      if (digits.empty()) digits.push_back(0);
      auto omega = CompactOpenSet::from_frame(ctx, 0, M, digits);
      for (int i = 0; i < 6; ++i) {
        Rational xi(static_cast<std::int64_t>(rng() % 200) - 100);
        CHECK(autocorrelation(omega, PAdicScalar(ctx, xi)) == sampled_autocorrelation(p, M, digits, xi, M + 1));
        CHECK(autocorrelation(omega, PAdicScalar(ctx, xi)) == autocorrelation(omega, PAdicScalar(ctx, -xi)));
      }
    }
  }
}

TEST_CASE("autocorrelation is the inverse transform of |1_Omega^|^2 on the dual grid") {
  const PrimeContext p2(2);
  for (std::int64_t M = 1; M <= 3; ++M) {
    const std::int64_t m = ipow(2, M);
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      auto omega = CompactOpenSet::from_frame(p2, 0, M, subset(mask));
      // Work in the frame (0, M): eta_j = j / 2^M, transform values p^{-M} S_j.
      std::vector<CyclotomicSum> squares;
      for (std::int64_t j = 0; j < m; ++j) {
        CyclotomicSum s(p2, M);
        for (auto c : subset(mask)) s.add_root(character(PAdicScalar(p2, Rational(j, m)), PAdicScalar(p2, -c)));
        squares.push_back(s * conjugate(s));
      }
      for (std::int64_t i = 0; i < m; ++i) {
        CyclotomicSum total(p2, M);
        for (std::int64_t j = 0; j < m; ++j) {
          CyclotomicSum term = squares[static_cast<std::size_t>(j)];
          term = term * CyclotomicSum::from_root(character(PAdicScalar(p2, Rational(j, m)), PAdicScalar(p2, i)));
          total += term;
        }
        auto value = as_integer(total);
        REQUIRE(value.has_value());
        // m(Omega ∩ (Omega + i)) = p^{-2M} * total: the cells of the dual grid have measure 1.
        CHECK(Rational(*value) * rational_pow(2, -2 * M) == autocorrelation(omega, PAdicScalar(p2, i)));
      }
    }
  }
}

TEST_CASE("local constancy parameter examples") {
  const PrimeContext p2(2), p3(3);
  CHECK(local_constancy_parameter(CompactOpenSet::from_frame(p3, 0, 0, {0})) == 0);
  CHECK(local_constancy_parameter(CompactOpenSet::from_frame(p3, 2, 0, {0})) == 2);
  auto outer = CompactOpenSet::from_frame(p2, -1, 1, {1});
  CHECK(local_constancy_parameter(outer) == -1);
  CHECK(support_exponent(outer) == 1);
  // Grid test: the transform is constant on cosets of p^{-l} Z_p with l = -1.
  for (std::int64_t j = 0; j < 16; ++j) {
    PAdicScalar xi(p2, Rational(j, 8));
    auto base = indicator_fourier(outer, xi);
    for (std::int64_t k = 0; k < 8; ++k) {
      auto shifted = indicator_fourier(outer, xi + PAdicScalar(p2, 2 * k));
      CHECK(equal_values(base, shifted));
    }
  }
  CHECK_FALSE(equal_values(indicator_fourier(outer, PAdicScalar(p2, 0)), indicator_fourier(outer, PAdicScalar(p2, 1))));
}

TEST_CASE("transform is locally constant at the stated scale") {
  std::mt19937_64 rng(55);
  for (std::int64_t p : {2, 3}) {
    for (int t = 0; t < 40; ++t) {
      CompactOpenSet omega = random_set(rng, p);
      const std::int64_t l = local_constancy_parameter(omega);
      for (int i = 0; i < 8; ++i) {
        PAdicScalar xi(omega.context(), Rational(static_cast<std::int64_t>(rng() % 300), 7) *
                                            rational_pow(p, -(omega.v() + omega.M() + 1)));
        PAdicScalar u(omega.context(), Rational(static_cast<std::int64_t>(rng() % 300) + 1, 11) * rational_pow(p, -l));
        CHECK(equal_values(indicator_fourier(omega, xi), indicator_fourier(omega, xi + u)));
      }
    }
  }
}

TEST_CASE("digit tree examples") {
  const PrimeContext p2(2), p3(3);
  auto full = digit_tree(p3, 1, std::vector<std::int64_t>{0, 1, 2});
  CHECK(full.child_counts[0] == std::vector<std::int64_t>{3});
  auto t = digit_tree(p2, 2, std::vector<std::int64_t>{0, 3});
  CHECK(t.vertices[0] == std::vector<std::int64_t>{0, 1});
  CHECK(t.child_counts[0] == std::vector<std::int64_t>{2});
  CHECK(t.child_counts[1] == std::vector<std::int64_t>{1, 1});
  CHECK(t.leaf_count() == 2);
  auto path = digit_tree(p3, 3, std::vector<std::int64_t>{17});
  for (const auto& level : path.child_counts) CHECK(level == std::vector<std::int64_t>{1});
}

TEST_CASE("homogeneity examples") {
  const PrimeContext p2(2), p3(3);
  auto full = is_p_homogeneous(digit_tree(p2, 3, std::vector<std::int64_t>{0, 1, 2, 3, 4, 5, 6, 7}));
  CHECK(full.homogeneous);
  CHECK(full.branching_levels == std::vector<std::int64_t>{0, 1, 2});
  auto h = is_p_homogeneous(CompactOpenSet::from_frame(p2, 0, 2, {0, 3}));
  CHECK(h.homogeneous);
  CHECK(h.branching_levels == std::vector<std::int64_t>{0});
  CHECK_FALSE(is_p_homogeneous(CompactOpenSet::from_frame(p3, 0, 2, {0, 1, 3})).homogeneous);
}

TEST_CASE("homogeneous digit sets have p^|I| elements") {
  for (std::int64_t p : {2, 3}) {
    const PrimeContext ctx(p);
    const std::int64_t max_m = p == 2 ? 4 : 2;
    for (std::int64_t M = 1; M <= max_m; ++M) {
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ipow(p, M)); ++mask) {
        auto digits = subset(mask);
        auto h = is_p_homogeneous(digit_tree(ctx, M, digits));
        if (h.homogeneous) {
          CHECK(static_cast<std::int64_t>(digits.size()) == ipow(p, static_cast<std::int64_t>(h.branching_levels.size())));
        }
      }
    }
  }
}
