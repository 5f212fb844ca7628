#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "core/decide.hpp"
#include "core/qp_pairs.hpp"
#include "oracles.hpp"

using namespace fuglede;

namespace {

UniformDiscreteSet integers(std::int64_t p, std::vector<std::int64_t> xs, std::int64_t window) {
  std::vector<Rational> elements(xs.begin(), xs.end());
  return {PrimeContext(p), std::move(elements), window};
}

/// {j / p^k : 0 <= j < p^k}, the representatives L truncated to B(0, p^k).
UniformDiscreteSet representatives(std::int64_t p, std::int64_t k) {
  std::vector<Rational> elements;
  for (std::int64_t j = 0; j < oracle::power(p, k); ++j) elements.emplace_back(j, oracle::power(p, k));
  return {PrimeContext(p), std::move(elements), k};
}

oracle::Complex numeric_sphere_sum(const UniformDiscreteSet& e, std::int64_t level, std::int64_t k, std::int64_t unit) {
  oracle::Complex total = 0;
  for (const auto& x : e.elements()) {
    if (x != 0 && oracle::valuation(x, e.p()) < -k) continue;
    total += oracle::chi(x * oracle::rational_power(e.p(), level) * unit, e.p());
  }
  return total;
}

}  // namespace

TEST_CASE("uniformly discrete set validation and queries") {
  const PrimeContext p2(2);
  CHECK_THROWS_AS(integers(2, {0, 0}, 0), Error);
  CHECK_THROWS_AS(UniformDiscreteSet(p2, {Rational(1, 4)}, 1), Error);
  auto e = integers(2, {0, 1, 2, 6}, 0);
  CHECK(e.separation_exponent() == 2);
  CHECK(integers(3, {5}, 0).separation_exponent() == std::nullopt);
  auto l = representatives(2, 3);
  CHECK(l.truncation(1).size() == 2);
  CHECK(l.count_in_ball(PAdicScalar(p2, Rational(1, 8)), 1) == 2);
  CHECK_THROWS_AS(l.truncation(4), Error);
  CHECK_THROWS_AS(l.count_in_ball(PAdicScalar(p2, 0), 4), Error);
}

TEST_CASE("lifts follow the stated rule") {
  const PrimeContext p2(2);
  std::vector<std::int64_t> u{0, 2};
  auto t = complement_lift(p2, u, 2);
  std::vector<Rational> expected;
  for (auto x : u) {
    for (std::int64_t j = 0; j < 4; ++j) expected.push_back(Rational(x) + Rational(j, 4));
  }
  std::sort(expected.begin(), expected.end());
  CHECK(t.elements() == expected);

  auto lam = spectrum_lift(p2, 2, u, 3);
  expected.clear();
  for (auto w : u) {
    for (std::int64_t j = 0; j < 2; ++j) expected.push_back((Rational(w) + Rational(j, 2)) / 4);
  }
  std::sort(expected.begin(), expected.end());
  CHECK(lam.elements() == expected);
  CHECK(lam.window_exp() == 3);

  // Below the frame only the witness points of the right size remain.
  auto small = spectrum_lift(p2, 2, u, 1);
  CHECK(small.elements() == std::vector<Rational>{0, Rational(1, 2)});
}

TEST_CASE("n_f examples") {
  const PrimeContext p2(2), p3(3);
  CHECK(n_f_of(CompactOpenSet::from_frame(p3, 0, 0, {0})) == 0);
  CHECK(n_f_of(CompactOpenSet::from_frame(p2, 0, 2, {0, 3})) == 2);
  for (std::int64_t k = 0; k <= 4; ++k) CHECK(n_f_of(CompactOpenSet::from_frame(p3, k, 0, {0})) == k);
}

TEST_CASE("n_f is the first level with positive autocorrelation on the whole ball") {
  for (std::int64_t M = 1; M <= 3; ++M) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << ipow(2, M)); ++mask) {
      auto omega = CompactOpenSet::from_frame(PrimeContext(2), 0, M, oracle::members(mask));
      const std::int64_t n = n_f_of(omega);
      auto positive_on = [&](std::int64_t level) {
        for (std::int64_t j = 0; j < 64; ++j) {
          if (autocorrelation(omega, PAdicScalar(omega.context(), Rational(j) * rational_pow(2, level))) == 0) {
            return false;
          }
        }
        return true;
      };
      CHECK(positive_on(n));
      if (n > omega.v()) CHECK_FALSE(positive_on(n - 1));
    }
  }
}

TEST_CASE("zero sphere scan examples") {
  auto single = integers(5, {0}, 0);
  for (auto [level, status] : zero_sphere_scan(single, -4, 4, {0, 0})) CHECK(status == SphereStatus::NotInZeroSet);

  auto digits = integers(3, {0, 1, 2}, 0);
  CHECK(sphere_status(digits, -1, {0, 0}) == SphereStatus::InZeroSet);

  auto e = integers(2, {0, 3}, 0);
  for (std::int64_t level : {-1, -2}) {
    const bool oracle_zero = std::abs(numeric_sphere_sum(e, level, 0, 1)) < 1e-12;
    CHECK((sphere_status(e, level, {0, 0}) == SphereStatus::InZeroSet) == oracle_zero);
  }
  CHECK(sphere_status(e, -1, {0, 0}) == SphereStatus::InZeroSet);
  CHECK(sphere_status(e, -2, {0, 0}) == SphereStatus::NotInZeroSet);

  CHECK_THROWS_AS(sphere_status(e, -1, {0, 1}), Error);
  CHECK_THROWS_AS(sphere_status(e, -1, {0, 0}, 2), Error);
}

TEST_CASE("mixed truncation evidence") {
  UniformDiscreteSet e(PrimeContext(2), {0, Rational(1, 2), Rational(1, 4)}, 2);
  CHECK(sphere_status(e, 0, {1, 2}) == SphereStatus::Mixed);
}

TEST_CASE("zero bound examples") {
  auto a = integers(2, {0, 1}, 0);
  CHECK(a.separation_exponent() == 0);
  for (std::int64_t level = -5; level <= -2; ++level) CHECK(sphere_status(a, level, {0, 0}) == SphereStatus::NotInZeroSet);
  CHECK(zero_bound_check(a));
  auto b = integers(3, {0, 3}, 0);
  CHECK(b.separation_exponent() == 1);
  CHECK(zero_bound_check(b));
  CHECK(zero_bound_check(integers(2, {5}, 0)));
}

TEST_CASE("sphere membership is invariant under unit multiples and zero sets are bounded") {
  std::mt19937_64 rng(77);
  for (std::int64_t p : {2, 3, 5}) {
    const PrimeContext ctx(p);
    for (int t = 0; t < 30; ++t) {
      const std::int64_t window = static_cast<std::int64_t>(rng() % 3);
      std::set<Rational> pts;
      const std::int64_t span = ipow(p, window + 2);
      for (int i = 0; i < 1 + static_cast<int>(rng() % 8); ++i) {
        pts.insert(Rational(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(span)), ipow(p, window)));
      }
      UniformDiscreteSet e(ctx, std::vector<Rational>(pts.begin(), pts.end()), window);
      const TruncationRange range{first_occupied_truncation(e), window};
      for (std::int64_t level = -window - 4; level <= 2; ++level) {
        SphereStatus base = sphere_status(e, level, range);
        for (int k = 0; k < 5; ++k) {
          std::int64_t u = 1 + static_cast<std::int64_t>(rng() % 200);
          if (u % p == 0) ++u;
          CHECK(sphere_status(e, level, range, u) == base);
          for (std::int64_t trunc = range.lo; trunc <= range.hi; ++trunc) {
            const bool zero = std::abs(numeric_sphere_sum(e, level, trunc, u)) < 1e-9;
            if (base == SphereStatus::InZeroSet) CHECK(zero);
            if (base == SphereStatus::NotInZeroSet) CHECK_FALSE(zero);
          }
        }
      }
      CHECK(zero_bound_check(e));
    }
  }
}

TEST_CASE("density examples") {
  const PrimeContext p3(3), p2(2);
  auto digits = integers(3, {0, 1, 2}, 0);
  auto rows = density(digits, PAdicScalar(p3, 0), 0, 0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].second == 3);

  std::vector<std::int64_t> block;
  for (std::int64_t i = 0; i < 27; ++i) block.push_back(i);
  auto window = integers(3, block, 3);
  CHECK(density(window, PAdicScalar(p3, 0), 3, 3)[0].second == 1);

  std::vector<std::int64_t> w{0, 2};
  auto lam = spectrum_lift(p2, 2, w, 4);
  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  const std::int64_t nf = n_f_of(omega);
  for (const auto& [k, ratio] : density(lam, PAdicScalar(p2, 0), nf, 4)) CHECK(ratio == measure(omega));
  CHECK_THROWS_AS(density(lam, PAdicScalar(p2, 0), 0, 5), Error);
}

TEST_CASE("uniformity examples") {
  const PrimeContext p2(2);
  auto full = representatives(2, 3);
  std::vector<PAdicScalar> probes;
  for (std::int64_t j = 0; j < 8; ++j) probes.emplace_back(p2, Rational(j, 8));
  CHECK(uniformity_check(full, 1, probes));

  std::vector<std::int64_t> w{0, 2};
  auto lam = spectrum_lift(p2, 2, w, 4);
  for (const auto& x : probes) CHECK(lam.count_in_ball(x, 2) == 2);
  CHECK(uniformity_check(lam, 2, probes));

  auto e = integers(2, {0, 1}, 0);
  std::vector<PAdicScalar> two{{p2, 0}, {p2, 1}};
  CHECK_FALSE(uniformity_check(e, -2, two));
  auto gap = integers(2, {0, 2}, 0);
  CHECK_FALSE(uniformity_check(gap, -1, two));
}

TEST_CASE("tiling pair examples") {
  const PrimeContext p2(2), p3(3);
  auto zp = CompactOpenSet::from_frame(p3, 0, 0, {0});
  CHECK(verify_tiling_pair(zp, representatives(3, 2), 2).verified());

  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  std::vector<std::int64_t> u{0, 2};
  auto report = verify_tiling_pair(omega, complement_lift(p2, u, 3), 3);
  CHECK(report.verified());
  CHECK(report.checked_points == 32);

  std::vector<Rational> broken(representatives(2, 2).elements());
  broken.push_back(2);
  auto bad = verify_tiling_pair(CompactOpenSet::from_frame(p2, 0, 0, {0}), UniformDiscreteSet(p2, broken, 2), 2);
  CHECK_FALSE(bad.verified());
  REQUIRE(bad.failure.has_value());
  CHECK(bad.failure->lhs.as_rational() == 2);
  CHECK(bad.failure->rhs == 1);

  CHECK_THROWS_AS(verify_tiling_pair(omega, complement_lift(p2, u, 1), 3), Error);
  CHECK_THROWS_AS(verify_tiling_pair(omega, complement_lift(p2, u, 3), -3), Error);
}

TEST_CASE("spectral pair examples") {
  const PrimeContext p2(2), p3(3);
  auto zp = CompactOpenSet::from_frame(p3, 0, 0, {0});
  CHECK(verify_spectral_pair(zp, representatives(3, 2), 2).verified());

  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  std::vector<std::int64_t> w{0, 2};
  auto lam = spectrum_lift(p2, 2, w, 3);
  CHECK(verify_spectral_pair(omega, lam, 3).verified());

  std::vector<Rational> missing(lam.elements());
  missing.erase(missing.begin() + 1);
  auto bad = verify_spectral_pair(omega, UniformDiscreteSet(p2, missing, 3), 3);
  CHECK_FALSE(bad.verified());
  REQUIRE(bad.failure.has_value());
  auto lhs = bad.failure->lhs.as_rational();
  REQUIRE(lhs.has_value());
  CHECK(*lhs < bad.failure->rhs);
  CHECK(bad.failure->rhs == Rational(1, 4));

  std::vector<std::int64_t> not_spectrum{0, 1};
  CHECK_FALSE(verify_spectral_pair(omega, spectrum_lift(p2, 2, not_spectrum, 3), 3).verified());
  CHECK_THROWS_AS(verify_spectral_pair(omega, lam, 4), Error);
}

TEST_CASE("spectrum to tiling examples") {
  const PrimeContext p2(2), p3(3);
  auto zp = CompactOpenSet::from_frame(p3, 0, 0, {0});
  auto trivial = spectrum_to_tiling_complement(zp, representatives(3, 3));
  CHECK(trivial.n_f == 0);
  CHECK(trivial.free_levels.empty());
  CHECK(trivial.complement == std::vector<std::int64_t>{0});
  CHECK(trivial.report.verified());

  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  std::vector<std::int64_t> w{0, 2};
  auto built = spectrum_to_tiling_complement(omega, spectrum_lift(p2, 2, w, 3));
  CHECK(built.n_f == 2);
  CHECK(built.branching_levels.size() + built.free_levels.size() == 2);
  CHECK(built.complement.size() == 2);
  CHECK(built.report.verified());
  auto witness = complement_from_homogeneity(DigitSet(p2, 2, {0, 3}), std::vector<std::int64_t>{0});
  CHECK(built.complement == witness.elements);

  auto ball = CompactOpenSet::from_frame(p3, 1, 0, {0});
  std::vector<std::int64_t> origin{0};
  auto from_ball = spectrum_to_tiling_complement(ball, spectrum_lift(p3, 1, origin, 3));
  CHECK(from_ball.n_f == 1);
  CHECK(from_ball.complement.size() == 3);
  CHECK(from_ball.report.verified());
}

TEST_CASE("spectrum to tiling rejects non-spectra") {
  const PrimeContext p2(2);
  auto even = CompactOpenSet::from_frame(p2, 1, 0, {0});
  UniformDiscreteSet mixed(p2, {0, Rational(1, 2), Rational(1, 4)}, 2);
  try {
    spectrum_to_tiling_complement(even, mixed, 2);
    FAIL("expected NotASpectrumEvidence");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotASpectrumEvidence);
  }

  auto omega = CompactOpenSet::from_frame(p2, 0, 2, {0, 3});
  try {
    spectrum_to_tiling_complement(omega, UniformDiscreteSet(p2, {0}, 3));
    FAIL("expected ConstructionFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConstructionFailed);
  }
  CHECK_THROWS_AS(spectrum_to_tiling_complement(CompactOpenSet::from_frame(p2, -1, 1, {1}), mixed), Error);
}
