#include "core/qp_pairs.hpp"

#include <algorithm>

#include "core/cyclotomic.hpp"

namespace fuglede {

namespace {

constexpr std::int64_t kMaxCells = std::int64_t{1} << 24;

bool in_ball_around_zero(const Rational& x, std::int64_t p, std::int64_t k) {
  std::int64_t v = valuation(x, p);
  return v == kInfiniteValuation || v >= -k;
}

std::string window_message(std::int64_t need, std::int64_t have) {
  return "window exponent " + std::to_string(have) + " too small, need " + std::to_string(need);
}

std::int64_t checked_cells(std::int64_t p, std::int64_t e) {
  if (e < 0) return 0;
  std::int64_t n = ipow(p, e);
  if (n > kMaxCells) fail(ErrorCode::ScopeTooLarge, std::to_string(n) + " cells exceed the verification limit");
  return n;
}

PairReport empty_report(std::string kind, Ball window, std::int64_t points) {
  PairReport r(std::move(kind), std::move(window));
  r.checked_points = static_cast<std::uint64_t>(points);
  return r;
}

}  // namespace

UniformDiscreteSet::UniformDiscreteSet(PrimeContext ctx, std::vector<Rational> elements, std::int64_t window_exp)
    : ctx_(ctx), elements_(std::move(elements)), window_exp_(window_exp) {
  std::sort(elements_.begin(), elements_.end());
  if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end()) {
    fail(ErrorCode::InvalidArgument, "uniformly discrete set has repeated elements");
  }
  for (const auto& x : elements_) {
    if (!in_ball_around_zero(x, ctx.p(), window_exp)) {
      fail(ErrorCode::InvalidArgument,
           format_rational(x) + " lies outside the declared window B(0, p^" + std::to_string(window_exp) + ")");
    }
  }
}

std::optional<std::int64_t> UniformDiscreteSet::separation_exponent() const {
  std::optional<std::int64_t> n_e;
  for (std::size_t a = 0; a < elements_.size(); ++a) {
    for (std::size_t b = a + 1; b < elements_.size(); ++b) {
      std::int64_t v = valuation(elements_[a] - elements_[b], p());
      n_e = n_e ? std::max(*n_e, v) : v;
    }
  }
  return n_e;
}

std::vector<PAdicScalar> UniformDiscreteSet::truncation(std::int64_t k) const {
  if (k > window_exp_) fail(ErrorCode::WindowTooSmall, window_message(k, window_exp_));
  std::vector<PAdicScalar> out;
  for (const auto& x : elements_) {
    if (in_ball_around_zero(x, p(), k)) out.emplace_back(ctx_, x);
  }
  return out;
}

std::int64_t UniformDiscreteSet::count_in_ball(const PAdicScalar& center, std::int64_t k) const {
  require_same_context(ctx_, center.context());
  if (k > window_exp_ || !in_ball_around_zero(center.value(), p(), window_exp_)) {
    fail(ErrorCode::WindowTooSmall, "ball B(" + format_rational(center.value()) + ", p^" + std::to_string(k) +
                                        ") leaves the window B(0, p^" + std::to_string(window_exp_) + ")");
  }
  return std::count_if(elements_.begin(), elements_.end(),
                       [&](const Rational& x) { return in_ball_around_zero(x - center.value(), p(), k); });
}

UniformDiscreteSet complement_lift(PrimeContext ctx, std::span<const std::int64_t> complement,
                                   std::int64_t window_exp) {
  const std::int64_t p = ctx.p();
  std::vector<Rational> out;
  if (window_exp >= 0) {
    const std::int64_t reps = ipow(p, window_exp);
    const Rational step = rational_pow(p, -window_exp);
    for (std::int64_t u : complement) {
      for (std::int64_t j = 0; j < reps; ++j) out.push_back(Rational(u) + step * j);
    }
  } else {
    for (std::int64_t u : complement) {
      if (in_ball_around_zero(Rational(u), p, window_exp)) out.emplace_back(u);
    }
  }
  return {ctx, std::move(out), window_exp};
}

UniformDiscreteSet spectrum_lift(PrimeContext ctx, std::int64_t M, std::span<const std::int64_t> spectrum,
                                 std::int64_t window_exp) {
  UniformDiscreteSet base = complement_lift(ctx, spectrum, window_exp - M);
  const Rational scale = rational_pow(ctx.p(), -M);
  std::vector<Rational> out;
  out.reserve(base.size());
  for (const auto& x : base.elements()) out.push_back(x * scale);
  return {ctx, std::move(out), window_exp};
}

std::int64_t n_f_of(const CompactOpenSet& omega) {
  const std::int64_t p = omega.p();
  const std::int64_t finest = omega.v() + omega.M();
  for (std::int64_t n = omega.v(); n < finest; ++n) {
    const std::int64_t reps = checked_cells(p, finest - n);
    const Rational place = rational_pow(p, n);
    bool positive = true;
    for (std::int64_t i = 0; i < reps && positive; ++i) {
      positive = autocorrelation(omega, PAdicScalar(omega.context(), place * i)) > 0;
    }
    if (positive) return n;
  }
  return finest;
}

const char* sphere_status_name(SphereStatus s) noexcept {
  switch (s) {
    case SphereStatus::InZeroSet: return "InZeroSet";
    case SphereStatus::NotInZeroSet: return "NotInZeroSet";
    case SphereStatus::Mixed: return "Mixed";
  }
  return "Unknown";
}

SphereStatus sphere_status(const UniformDiscreteSet& e, std::int64_t level, TruncationRange truncation,
                           std::int64_t unit) {
  if (truncation.lo > truncation.hi) fail(ErrorCode::InvalidArgument, "empty truncation range");
  if (truncation.hi > e.window_exp()) fail(ErrorCode::WindowTooSmall, window_message(truncation.hi, e.window_exp()));
  if (unit % e.p() == 0) fail(ErrorCode::InvalidArgument, "sphere multiplier must be a p-adic unit");
  const PAdicScalar xi(e.context(), rational_pow(e.p(), level) * unit);
  bool any_zero = false;
  bool any_nonzero = false;
  for (std::int64_t k = truncation.lo; k <= truncation.hi; ++k) {
    auto points = e.truncation(k);
    (is_zero(character_sum(xi, points)) ? any_zero : any_nonzero) = true;
  }
  if (any_zero && any_nonzero) return SphereStatus::Mixed;
  return any_zero ? SphereStatus::InZeroSet : SphereStatus::NotInZeroSet;
}

std::map<std::int64_t, SphereStatus> zero_sphere_scan(const UniformDiscreteSet& e, std::int64_t level_lo,
                                                      std::int64_t level_hi, TruncationRange truncation) {
  std::map<std::int64_t, SphereStatus> out;
  for (std::int64_t n = level_lo; n <= level_hi; ++n) out[n] = sphere_status(e, n, truncation);
  return out;
}

std::int64_t first_occupied_truncation(const UniformDiscreteSet& e) {
  if (e.size() == 0) fail(ErrorCode::EmptySet, "empty uniformly discrete set");
  std::optional<std::int64_t> best;
  for (const auto& x : e.elements()) {
    std::int64_t v = valuation(x, e.p());
    if (v != kInfiniteValuation) best = best ? std::min(*best, -v) : -v;
  }
  // E = {0} is occupied at every radius; the window is as good as any.
  return best.value_or(e.window_exp());
}

bool zero_bound_check(const UniformDiscreteSet& e, std::int64_t depth) {
  auto n_e = e.separation_exponent();
  if (!n_e) return true;
  const TruncationRange truncation{first_occupied_truncation(e), e.window_exp()};
  // |p^level| >= p^{n_E + 2}  <=>  level <= -(n_E + 2).
  const std::int64_t top = -(*n_e + 2);
  for (std::int64_t level = top; level > top - depth; --level) {
    if (sphere_status(e, level, truncation) != SphereStatus::NotInZeroSet) return false;
  }
  return true;
}

std::vector<std::pair<std::int64_t, Rational>> density(const UniformDiscreteSet& e, const PAdicScalar& x0,
                                                       std::int64_t k_lo, std::int64_t k_hi) {
  std::vector<std::pair<std::int64_t, Rational>> out;
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    out.emplace_back(k, Rational(e.count_in_ball(x0, k)) * rational_pow(e.p(), -k));
  }
  return out;
}

bool uniformity_check(const UniformDiscreteSet& e, std::int64_t n, std::span<const PAdicScalar> probes) {
  const PAdicScalar origin(e.context(), 0);
  const Rational d = Rational(e.count_in_ball(origin, e.window_exp())) * rational_pow(e.p(), -e.window_exp());
  const Rational expected = d * rational_pow(e.p(), n);
  return std::all_of(probes.begin(), probes.end(),
                     [&](const PAdicScalar& xi) { return Rational(e.count_in_ball(xi, n)) == expected; });
}

PairReport verify_tiling_pair(const CompactOpenSet& omega, const UniformDiscreteSet& translates,
                              std::int64_t window_exp) {
  require_same_context(omega.context(), translates.context());
  const PrimeContext& ctx = omega.context();
  const std::int64_t p = ctx.p();
  const std::int64_t cell_exp = omega.cell_radius_exp();
  const std::int64_t margin = std::max(window_exp, support_exponent(omega));
  if (window_exp < cell_exp) fail(ErrorCode::WindowTooSmall, window_message(cell_exp, window_exp));
  if (translates.window_exp() < margin) fail(ErrorCode::WindowTooSmall, window_message(margin, translates.window_exp()));

  const std::int64_t depth = window_exp - cell_exp;
  const std::int64_t cells = checked_cells(p, depth);
  const Rational to_unit = rational_pow(p, window_exp);
  std::vector<std::int64_t> hits(static_cast<std::size_t>(cells), 0);
  const Rational scale = rational_pow(p, omega.v());
  for (const auto& t : translates.elements()) {
    for (std::int64_t c : omega.digits()) {
      Rational a = scale * c + t;
      if (!in_ball_around_zero(a, p, window_exp)) continue;
      ++hits[static_cast<std::size_t>(residue_mod(a * to_unit, p, depth))];
    }
  }

  PairReport report = empty_report("tiling", ball_around_zero(ctx, window_exp), cells);
  for (std::int64_t i = 0; i < cells; ++i) {
    const std::int64_t h = hits[static_cast<std::size_t>(i)];
    if (h != 1) {
      report.status = PairStatus::FailedAt;
      report.failure = PairFailure{Rational(i) / to_unit, {0, CyclotomicSum::constant(ctx, h)}, Rational(1)};
      break;
    }
  }
  return report;
}

PairReport verify_spectral_pair(const CompactOpenSet& omega, const UniformDiscreteSet& spectrum,
                                std::int64_t window_exp) {
  require_same_context(omega.context(), spectrum.context());
  const PrimeContext& ctx = omega.context();
  const std::int64_t p = ctx.p();
  const std::int64_t support = omega.v() + omega.M();
  const std::int64_t constancy = local_constancy_parameter(omega);
  const std::int64_t margin = std::max(window_exp, support);
  if (window_exp < constancy) fail(ErrorCode::WindowTooSmall, window_message(constancy, window_exp));
  if (spectrum.window_exp() < margin) fail(ErrorCode::WindowTooSmall, window_message(margin, spectrum.window_exp()));

  const std::int64_t reps = checked_cells(p, window_exp - constancy);
  const Rational step = rational_pow(p, -window_exp);
  const BigInt card(static_cast<std::int64_t>(omega.digits().size()));
  const CyclotomicSum target = CyclotomicSum::constant(ctx, card * card);
  const Rational rhs = measure(omega) * measure(omega);

  PairReport report = empty_report("spectral", ball_around_zero(ctx, window_exp), reps);
  for (std::int64_t j = 0; j < reps; ++j) {
    const Rational xi = step * j;
    CyclotomicSum total(ctx);
    for (const auto& lambda : spectrum.elements()) {
      const Rational delta = xi - lambda;
      if (!in_ball_around_zero(delta, p, support)) continue;
      ScaledCyclotomic f = indicator_fourier(omega, PAdicScalar(ctx, delta));
      if (f.is_zero_value()) continue;
      total += f.sum * conjugate(f.sum);
    }
    if (!equal_values(total, target)) {
      report.status = PairStatus::FailedAt;
      report.failure = PairFailure{xi, {-2 * support, normalize(total)}, rhs};
      break;
    }
  }
  return report;
}

SpectrumToTiling spectrum_to_tiling_complement(const CompactOpenSet& omega, const UniformDiscreteSet& spectrum,
                                               std::int64_t window_exp) {
  require_same_context(omega.context(), spectrum.context());
  if (omega.v() < 0) {
    fail(ErrorCode::InvalidArgument, "spectrum_to_tiling_complement expects a set inside Z_p (v >= 0)");
  }
  const std::int64_t p = omega.p();
  SpectrumToTiling out{{}, n_f_of(omega), {}, {}, empty_report("tiling", ball_around_zero(omega.context(), window_exp), 0)};
  if (spectrum.window_exp() < out.n_f) fail(ErrorCode::WindowTooSmall, window_message(out.n_f, spectrum.window_exp()));

  const TruncationRange truncation{out.n_f, spectrum.window_exp()};
  for (std::int64_t level = 0; level < out.n_f; ++level) {
    switch (sphere_status(spectrum, level, truncation)) {
      case SphereStatus::InZeroSet: out.branching_levels.push_back(level); break;
      case SphereStatus::NotInZeroSet: out.free_levels.push_back(level); break;
      case SphereStatus::Mixed:
        fail(ErrorCode::NotASpectrumEvidence,
             "sphere at level " + std::to_string(level) + " vanishes for some truncations but not others");
    }
  }

  const auto truncated = spectrum.truncation(out.n_f);
  if (ipow(p, static_cast<std::int64_t>(out.branching_levels.size())) > static_cast<std::int64_t>(truncated.size())) {
    fail(ErrorCode::NotASpectrumEvidence, "p^Card(I) exceeds Card(Λ ∩ B(0, p^n_f))");
  }

  out.complement = {0};
  for (std::int64_t j : out.free_levels) {
    const std::int64_t place = ipow(p, j);
    std::vector<std::int64_t> next;
    for (std::int64_t base : out.complement) {
      for (std::int64_t a = 0; a < p; ++a) next.push_back(base + a * place);
    }
    out.complement = std::move(next);
  }
  std::sort(out.complement.begin(), out.complement.end());

  const Rational covered = Rational(static_cast<std::int64_t>(out.complement.size())) * measure(omega);
  if (covered != 1) {
    fail(ErrorCode::ConstructionFailed, "Card(U) * m(omega) = " + std::to_string(out.complement.size()) + " * " +
                                            format_rational(measure(omega)) + " = " + format_rational(covered) +
                                            ", expected 1/1");
  }

  const std::int64_t lift_window = std::max(window_exp, support_exponent(omega));
  out.report = verify_tiling_pair(omega, complement_lift(omega.context(), out.complement, lift_window), window_exp);
  out.report.n_f = out.n_f;
  out.report.branching_levels = out.branching_levels;
  out.report.free_levels = out.free_levels;
  out.report.density = Rational(static_cast<std::int64_t>(truncated.size())) * rational_pow(p, -out.n_f);
  return out;
}

}  // namespace fuglede
