#pragma once

// Q_p-level analysis of spectral and tiling pairs on finite windows: zero
// spheres of the Fourier transform of a discrete measure, densities, pair
// verification and the construction of a tiling complement from a spectrum.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/compact_open.hpp"
#include "core/padic.hpp"

namespace fuglede {

/// A finite list declared to be exactly E ∩ B(0, p^window_exp) for a
/// uniformly discrete E ⊂ Q_p.
class UniformDiscreteSet {
 public:
  /// Throws InvalidArgument on duplicates or elements outside the window.
  UniformDiscreteSet(PrimeContext ctx, std::vector<Rational> elements, std::int64_t window_exp);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t p() const noexcept { return ctx_.p(); }
  const std::vector<Rational>& elements() const noexcept { return elements_; }
  std::int64_t window_exp() const noexcept { return window_exp_; }
  std::size_t size() const noexcept { return elements_.size(); }

  /// n_E = max v_p(a - b) over distinct pairs; empty for a singleton.
  std::optional<std::int64_t> separation_exponent() const;

  /// E ∩ B(0, p^k); WindowTooSmall when k exceeds the window.
  std::vector<PAdicScalar> truncation(std::int64_t k) const;

  /// Card(E ∩ B(center, p^k)); the ball must lie inside the window.
  std::int64_t count_in_ball(const PAdicScalar& center, std::int64_t k) const;

 private:
  PrimeContext ctx_;
  std::vector<Rational> elements_;
  std::int64_t window_exp_;
};

/// p^{-M} (W + L) ∩ B(0, p^window): the Q_p spectrum obtained from a
/// spectrum W of a digit set in Z/p^M. L = {j / p^k} are the canonical
/// representatives of Q_p / Z_p.
UniformDiscreteSet spectrum_lift(PrimeContext ctx, std::int64_t M, std::span<const std::int64_t> spectrum,
                                 std::int64_t window_exp);

/// (U + L) ∩ B(0, p^window) for U ⊂ Z: a tiling complement of Q_p built from
/// a tiling complement U of Z_p.
UniformDiscreteSet complement_lift(PrimeContext ctx, std::span<const std::int64_t> complement,
                                   std::int64_t window_exp);

/// Least n such that m(omega ∩ (omega + x)) > 0 for every x in B(0, p^{-n}).
std::int64_t n_f_of(const CompactOpenSet& omega);

enum class SphereStatus { InZeroSet, NotInZeroSet, Mixed };

const char* sphere_status_name(SphereStatus s) noexcept;

/// Truncation levels k used for the sums over E ∩ B(0, p^k).
struct TruncationRange {
  std::int64_t lo;
  std::int64_t hi;
};

/// Classifies the sphere S(0, p^{-level}) through the sums
/// sum_{λ in E ∩ B(0,p^k)} chi(unit p^level λ), k in `truncation`: all zero,
/// all nonzero, or mixed.
SphereStatus sphere_status(const UniformDiscreteSet& e, std::int64_t level, TruncationRange truncation,
                           std::int64_t unit = 1);

std::map<std::int64_t, SphereStatus> zero_sphere_scan(const UniformDiscreteSet& e, std::int64_t level_lo,
                                                      std::int64_t level_hi, TruncationRange truncation);

/// Smallest k with E ∩ B(0, p^k) nonempty (E nonempty).
std::int64_t first_occupied_truncation(const UniformDiscreteSet& e);

/// Checks that no sphere of radius >= p^{n_E + 2} is a zero sphere, over
/// `depth` radii starting at p^{n_E + 2}. Vacuously true for singletons.
bool zero_bound_check(const UniformDiscreteSet& e, std::int64_t depth = 4);

/// (k, Card(E ∩ B(x0, p^k)) / p^k) for k in [k_lo, k_hi].
std::vector<std::pair<std::int64_t, Rational>> density(const UniformDiscreteSet& e, const PAdicScalar& x0,
                                                       std::int64_t k_lo, std::int64_t k_hi);

/// Card(E ∩ B(xi, p^n)) is the same for every probe and equals p^n D(E),
/// where D(E) is the density ratio at the full window.
bool uniformity_check(const UniformDiscreteSet& e, std::int64_t n, std::span<const PAdicScalar> probes);

enum class PairStatus { Verified, FailedAt };

struct PairFailure {
  Rational xi;
  ScaledCyclotomic lhs;
  Rational rhs;
};

struct PairReport {
  PairReport(std::string kind_, Ball window) : kind(std::move(kind_)), verified_window(std::move(window)) {}

  std::string kind;
  Ball verified_window;
  std::uint64_t checked_points = 0;
  PairStatus status = PairStatus::Verified;
  std::optional<PairFailure> failure;
  std::optional<std::int64_t> n_f;
  std::optional<Rational> density;
  std::optional<std::vector<std::int64_t>> branching_levels;
  std::optional<std::vector<std::int64_t>> free_levels;

  bool verified() const { return status == PairStatus::Verified; }
};

/// Checks that omega + T covers every cell of B(0, p^window) exactly once.
/// T's window must reach max(window, support exponent of omega).
PairReport verify_tiling_pair(const CompactOpenSet& omega, const UniformDiscreteSet& translates,
                              std::int64_t window_exp);

/// Checks sum_λ |1̂_omega|^2(xi - λ) = m(omega)^2 exactly at one xi per
/// local-constancy cell of B(0, p^window). Λ's window must reach
/// max(window, v + M).
PairReport verify_spectral_pair(const CompactOpenSet& omega, const UniformDiscreteSet& spectrum,
                                std::int64_t window_exp);

struct SpectrumToTiling {
  std::vector<std::int64_t> complement;  // U
  std::int64_t n_f;
  std::vector<std::int64_t> branching_levels;  // I
  std::vector<std::int64_t> free_levels;       // J
  PairReport report;
};

/// Builds U = {sum_{j in J} a_j p^j} from the zero spheres of the spectrum
/// and verifies that U + L tiles Q_p with omega on the given window.
SpectrumToTiling spectrum_to_tiling_complement(const CompactOpenSet& omega, const UniformDiscreteSet& spectrum,
                                               std::int64_t window_exp = 3);

}  // namespace fuglede
