#include "core/decide.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <thread>

#include "core/cyclotomic.hpp"

namespace fuglede {

DigitSet::DigitSet(PrimeContext ctx, std::int64_t M, std::vector<std::int64_t> elements)
    : ctx_(ctx), M_(M), modulus_(0), elements_(std::move(elements)) {
  if (M < 0) fail(ErrorCode::InvalidArgument, "M must be nonnegative");
  modulus_ = ipow(ctx.p(), M);
  if (elements_.empty()) fail(ErrorCode::EmptySet, "digit set must be nonempty");
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  if (elements_.front() < 0 || elements_.back() >= modulus_) {
    fail(ErrorCode::InvalidArgument, "digit set element outside [0, " + std::to_string(modulus_) + ")");
  }
}

CompactOpenSet DigitSet::as_compact_open() const {
  return CompactOpenSet::from_frame(ctx_, 0, M_, elements_);
}

const char* witness_kind_name(WitnessKind kind) noexcept {
  return kind == WitnessKind::TilingComplement ? "TilingComplement" : "Spectrum";
}

Homogeneity is_p_homogeneous(const DigitSet& set) {
  return is_p_homogeneous(digit_tree(set.context(), set.M(), set.elements()));
}

namespace {

class TileSearch {
 public:
  explicit TileSearch(const DigitSet& set)
      : elements_(set.elements()), n_(set.modulus()), covered_(static_cast<std::size_t>(n_), 0) {}

  std::optional<std::vector<std::int64_t>> run() {
    if (n_ % static_cast<std::int64_t>(elements_.size()) != 0) return std::nullopt;
    if (!place_next(0, 0)) return std::nullopt;
    std::vector<std::int64_t> out = translates_;
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  bool fits(std::int64_t t) const {
    return std::none_of(elements_.begin(), elements_.end(),
                        [&](std::int64_t c) { return covered_[static_cast<std::size_t>((c + t) % n_)]; });
  }

  void mark(std::int64_t t, char value) {
    for (std::int64_t c : elements_) covered_[static_cast<std::size_t>((c + t) % n_)] = value;
  }

  bool place_next(std::int64_t from, std::int64_t covered_count) {
    if (covered_count == n_) return true;
    std::int64_t x = from;
    while (covered_[static_cast<std::size_t>(x)]) ++x;
    for (std::int64_t c : elements_) {
      std::int64_t t = ((x - c) % n_ + n_) % n_;
      if (!fits(t)) continue;
      mark(t, 1);
      translates_.push_back(t);
      if (place_next(x, covered_count + static_cast<std::int64_t>(elements_.size()))) return true;
      translates_.pop_back();
      mark(t, 0);
    }
    return false;
  }

  const std::vector<std::int64_t>& elements_;
  std::int64_t n_;
  std::vector<char> covered_;
  std::vector<std::int64_t> translates_;
};

std::vector<char> zero_difference_mask(const DigitSet& set) {
  const std::int64_t n = set.modulus();
  std::vector<char> mask(static_cast<std::size_t>(n), 0);
  for (std::int64_t d = 1; d < n; ++d) {
    CyclotomicSum s(set.context(), set.M());
    for (std::int64_t c : set.elements()) {
      s.add_term(static_cast<std::int64_t>((static_cast<__int128>(d) * c) % n), 1);
    }
    mask[static_cast<std::size_t>(d)] = is_zero(s) ? 1 : 0;
  }
  return mask;
}

class SpectrumSearch {
 public:
  SpectrumSearch(std::size_t target, std::int64_t n, std::vector<char> zero_mask)
      : target_(target), n_(n), zero_(std::move(zero_mask)) {
    for (std::int64_t d = 1; d < n_; ++d) {
      if (zero_[static_cast<std::size_t>(d)]) candidates_.push_back(d);
    }
  }

  std::optional<std::vector<std::int64_t>> run() {
    chosen_ = {0};
    if (extend(0)) return chosen_;
    return std::nullopt;
  }

 private:
  bool compatible(std::int64_t lambda) const {
    return std::all_of(chosen_.begin(), chosen_.end(), [&](std::int64_t mu) {
      return zero_[static_cast<std::size_t>(((lambda - mu) % n_ + n_) % n_)] != 0;
    });
  }

  bool extend(std::size_t next) {
    if (chosen_.size() == target_) return true;
    for (std::size_t i = next; i < candidates_.size(); ++i) {
      if (candidates_.size() - i < target_ - chosen_.size()) return false;
      std::int64_t lambda = candidates_[i];
      if (!compatible(lambda)) continue;
      chosen_.push_back(lambda);
      if (extend(i + 1)) return true;
      chosen_.pop_back();
    }
    return false;
  }

  std::size_t target_;
  std::int64_t n_;
  std::vector<char> zero_;
  std::vector<std::int64_t> candidates_;
  std::vector<std::int64_t> chosen_;
};

void validate_levels(const DigitSet& set, std::span<const std::int64_t> levels) {
  for (std::int64_t i : levels) {
    if (i < 0 || i >= set.M()) {
      fail(ErrorCode::InvalidArgument, "branching level " + std::to_string(i) + " outside [0, M)");
    }
  }
}

std::string format_list(std::span<const std::int64_t> xs) {
  std::string s = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + std::to_string(xs[i]);
  return s + "}";
}

// All sums sum_{i in levels} a_i p^{exponent(i)} with a_i in [0, p).
template <typename ExponentOf>
std::vector<std::int64_t> digit_sums(std::int64_t p, std::span<const std::int64_t> levels,
                                     ExponentOf exponent_of) {
  std::vector<std::int64_t> out{0};
  for (std::int64_t level : levels) {
    const std::int64_t place = ipow(p, exponent_of(level));
    std::vector<std::int64_t> next;
    next.reserve(out.size() * static_cast<std::size_t>(p));
    for (std::int64_t base : out) {
      for (std::int64_t a = 0; a < p; ++a) next.push_back(base + a * place);
    }
    out = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::optional<Witness> is_tile_zmod(const DigitSet& set) {
  auto translates = TileSearch(set).run();
  if (!translates) return std::nullopt;
  if (!check_tiling_by_coverage(set, *translates)) {
    fail(ErrorCode::ConstructionFailed, "tiling search produced an invalid complement");
  }
  return Witness{WitnessKind::TilingComplement, set.M(), std::move(*translates)};
}

std::vector<std::int64_t> zero_difference_set(const DigitSet& set) {
  auto mask = zero_difference_mask(set);
  std::vector<std::int64_t> out;
  for (std::size_t d = 1; d < mask.size(); ++d) {
    if (mask[d]) out.push_back(static_cast<std::int64_t>(d));
  }
  return out;
}

bool is_spectrum_exact(const DigitSet& set, std::span<const std::int64_t> spectrum) {
  if (spectrum.size() != set.size()) return false;
  const std::int64_t n = set.modulus();
  std::vector<std::int64_t> sorted(spectrum.begin(), spectrum.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  if (sorted.front() < 0 || sorted.back() >= n) return false;
  for (std::size_t a = 0; a < sorted.size(); ++a) {
    for (std::size_t b = a + 1; b < sorted.size(); ++b) {
      const std::int64_t d = sorted[b] - sorted[a];
      CyclotomicSum s(set.context(), set.M());
      for (std::int64_t c : set.elements()) {
        s.add_term(static_cast<std::int64_t>((static_cast<__int128>(d) * c) % n), 1);
      }
      if (!is_zero(s)) return false;
    }
  }
  return true;
}

std::optional<Witness> is_spectral_zmod(const DigitSet& set) {
  auto spectrum = SpectrumSearch(set.size(), set.modulus(), zero_difference_mask(set)).run();
  if (!spectrum) return std::nullopt;
  if (!is_spectrum_exact(set, *spectrum)) {
    fail(ErrorCode::ConstructionFailed, "spectrum search produced an invalid spectrum");
  }
  return Witness{WitnessKind::Spectrum, set.M(), std::move(*spectrum)};
}

Witness spectrum_from_homogeneity(const DigitSet& set, std::span<const std::int64_t> branching) {
  validate_levels(set, branching);
  const std::int64_t M = set.M();
  auto candidate = digit_sums(set.p(), branching, [M](std::int64_t i) { return M - 1 - i; });
  if (!is_spectrum_exact(set, candidate)) {
    fail(ErrorCode::ConstructionFailed, "candidate spectrum " + format_list(candidate) +
                                            " fails orthogonality for C = " + format_list(set.elements()));
  }
  return {WitnessKind::Spectrum, M, std::move(candidate)};
}

Witness complement_from_homogeneity(const DigitSet& set, std::span<const std::int64_t> branching) {
  validate_levels(set, branching);
  std::vector<std::int64_t> free_levels;
  for (std::int64_t j = 0; j < set.M(); ++j) {
    if (std::find(branching.begin(), branching.end(), j) == branching.end()) free_levels.push_back(j);
  }
  auto candidate = digit_sums(set.p(), free_levels, [](std::int64_t j) { return j; });
  if (!check_tiling_by_coverage(set, candidate)) {
    fail(ErrorCode::ConstructionFailed, "candidate complement " + format_list(candidate) +
                                            " does not tile with C = " + format_list(set.elements()));
  }
  return {WitnessKind::TilingComplement, set.M(), std::move(candidate)};
}

bool check_tiling_by_coverage(const DigitSet& set, std::span<const std::int64_t> complement) {
  const std::int64_t n = set.modulus();
  std::vector<std::int64_t> hits(static_cast<std::size_t>(n), 0);
  for (std::int64_t t : complement) {
    for (std::int64_t c : set.elements()) ++hits[static_cast<std::size_t>(((c + t) % n + n) % n)];
  }
  return std::all_of(hits.begin(), hits.end(), [](std::int64_t h) { return h == 1; });
}

bool check_spectrum_numeric(const DigitSet& set, std::span<const std::int64_t> spectrum, double tolerance) {
  if (spectrum.size() != set.size()) return false;
  const double n = static_cast<double>(set.modulus());
  for (std::size_t a = 0; a < spectrum.size(); ++a) {
    for (std::size_t b = a + 1; b < spectrum.size(); ++b) {
      std::complex<double> total = 0;
      for (std::int64_t c : set.elements()) {
        // Reduce the phase exactly before converting to floating point.
        std::int64_t phase = static_cast<std::int64_t>(
            ((static_cast<__int128>(spectrum[b] - spectrum[a]) * c) % set.modulus() + set.modulus()) %
            set.modulus());
        total += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(phase) / n);
      }
      if (std::abs(total) >= tolerance) return false;
    }
  }
  return true;
}

BigInt homogeneous_count_formula(std::int64_t p, std::int64_t M, std::span<const std::int64_t> branching) {
  std::int64_t exponent = 0;
  std::int64_t vertices = 1;
  for (std::int64_t i = 0; i < M; ++i) {
    bool branches = std::find(branching.begin(), branching.end(), i) != branching.end();
    if (branches) {
      vertices *= p;
    } else {
      exponent += vertices;
    }
  }
  return boost::multiprecision::pow(BigInt(p), static_cast<unsigned>(exponent));
}

CensusRecord classify_set(const DigitSet& set) {
  CensusRecord r;
  r.set = set.elements();
  auto tile = is_tile_zmod(set);
  auto spectrum = is_spectral_zmod(set);
  auto hom = is_p_homogeneous(set);
  r.is_tile = tile.has_value();
  r.is_spectral = spectrum.has_value();
  r.is_homogeneous = hom.homogeneous;
  r.branching_levels = hom.branching_levels;
  if (tile) {
    r.witness_complement = tile->elements;
    DigitSet dual(set.context(), set.M(), tile->elements);
    r.witnesses_verified &= check_tiling_by_coverage(set, tile->elements) &&
                            check_tiling_by_coverage(dual, set.elements());
  }
  if (spectrum) {
    r.witness_spectrum = spectrum->elements;
    r.witnesses_verified &= is_spectrum_exact(set, spectrum->elements) &&
                            check_spectrum_numeric(set, spectrum->elements);
  }
  return r;
}

namespace {

bool is_power_of(std::int64_t n, std::int64_t p) {
  while (n % p == 0) n /= p;
  return n == 1;
}

std::vector<std::vector<std::int64_t>> all_level_subsets(std::int64_t M) {
  std::vector<std::vector<std::int64_t>> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << M); ++mask) {
    std::vector<std::int64_t> levels;
    for (std::int64_t i = 0; i < M; ++i) {
      if (mask >> i & 1) levels.push_back(i);
    }
    out.push_back(std::move(levels));
  }
  return out;
}

bool exhaustive_in_scope(std::int64_t p, std::int64_t M) {
  return M == 0 || (p == 2 && M <= 4) || (p == 3 && M <= 2);
}

}  // namespace

Census classify_all(PrimeContext ctx, std::int64_t M, const CensusOptions& options) {
  const std::int64_t p = ctx.p();
  if (M < 0) fail(ErrorCode::InvalidArgument, "M must be nonnegative");
  const std::int64_t n = ipow(p, M);
  Census census{p, M, {}, {}, {}, {}, {}, {}, {}, {}};
  std::vector<std::vector<std::int64_t>> sets;
  switch (options.mode) {
    case CensusMode::Exhaustive: {
      census.mode = "exhaustive";
      if (!exhaustive_in_scope(p, M)) {
        fail(ErrorCode::ScopeTooLarge, "exhaustive census limited to p=2, M<=4 and p=3, M<=2");
      }
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<std::int64_t> s;
        for (std::int64_t x = 0; x < n; ++x) {
          if (mask >> x & 1) s.push_back(x);
        }
        sets.push_back(std::move(s));
      }
      break;
    }
    case CensusMode::Sample: {
      census.mode = "sample";
      std::mt19937_64 rng(options.seed);
      for (std::int64_t k = 0; k < options.sample_count; ++k) {
        std::vector<std::int64_t> s;
        while (s.empty()) {
          for (std::int64_t x = 0; x < n; ++x) {
            if (rng() >> 63) s.push_back(x);
          }
        }
        sets.push_back(std::move(s));
      }
      break;
    }
    case CensusMode::List:
      census.mode = "list";
      sets = options.sets;
      break;
  }

  std::vector<std::optional<CensusRecord>> slots(sets.size());
  const unsigned jobs = std::max(1u, options.jobs);
  auto worker = [&](unsigned id) {
    for (std::size_t i = id; i < sets.size(); i += jobs) {
      slots[i] = classify_set(DigitSet(ctx, M, sets[i]));
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned id = 0; id < jobs; ++id) threads.emplace_back(worker, id);
    for (auto& t : threads) t.join();
  }

  if (options.mode == CensusMode::Exhaustive) {
    for (auto& levels : all_level_subsets(M)) {
      census.by_branching[levels].formula = homogeneous_count_formula(p, M, levels);
    }
  }
  census.records.reserve(slots.size());
  for (auto& slot : slots) {
    CensusRecord& r = census.records.emplace_back(std::move(*slot));
    auto& row = census.by_cardinality[static_cast<std::int64_t>(r.set.size())];
    ++row.total;
    row.tiles += r.is_tile;
    row.spectral += r.is_spectral;
    row.homogeneous += r.is_homogeneous;
    if (r.is_homogeneous) ++census.by_branching[r.branching_levels].observed;
    if (r.is_tile != r.is_spectral || r.is_tile != r.is_homogeneous) census.disagreements.push_back(r.set);
    if ((r.is_tile || r.is_spectral) && !is_power_of(static_cast<std::int64_t>(r.set.size()), p)) {
      census.cardinality_violations.push_back(r.set);
    }
    if (!r.witnesses_verified) census.witness_failures.push_back(r.set);
  }
  for (const auto& [levels, row] : census.by_branching) {
    if (row.formula && BigInt(row.observed) != *row.formula) census.formula_mismatches.push_back(levels);
  }
  return census;
}

}  // namespace fuglede
