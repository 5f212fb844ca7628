#pragma once

// Tiling and spectrality of subsets of Z/p^M: search-based deciders, the
// homogeneity constructions, independent witness checkers and the census.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "core/compact_open.hpp"
#include "core/padic.hpp"

namespace fuglede {

/// Nonempty C ⊂ [0, p^M), sorted and deduplicated. Identified with the
/// compact open set C + p^M Z_p inside Z_p.
class DigitSet {
 public:
  DigitSet(PrimeContext ctx, std::int64_t M, std::vector<std::int64_t> elements);

  const PrimeContext& context() const noexcept { return ctx_; }
  std::int64_t p() const noexcept { return ctx_.p(); }
  std::int64_t M() const noexcept { return M_; }
  std::int64_t modulus() const noexcept { return modulus_; }
  const std::vector<std::int64_t>& elements() const noexcept { return elements_; }
  std::size_t size() const noexcept { return elements_.size(); }

  CompactOpenSet as_compact_open() const;

  friend bool operator==(const DigitSet&, const DigitSet&) = default;

 private:
  PrimeContext ctx_;
  std::int64_t M_;
  std::int64_t modulus_;
  std::vector<std::int64_t> elements_;
};

enum class WitnessKind { TilingComplement, Spectrum };

const char* witness_kind_name(WitnessKind kind) noexcept;

struct Witness {
  WitnessKind kind;
  std::int64_t M;
  std::vector<std::int64_t> elements;

  friend bool operator==(const Witness&, const Witness&) = default;
};

Homogeneity is_p_homogeneous(const DigitSet& set);

/// Exact-cover search for T with C ⊕ T = Z/p^M, covering the smallest
/// uncovered residue first.
std::optional<Witness> is_tile_zmod(const DigitSet& set);

/// d in (0, p^M) with sum_{c in C} omega^{dc} = 0, omega = e^{2 pi i/p^M}.
std::vector<std::int64_t> zero_difference_set(const DigitSet& set);

/// Exact check that all pairwise differences of `spectrum` lie in the
/// zero-difference set and Card(spectrum) = Card(C).
bool is_spectrum_exact(const DigitSet& set, std::span<const std::int64_t> spectrum);

/// Lexicographic backtracking search for a spectrum containing 0.
std::optional<Witness> is_spectral_zmod(const DigitSet& set);

/// {sum_{i in I} a_i p^{M-1-i}}, verified exactly; throws ConstructionFailed.
Witness spectrum_from_homogeneity(const DigitSet& set, std::span<const std::int64_t> branching);

/// {sum_{j not in I} b_j p^j}, verified by coverage; throws ConstructionFailed.
Witness complement_from_homogeneity(const DigitSet& set, std::span<const std::int64_t> branching);

// Independent checkers. These share no code with the searches above.

/// Counts how often every residue is hit by C + T.
bool check_tiling_by_coverage(const DigitSet& set, std::span<const std::int64_t> complement);

/// Floating-point orthogonality of the characters indexed by `spectrum`.
bool check_spectrum_numeric(const DigitSet& set, std::span<const std::int64_t> spectrum,
                            double tolerance = 1e-9);

/// Number of subsets of Z/p^M that are homogeneous with branching set
/// exactly `branching`: p^{sum_{i not in I} p^{Card(I ∩ [0, i))}}.
BigInt homogeneous_count_formula(std::int64_t p, std::int64_t M,
                                 std::span<const std::int64_t> branching);

struct CensusRecord {
  std::vector<std::int64_t> set;
  bool is_tile = false;
  bool is_spectral = false;
  bool is_homogeneous = false;
  std::vector<std::int64_t> branching_levels;
  std::optional<std::vector<std::int64_t>> witness_complement;
  std::optional<std::vector<std::int64_t>> witness_spectrum;
  bool witnesses_verified = true;
};

struct CardinalityRow {
  std::int64_t total = 0;
  std::int64_t tiles = 0;
  std::int64_t spectral = 0;
  std::int64_t homogeneous = 0;
};

struct BranchingRow {
  std::int64_t observed = 0;
  std::optional<BigInt> formula;  // exhaustive mode only
};

struct Census {
  std::int64_t p;
  std::int64_t M;
  std::string mode;
  std::vector<CensusRecord> records;
  std::map<std::int64_t, CardinalityRow> by_cardinality;
  std::map<std::vector<std::int64_t>, BranchingRow> by_branching;
  std::vector<std::vector<std::int64_t>> disagreements;
  std::vector<std::vector<std::int64_t>> cardinality_violations;
  std::vector<std::vector<std::int64_t>> witness_failures;
  std::vector<std::vector<std::int64_t>> formula_mismatches;

  bool has_fatal_findings() const {
    return !disagreements.empty() || !cardinality_violations.empty() ||
           !witness_failures.empty() || !formula_mismatches.empty();
  }
};

enum class CensusMode { Exhaustive, Sample, List };

struct CensusOptions {
  CensusMode mode = CensusMode::Exhaustive;
  std::int64_t sample_count = 0;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<std::vector<std::int64_t>> sets;  // List mode
};

/// Decides one set and re-verifies its witnesses.
CensusRecord classify_set(const DigitSet& set);

/// Exhaustive scope is p = 2 with M <= 4 and p = 3 with M <= 2 (plus the
/// trivial M = 0); beyond that ScopeTooLarge.
Census classify_all(PrimeContext ctx, std::int64_t M, const CensusOptions& options);

}  // namespace fuglede
