#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ows/rng.hpp"

namespace ows {

// Sets over a small universe [m] as bitmasks (element x -> bit x).

// True iff for every ordered pair x != y some set contains x but not y.
bool separates_all_ordered_pairs(std::span<const std::uint32_t> sets, std::uint32_t m);

struct SeparationCase {
    std::uint32_t m = 0;
    std::uint32_t max_forbidden_n = 0;    // largest n with 2^(n-1) < m
    std::uint64_t collections_checked = 0;
    bool impossibility_verified = false;  // no collection of forbidden size separates
    std::vector<std::uint32_t> witness;   // a separating collection
    bool witness_verified = false;
};

struct SeparationReport {
    std::vector<SeparationCase> cases;
    bool ok = false;
};

// For each m in [2, m_max]: exhaustively confirms that every collection of
// size n with n < log2(m) + 1 fails to separate, then exhibits a verified
// witness. Witness size is the antichain minimum (smallest n with
// C(n, floor(n/2)) >= m), which meets the log2(m) + 1 lower bound but is not
// always equal to it.
SeparationReport verify_separation_lemma(std::uint32_t m_max);

// T is "generated" by the collection when every x in T, y outside T admit a
// set containing x but not y.
bool generates_set(std::span<const std::uint32_t> sets, std::uint32_t universe, std::uint32_t t_mask);
std::uint64_t count_generated_sets(std::span<const std::uint32_t> sets, std::uint32_t universe);

struct GenerationCase {
    std::uint32_t universe = 0;
    std::uint32_t n = 0;
    bool exhaustive = false;
    std::uint64_t collections_checked = 0;
    std::uint64_t max_generated = 0;
    std::uint64_t bound = 0;  // 2^(2^n)
    bool ok = false;          // raw + complement-closed checks all held
};

struct GenerationReport {
    std::vector<GenerationCase> cases;
    bool ok = false;
};

// For universes up to `universe_size` and collection sizes up to `n_max`,
// checks generated-set counts against 2^(2^n); enumerates collections
// exhaustively while the budget allows and falls back to seeded sampling.
// Also validates the complement-closure route: for the closed family of size
// n_c, the largest pairwise-separated set has size r <= 2^(n_c - 1) and the
// closed family generates at most 2^r sets.
GenerationReport verify_generation_bound(std::uint32_t universe_size, std::uint32_t n_max, Rng& rng,
                                         std::size_t samples_per_case = 400);

}  // namespace ows
