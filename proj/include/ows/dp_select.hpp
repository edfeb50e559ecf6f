#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>

#include "ows/dp_mech.hpp"
#include "ows/rng.hpp"

namespace ows {

struct RobustMinParams {
    double alpha_prime = 0.0;  // robustness fraction, in (0, 1/2]
    double beta = 0.0;         // failure probability budget (analysis side)
    PrivacyBudget budget;
    std::int64_t bound = 0;    // domain bound R
};

struct RankWindow {
    std::int64_t lo = 0;  // 1-based rank, inclusive
    std::int64_t hi = 0;
};

// Ranks ceil(a*n) .. floor(2*a*n). A 1e-9 snap keeps decimal fractions like
// 0.1 on their intended integer boundaries.
RankWindow robust_min_rank_window(std::size_t n, double alpha_prime);

// Reduction to the interior point problem: apply the exponential mechanism to
// the sorted elements in the rank window. Succeeds (both robust-minimum
// conditions) with probability >= 1-beta once n >= O(log(R/beta)/(a*eps)).
std::int64_t robust_min_pure(const SortedIntDataset& data, const RobustMinParams& params, Rng& rng);

// Same contract under (eps, delta); realized by the pure mechanism, which
// satisfies the weaker guarantee outright.
std::int64_t robust_min_approx(const SortedIntDataset& data, const RobustMinParams& params, Rng& rng);

// Definitional check of the two robust-minimum conditions; pure in (data, r).
bool robust_min_holds(const SortedIntDataset& data, double alpha_prime, std::int64_t r);

struct FreqOutcome {
    std::optional<std::string> item;  // absent = no stable mode
};

std::map<std::string, std::int64_t> frequency_table(std::span<const std::string> items);

// Exponential mechanism with the frequency score over an implicit domain of
// `domain_size` byte strings: every unobserved item carries weight 1 and the
// whole unobserved mass collapses to the absent sentinel. When the mode leads
// the runner-up by GAP >= 4*ln(domain_size/beta)/epsilon it is returned with
// probability >= 1-beta. `beta` sizes that guarantee; it does not enter the
// sampling.
FreqOutcome most_frequent_pure(std::span<const std::string> items, std::uint64_t domain_size,
                               double epsilon, double beta, Rng& rng);

// Stable histogram: per-item geometric noise at epsilon/2, discard noisy
// counts below the threshold below, return the surviving argmax (ties to the
// lexicographically smallest item), sentinel when nothing survives.
std::int64_t stable_histogram_threshold(double epsilon, double delta);
FreqOutcome most_frequent_approx(std::span<const std::string> items, double epsilon, double delta,
                                 double beta, Rng& rng);

}  // namespace ows
