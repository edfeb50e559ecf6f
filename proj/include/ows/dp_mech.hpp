#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ows/rng.hpp"

namespace ows {

struct PrivacyBudget {
    double epsilon = 0.0;
    double delta = 0.0;  // 0 denotes pure DP
    bool operator==(const PrivacyBudget&) const = default;
};

// Sequential composition: componentwise sums.
PrivacyBudget compose(std::span<const PrivacyBudget> parts);

// Integers in [1, bound], kept sorted.
struct SortedIntDataset {
    std::vector<std::int64_t> values;
    std::int64_t bound = 0;

    static SortedIntDataset from_values(std::vector<std::int64_t> vals, std::int64_t bound);
    std::size_t size() const { return values.size(); }
};

// Two-sided geometric noise: Pr[Z = z] = (1-g)/(1+g) * g^|z| with g = e^-eps.
// Sampled as the difference of two geometric draws from the given stream.
std::int64_t two_sided_geometric(double epsilon, Rng& rng);
double two_sided_geometric_pmf(double epsilon, std::int64_t z);
double two_sided_geometric_tail(double epsilon, std::int64_t t);  // Pr[|Z| > t]

std::int64_t noisy_count(std::int64_t count, double epsilon, Rng& rng);

// Interior point scoring: q(S, r) = max{ min(t, n-t) : x_(t) <= r <= x_(t+1) }
// with sentinels x_(0) = 1 and x_(n+1) = bound, so q vanishes off the data
// range. The score is constant on maximal runs between data values; the
// decomposition below lists those runs, which keeps the sampler polynomial in
// n and log(bound) rather than linear in bound.
struct ScoreSegment {
    std::int64_t lo = 0;  // inclusive
    std::int64_t hi = 0;  // inclusive
    std::int64_t score = 0;
};

std::int64_t interior_point_score(const SortedIntDataset& s, std::int64_t r);
std::vector<ScoreSegment> interior_point_segments(const SortedIntDataset& s);

// Exponential mechanism for the interior point problem: samples r in
// [1, bound] with probability proportional to exp(epsilon * q(S, r) / 2).
std::int64_t exp_mech_interior_point(const SortedIntDataset& s, double epsilon, Rng& rng);

}  // namespace ows
