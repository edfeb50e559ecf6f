#include "ows/dp_select.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace ows {

namespace {

constexpr double kRankSnap = 1e-9;

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive and finite");
}

}  // namespace

RankWindow robust_min_rank_window(std::size_t n, double alpha_prime) {
    if (!(alpha_prime > 0.0) || alpha_prime > 0.5)
        throw std::invalid_argument("alpha_prime must lie in (0, 1/2]");
    const double an = alpha_prime * static_cast<double>(n);
    RankWindow w;
    w.lo = static_cast<std::int64_t>(std::ceil(an - kRankSnap));
    w.hi = static_cast<std::int64_t>(std::floor(2.0 * an + kRankSnap));
    if (w.lo < 1) w.lo = 1;
    return w;
}

std::int64_t robust_min_pure(const SortedIntDataset& data, const RobustMinParams& params, Rng& rng) {
    check_epsilon(params.budget.epsilon);
    const std::size_t n = data.size();
    if (n == 0) throw std::invalid_argument("robust_min: empty dataset");
    const RankWindow w = robust_min_rank_window(n, params.alpha_prime);
    if (w.hi < w.lo || w.hi > static_cast<std::int64_t>(n))
        throw std::invalid_argument("robust_min: rank window degenerate for n=" + std::to_string(n));
    std::vector<std::int64_t> window(data.values.begin() + (w.lo - 1), data.values.begin() + w.hi);
    const auto sub = SortedIntDataset::from_values(std::move(window), data.bound);
    return exp_mech_interior_point(sub, params.budget.epsilon, rng);
}

std::int64_t robust_min_approx(const SortedIntDataset& data, const RobustMinParams& params, Rng& rng) {
    // Pure DP implies (eps, delta)-DP, so the pure mechanism serves verbatim;
    // callers account the delta they budgeted.
    return robust_min_pure(data, params, rng);
}

bool robust_min_holds(const SortedIntDataset& data, double alpha_prime, std::int64_t r) {
    const double an = alpha_prime * static_cast<double>(data.size());
    const auto le =
        static_cast<double>(std::upper_bound(data.values.begin(), data.values.end(), r) -
                            data.values.begin());
    return le + kRankSnap >= an && le - kRankSnap <= 2.0 * an;
}

std::map<std::string, std::int64_t> frequency_table(std::span<const std::string> items) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& it : items) counts[it] += 1;
    return counts;
}

FreqOutcome most_frequent_pure(std::span<const std::string> items, std::uint64_t domain_size,
                               double epsilon, double beta, Rng& rng) {
    check_epsilon(epsilon);
    if (!(beta > 0.0) || beta >= 1.0)
        throw std::invalid_argument("most_frequent_pure: beta must lie in (0, 1)");
    if (domain_size == 0) throw std::invalid_argument("most_frequent_pure: empty domain");
    const auto counts = frequency_table(items);
    if (counts.size() > domain_size)
        throw std::invalid_argument("most_frequent_pure: domain smaller than observed support");

    // Log-domain weights; the lumped unobserved mass is (R - #distinct) * e^0.
    const double unseen = static_cast<double>(domain_size - counts.size());
    double max_logw = unseen > 0.0 ? std::log(unseen) : -1.0 / 0.0;
    std::vector<std::pair<const std::string*, double>> observed;
    observed.reserve(counts.size());
    for (const auto& [item, c] : counts) {
        const double lw = 0.5 * epsilon * static_cast<double>(c);
        observed.emplace_back(&item, lw);
        max_logw = std::max(max_logw, lw);
    }

    double total = unseen > 0.0 ? std::exp(std::log(unseen) - max_logw) : 0.0;
    const double sentinel_mass = total;
    for (auto& [item, lw] : observed) {
        lw = std::exp(lw - max_logw);
        total += lw;
    }
    double x = rng.next_unit() * total;
    if (x < sentinel_mass) return FreqOutcome{};
    x -= sentinel_mass;
    for (const auto& [item, wgt] : observed) {
        if (x < wgt) return FreqOutcome{*item};
        x -= wgt;
    }
    return observed.empty() ? FreqOutcome{} : FreqOutcome{*observed.back().first};
}

std::int64_t stable_histogram_threshold(double epsilon, double delta) {
    check_epsilon(epsilon);
    if (!(delta > 0.0) || delta >= 1.0)
        throw std::invalid_argument("stable_histogram_threshold: delta must lie in (0, 1)");
    return 1 + static_cast<std::int64_t>(std::ceil(2.0 * std::log(2.0 / delta) / epsilon));
}

FreqOutcome most_frequent_approx(std::span<const std::string> items, double epsilon, double delta,
                                 double beta, Rng& rng) {
    check_epsilon(epsilon);
    if (!(beta > 0.0) || beta >= 1.0)
        throw std::invalid_argument("most_frequent_approx: beta must lie in (0, 1)");
    const std::int64_t tau = stable_histogram_threshold(epsilon, delta);
    const auto counts = frequency_table(items);

    const std::string* best = nullptr;
    std::int64_t best_noisy = 0;
    for (const auto& [item, c] : counts) {
        const std::int64_t noisy = c + two_sided_geometric(epsilon / 2.0, rng);
        if (noisy < tau) continue;
        if (best == nullptr || noisy > best_noisy || (noisy == best_noisy && item < *best)) {
            best = &item;
            best_noisy = noisy;
        }
    }
    if (best == nullptr) return FreqOutcome{};
    return FreqOutcome{*best};
}

}  // namespace ows
