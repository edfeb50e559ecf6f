#include "ows/dp_mech.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ows {

namespace {

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw std::invalid_argument("epsilon must be positive and finite");
}

// Geometric on {0,1,2,...} with Pr[X >= x] = g^x.
std::int64_t geometric_tail_draw(double gamma, Rng& rng) {
    const double u = 1.0 - rng.next_unit();  // (0, 1]
    if (u >= 1.0) return 0;
    return static_cast<std::int64_t>(std::floor(std::log(u) / std::log(gamma)));
}

// min(t, n-t) maximized over t in [a, b] (all within [0, n]).
std::int64_t best_rank_score(std::int64_t a, std::int64_t b, std::int64_t n) {
    std::int64_t best = 0;
    const std::int64_t candidates[4] = {a, b, n / 2, (n + 1) / 2};
    for (std::int64_t t : candidates) {
        if (t < a || t > b) continue;
        best = std::max(best, std::min(t, n - t));
    }
    return best;
}

}  // namespace

PrivacyBudget compose(std::span<const PrivacyBudget> parts) {
    if (parts.empty()) throw std::invalid_argument("compose: empty sequence");
    PrivacyBudget total;
    for (const auto& b : parts) {
        total.epsilon += b.epsilon;
        total.delta += b.delta;
    }
    return total;
}

SortedIntDataset SortedIntDataset::from_values(std::vector<std::int64_t> vals, std::int64_t bound) {
    if (bound < 1) throw std::invalid_argument("SortedIntDataset: bound must be >= 1");
    std::sort(vals.begin(), vals.end());
    if (!vals.empty() && (vals.front() < 1 || vals.back() > bound))
        throw std::invalid_argument("SortedIntDataset: values must lie in [1, bound]");
    return SortedIntDataset{std::move(vals), bound};
}

std::int64_t two_sided_geometric(double epsilon, Rng& rng) {
    check_epsilon(epsilon);
    const double gamma = std::exp(-epsilon);
    return geometric_tail_draw(gamma, rng) - geometric_tail_draw(gamma, rng);
}

double two_sided_geometric_pmf(double epsilon, std::int64_t z) {
    check_epsilon(epsilon);
    const double gamma = std::exp(-epsilon);
    return (1.0 - gamma) / (1.0 + gamma) * std::pow(gamma, static_cast<double>(std::llabs(z)));
}

double two_sided_geometric_tail(double epsilon, std::int64_t t) {
    check_epsilon(epsilon);
    if (t < 0) return 1.0;
    const double gamma = std::exp(-epsilon);
    return 2.0 * std::pow(gamma, static_cast<double>(t + 1)) / (1.0 + gamma);
}

std::int64_t noisy_count(std::int64_t count, double epsilon, Rng& rng) {
    if (count < 0) throw std::invalid_argument("noisy_count: negative count");
    return count + two_sided_geometric(epsilon, rng);
}

std::int64_t interior_point_score(const SortedIntDataset& s, std::int64_t r) {
    const auto n = static_cast<std::int64_t>(s.values.size());
    if (r < 1 || r > s.bound) return 0;
    // Valid ranks t satisfy x_(t) <= r <= x_(t+1), i.e. #(x < r) <= t <= #(x <= r).
    const std::int64_t lt = std::lower_bound(s.values.begin(), s.values.end(), r) - s.values.begin();
    const std::int64_t le = std::upper_bound(s.values.begin(), s.values.end(), r) - s.values.begin();
    return best_rank_score(lt, le, n);
}

std::vector<ScoreSegment> interior_point_segments(const SortedIntDataset& s) {
    const auto n = static_cast<std::int64_t>(s.values.size());
    std::vector<ScoreSegment> segs;
    std::int64_t cursor = 1;  // next domain point not yet covered
    std::int64_t seen = 0;    // count of values strictly below cursor's run
    std::size_t idx = 0;
    while (idx < s.values.size()) {
        const std::int64_t v = s.values[idx];
        std::size_t run = idx;
        while (run < s.values.size() && s.values[run] == v) ++run;
        const auto multiplicity = static_cast<std::int64_t>(run - idx);
        if (cursor < v)  // open gap strictly between data values: ranks pinned at `seen`
            segs.push_back({cursor, v - 1, std::min(seen, n - seen)});
        segs.push_back({v, v, best_rank_score(seen, seen + multiplicity, n)});
        seen += multiplicity;
        cursor = v + 1;
        idx = run;
    }
    if (cursor <= s.bound) segs.push_back({cursor, s.bound, 0});
    return segs;
}

std::int64_t exp_mech_interior_point(const SortedIntDataset& s, double epsilon, Rng& rng) {
    check_epsilon(epsilon);
    if (s.values.empty()) throw std::invalid_argument("exp_mech_interior_point: empty dataset");
    const auto segs = interior_point_segments(s);

    double max_logw = -1.0 / 0.0;
    std::vector<double> logw(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double len = static_cast<double>(segs[i].hi - segs[i].lo + 1);
        logw[i] = 0.5 * epsilon * static_cast<double>(segs[i].score) + std::log(len);
        max_logw = std::max(max_logw, logw[i]);
    }
    double total = 0.0;
    std::vector<double> w(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        w[i] = std::exp(logw[i] - max_logw);
        total += w[i];
    }
    double x = rng.next_unit() * total;
    std::size_t pick = segs.size() - 1;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        if (x < w[i]) {
            pick = i;
            break;
        }
        x -= w[i];
    }
    const std::int64_t len = segs[pick].hi - segs[pick].lo + 1;
    return segs[pick].lo + static_cast<std::int64_t>(rng.uniform_below(static_cast<std::uint64_t>(len)));
}

}  // namespace ows
