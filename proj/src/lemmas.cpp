#include "ows/lemmas.hpp"

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace ows {

namespace {

std::uint64_t binom(std::uint32_t n, std::uint32_t k) {
    if (k > n) return 0;
    std::uint64_t r = 1;
    for (std::uint32_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// Element signatures: bit i of sig[x] says x is in set i. Separation of every
// ordered pair is exactly pairwise incomparability of the signatures.
void element_signatures(std::span<const std::uint32_t> sets, std::uint32_t m,
                        std::uint32_t* sig) {
    for (std::uint32_t x = 0; x < m; ++x) sig[x] = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::uint32_t x = 0; x < m; ++x)
            if ((sets[i] >> x) & 1) sig[x] |= std::uint32_t{1} << i;
    }
}

bool signatures_antichain(const std::uint32_t* sig, std::uint32_t m) {
    for (std::uint32_t x = 0; x < m; ++x) {
        for (std::uint32_t y = 0; y < m; ++y) {
            if (x == y) continue;
            if ((sig[x] & ~sig[y]) == 0) return false;  // nothing separates (x, y)
        }
    }
    return true;
}

// Walks every collection of `n` distinct subsets of [m] (as an ordered
// combination) and reports whether any separates all ordered pairs.
bool any_collection_separates(std::uint32_t m, std::uint32_t n, std::uint64_t& checked) {
    const std::uint32_t subsets = std::uint32_t{1} << m;
    std::vector<std::uint32_t> pick(n);
    std::vector<std::uint32_t> sets(n);
    std::uint32_t sig[32];
    // combination enumeration over subset codes 0 .. 2^m - 1
    for (std::uint32_t i = 0; i < n; ++i) pick[i] = i;
    if (n > subsets) return false;
    for (;;) {
        for (std::uint32_t i = 0; i < n; ++i) sets[i] = pick[i];
        ++checked;
        element_signatures(std::span<const std::uint32_t>(sets.data(), n), m, sig);
        if (signatures_antichain(sig, m)) return true;
        // advance combination
        std::int32_t pos = static_cast<std::int32_t>(n) - 1;
        while (pos >= 0 && pick[pos] == subsets - n + pos) --pos;
        if (pos < 0) break;
        ++pick[pos];
        for (std::uint32_t i = pos + 1; i < n; ++i) pick[i] = pick[i - 1] + 1;
    }
    return false;
}

// Smallest n whose middle binomial reaches m, realized by assigning distinct
// floor(n/2)-subsets of [n] as element signatures.
std::vector<std::uint32_t> antichain_witness(std::uint32_t m, std::uint32_t& out_n) {
    std::uint32_t n = 1;
    while (binom(n, n / 2) < m) ++n;
    out_n = n;
    std::vector<std::uint32_t> sig;
    for (std::uint32_t code = 0; sig.size() < m && code < (std::uint32_t{1} << n); ++code) {
        if (static_cast<std::uint32_t>(std::popcount(code)) == n / 2) sig.push_back(code);
    }
    std::vector<std::uint32_t> sets(n, 0);
    for (std::uint32_t x = 0; x < m; ++x)
        for (std::uint32_t i = 0; i < n; ++i)
            if ((sig[x] >> i) & 1) sets[i] |= std::uint32_t{1} << x;
    return sets;
}

}  // namespace

bool separates_all_ordered_pairs(std::span<const std::uint32_t> sets, std::uint32_t m) {
    if (m > 32) throw std::invalid_argument("separates_all_ordered_pairs: m too large");
    std::uint32_t sig[32];
    element_signatures(sets, m, sig);
    return signatures_antichain(sig, m);
}

SeparationReport verify_separation_lemma(std::uint32_t m_max) {
    if (m_max < 2 || m_max > 8)
        throw std::invalid_argument("verify_separation_lemma: m_max must lie in [2, 8]");
    SeparationReport report;
    report.ok = true;
    for (std::uint32_t m = 2; m <= m_max; ++m) {
        SeparationCase c;
        c.m = m;
        // n is ruled out by the bound exactly when n < log2(m) + 1, i.e. 2^(n-1) < m.
        std::uint32_t nf = 0;
        while ((std::uint64_t{1} << nf) < m) ++nf;  // smallest nf with 2^nf >= m
        c.max_forbidden_n = nf;                     // then 2^(nf-1) < m <= 2^nf
        c.impossibility_verified = true;
        for (std::uint32_t n = 1; n <= c.max_forbidden_n; ++n) {
            if (any_collection_separates(m, n, c.collections_checked)) {
                c.impossibility_verified = false;
                break;
            }
        }
        std::uint32_t wn = 0;
        c.witness = antichain_witness(m, wn);
        c.witness_verified = separates_all_ordered_pairs(c.witness, m);
        report.ok = report.ok && c.impossibility_verified && c.witness_verified;
        report.cases.push_back(std::move(c));
    }
    return report;
}

bool generates_set(std::span<const std::uint32_t> sets, std::uint32_t universe,
                   std::uint32_t t_mask) {
    const std::uint32_t full = universe >= 32 ? ~std::uint32_t{0}
                                              : (std::uint32_t{1} << universe) - 1;
    const std::uint32_t outside = full & ~t_mask;
    for (std::uint32_t x = 0; x < universe; ++x) {
        if (!((t_mask >> x) & 1)) continue;
        for (std::uint32_t y = 0; y < universe; ++y) {
            if (!((outside >> y) & 1)) continue;
            bool separated = false;
            for (const std::uint32_t s : sets) {
                if (((s >> x) & 1) && !((s >> y) & 1)) {
                    separated = true;
                    break;
                }
            }
            if (!separated) return false;
        }
    }
    return true;
}

std::uint64_t count_generated_sets(std::span<const std::uint32_t> sets, std::uint32_t universe) {
    const std::uint32_t total = std::uint32_t{1} << universe;
    std::uint64_t count = 0;
    for (std::uint32_t t = 0; t < total; ++t)
        if (generates_set(sets, universe, t)) ++count;
    return count;
}

namespace {

// Complement-closed route from the proof: r bounds the largest
// pairwise-separated set, and membership on such a set pins T down.
bool check_closed_route(std::span<const std::uint32_t> sets, std::uint32_t u) {
    const std::uint32_t full = (std::uint32_t{1} << u) - 1;
    std::vector<std::uint32_t> closed(sets.begin(), sets.end());
    for (const std::uint32_t s : sets) {
        const std::uint32_t comp = full & ~s;
        if (std::find(closed.begin(), closed.end(), comp) == closed.end()) closed.push_back(comp);
    }
    const auto nc = static_cast<std::uint32_t>(closed.size());

    // Largest pairwise-separated subset of the universe under the closed family.
    std::vector<std::uint32_t> sig(u, 0);
    for (std::size_t i = 0; i < closed.size(); ++i)
        for (std::uint32_t x = 0; x < u; ++x)
            if ((closed[i] >> x) & 1) sig[x] |= std::uint32_t{1} << i;
    std::uint32_t r = 0;
    for (std::uint32_t subset = 0; subset <= full; ++subset) {
        bool anti = true;
        for (std::uint32_t x = 0; x < u && anti; ++x) {
            if (!((subset >> x) & 1)) continue;
            for (std::uint32_t y = 0; y < u; ++y) {
                if (x == y || !((subset >> y) & 1)) continue;
                if ((sig[x] & ~sig[y]) == 0) {
                    anti = false;
                    break;
                }
            }
        }
        if (anti) r = std::max(r, static_cast<std::uint32_t>(std::popcount(subset)));
    }

    const std::uint64_t closed_count = count_generated_sets(closed, u);
    const std::uint64_t raw_count = count_generated_sets(sets, u);
    if (nc >= 1 && r > (std::uint64_t{1} << (nc - 1))) return false;
    if (r < 63 && closed_count > (std::uint64_t{1} << r)) return false;
    return raw_count <= closed_count;  // more sets only makes generation easier
}

}  // namespace

GenerationReport verify_generation_bound(std::uint32_t universe_size, std::uint32_t n_max, Rng& rng,
                                         std::size_t samples_per_case) {
    if (universe_size < 1 || universe_size > 12)
        throw std::invalid_argument("verify_generation_bound: universe must lie in [1, 12]");
    if (n_max > 3) throw std::invalid_argument("verify_generation_bound: n_max must be <= 3");

    GenerationReport report;
    report.ok = true;
    for (std::uint32_t u = 1; u <= universe_size; ++u) {
        const std::uint64_t subsets = std::uint64_t{1} << u;
        for (std::uint32_t n = 0; n <= n_max; ++n) {
            GenerationCase c;
            c.universe = u;
            c.n = n;
            c.bound = std::uint64_t{1} << (std::uint64_t{1} << n);
            c.ok = true;

            std::uint64_t combos = 1;
            for (std::uint32_t i = 0; i < n; ++i) combos = combos * (subsets - i) / (i + 1);
            // Budget: total generated-set enumerations stay near 2^u * 3e4.
            c.exhaustive = combos * n <= 30000 || n == 0;

            auto run_one = [&](std::span<const std::uint32_t> sets) {
                ++c.collections_checked;
                const std::uint64_t cnt = count_generated_sets(sets, u);
                c.max_generated = std::max(c.max_generated, cnt);
                if (cnt > c.bound) c.ok = false;
                if (n >= 1 && !check_closed_route(sets, u)) c.ok = false;
            };

            if (c.exhaustive) {
                std::vector<std::uint32_t> pick(n);
                for (std::uint32_t i = 0; i < n; ++i) pick[i] = i;
                if (n == 0) {
                    run_one({});
                } else if (n <= subsets) {
                    for (;;) {
                        run_one(pick);
                        std::int32_t pos = static_cast<std::int32_t>(n) - 1;
                        while (pos >= 0 &&
                               pick[pos] == static_cast<std::uint32_t>(subsets - n + pos))
                            --pos;
                        if (pos < 0) break;
                        ++pick[pos];
                        for (std::uint32_t i = pos + 1; i < n; ++i) pick[i] = pick[i - 1] + 1;
                    }
                }
            } else {
                std::vector<std::uint32_t> sets(n);
                for (std::size_t trial = 0; trial < samples_per_case; ++trial) {
                    for (auto& s : sets)
                        s = static_cast<std::uint32_t>(rng.uniform_below(subsets));
                    run_one(sets);
                }
            }
            report.ok = report.ok && c.ok;
            report.cases.push_back(c);
        }
    }
    return report;
}

}  // namespace ows
