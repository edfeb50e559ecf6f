#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "ows/dp_select.hpp"
#include "ows/rng.hpp"
#include "oracles.hpp"

using namespace ows;

TEST_CASE("rank window arithmetic") {
    RankWindow w = robust_min_rank_window(40, 0.1);
    CHECK(w.lo == 4);
    CHECK(w.hi == 8);
    w = robust_min_rank_window(100, 0.1);
    CHECK(w.lo == 10);
    CHECK(w.hi == 20);
    w = robust_min_rank_window(40, 0.35);
    CHECK(w.lo == 14);
    CHECK(w.hi == 28);
    CHECK_THROWS_AS(robust_min_rank_window(10, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(robust_min_rank_window(10, 0.6), std::invalid_argument);
}

TEST_CASE("robust_min on an all-equal dataset is forced") {
    // Rank window all 5s; with this n and epsilon the 5-point carries weight
    // e^100 against ~2^20 of off-range mass, so the answer is pinned.
    const auto data = SortedIntDataset::from_values(std::vector<std::int64_t>(1000, 5), 1 << 20);
    const RobustMinParams prm{0.1, 0.05, {4.0, 0.0}, 1 << 20};
    Rng rng(1);
    for (int i = 0; i < 50; ++i) CHECK(robust_min_pure(data, prm, rng) == 5);
}

TEST_CASE("robust_min degenerate window raises") {
    const auto data = SortedIntDataset::from_values({3, 8, 9}, 100);
    const RobustMinParams prm{0.1, 0.05, {1.0, 0.0}, 100};
    Rng rng(2);
    // ceil(0.3) = 1 > floor(0.6) = 0
    CHECK_THROWS_AS(robust_min_pure(data, prm, rng), std::invalid_argument);
}

TEST_CASE("robust_min satisfies both definitional conditions at the stated rate") {
    const std::int64_t bound = 1 << 20;
    const double alpha = 0.1, beta = 0.05;
    const std::size_t n = 1000;
    const RobustMinParams prm{alpha, beta, {1.0, 0.0}, bound};
    Rng rng(33);
    const std::size_t runs = 1000;
    std::size_t violations = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        std::vector<std::int64_t> vals;
        for (std::size_t i = 0; i < n; ++i) vals.push_back(1 + rng.uniform_below(bound));
        const auto data = SortedIntDataset::from_values(std::move(vals), bound);
        const std::int64_t r = robust_min_pure(data, prm, rng);
        if (!robust_min_holds(data, alpha, r)) ++violations;
    }
    CHECK(double(violations) / double(runs) <= beta + 0.02);
}

TEST_CASE("robust_min_approx delegates to the pure mechanism") {
    Rng a(7), b(7);
    std::vector<std::int64_t> vals;
    Rng gen(8);
    for (int i = 0; i < 200; ++i) vals.push_back(1 + gen.uniform_below(1000));
    const auto data = SortedIntDataset::from_values(std::move(vals), 1000);
    const RobustMinParams prm{0.1, 0.05, {1.0, 1e-6}, 1000};
    for (int i = 0; i < 20; ++i) CHECK(robust_min_approx(data, prm, a) == robust_min_pure(data, prm, b));

    const auto equal = SortedIntDataset::from_values(std::vector<std::int64_t>(1000, 9), 1000);
    const RobustMinParams strong{0.1, 0.05, {4.0, 1e-6}, 1000};
    CHECK(robust_min_approx(equal, strong, a) == 9);
}

TEST_CASE("frequency_table counts naively") {
    const std::vector<std::string> items{"b", "a", "b", "c", "b"};
    const auto table = frequency_table(items);
    CHECK(table.at("a") == 1);
    CHECK(table.at("b") == 3);
    CHECK(table.at("c") == 1);
    CHECK(table.size() == 3);
}

TEST_CASE("most_frequent_pure: empty input yields the sentinel") {
    Rng rng(4);
    const std::vector<std::string> empty;
    for (int i = 0; i < 10; ++i) {
        const FreqOutcome out = most_frequent_pure(empty, 1024, 1.0, 0.05, rng);
        CHECK_FALSE(out.item.has_value());
    }
}

TEST_CASE("most_frequent_pure: a dominant value wins at the stated rate") {
    const std::uint64_t domain = 1024;
    const double eps = 1.0, beta = 0.05;
    const auto need = static_cast<std::size_t>(
        std::ceil(4.0 * std::log(double(domain) / beta) / eps));
    std::vector<std::string> items(need, "the-mode");
    Rng rng(5);
    const std::size_t runs = 4000;
    std::size_t hits = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const FreqOutcome out = most_frequent_pure(items, domain, eps, beta, rng);
        if (out.item.has_value() && *out.item == "the-mode") ++hits;
    }
    CHECK(double(hits) / double(runs) >= 1.0 - beta);
}

TEST_CASE("most_frequent_pure: tied counts are exactly symmetric") {
    // Same score means the constructed weights are identical, so the two
    // items' probabilities agree exactly; empirically the split stays near
    // one half.
    std::vector<std::string> items;
    for (int i = 0; i < 30; ++i) {
        items.push_back("left");
        items.push_back("right");
    }
    const auto table = frequency_table(items);
    CHECK(table.at("left") == table.at("right"));
    Rng rng(6);
    const std::size_t runs = 20000;
    std::size_t left = 0, decided = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const FreqOutcome out = most_frequent_pure(items, 64, 0.5, 0.05, rng);
        if (!out.item.has_value()) continue;
        ++decided;
        if (*out.item == "left") ++left;
    }
    REQUIRE(decided > 0);
    const double frac = double(left) / double(decided);
    CHECK(std::abs(frac - 0.5) <= oracle::binomial_band(0.5, decided, 4.0));
}

// Textbook route: enumerate the whole domain, score every item by a naive
// count, weight exp(eps * score / 2), lump weight-1 unseen items. Integer
// scores equal means the two constructions are the same distribution, total
// variation zero; the empirical check then ties the sampler to it.
TEST_CASE("most_frequent_pure equals the enumerated exponential mechanism") {
    const std::uint64_t domain = 8;
    std::vector<std::string> universe;
    for (std::uint64_t v = 0; v < domain; ++v) universe.push_back(std::string(1, char('a' + v)));
    const std::vector<std::string> items{"a", "a", "a", "a", "b", "b", "c"};
    const double eps = 1.0;

    std::map<std::string, std::int64_t> naive;
    for (const auto& x : universe) {
        std::int64_t c = 0;
        for (const auto& it : items)
            if (it == x) ++c;
        if (c > 0) naive[x] = c;
    }
    CHECK(naive == frequency_table(items));

    double z = 0.0;
    std::map<std::string, double> prob;
    double unseen_prob = 0.0;
    for (const auto& x : universe) {
        const double w = std::exp(eps * double(naive.count(x) ? naive[x] : 0) / 2.0);
        z += w;
    }
    for (const auto& x : universe) {
        const double w = std::exp(eps * double(naive.count(x) ? naive[x] : 0) / 2.0);
        if (naive.count(x))
            prob[x] = w / z;
        else
            unseen_prob += w / z;
    }

    Rng rng(9);
    const std::size_t runs = 200000;
    std::map<std::string, std::size_t> hist;
    std::size_t sentinel = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const FreqOutcome out = most_frequent_pure(items, domain, eps, 0.05, rng);
        if (out.item.has_value())
            ++hist[*out.item];
        else
            ++sentinel;
    }
    for (const auto& [x, p] : prob)
        CHECK(std::abs(double(hist[x]) / double(runs) - p) <=
              oracle::binomial_band(p, runs, 4.5));
    CHECK(std::abs(double(sentinel) / double(runs) - unseen_prob) <=
          oracle::binomial_band(unseen_prob, runs, 4.5));
}

TEST_CASE("most_frequent_pure validates inputs") {
    Rng rng(10);
    const std::vector<std::string> items{"a", "b", "c"};
    CHECK_THROWS_AS(most_frequent_pure(items, 2, 1.0, 0.05, rng), std::invalid_argument);
    CHECK_THROWS_AS(most_frequent_pure(items, 8, -1.0, 0.05, rng), std::invalid_argument);
    CHECK_THROWS_AS(most_frequent_pure(items, 8, 1.0, 0.0, rng), std::invalid_argument);
}

TEST_CASE("stable histogram threshold formula") {
    CHECK(stable_histogram_threshold(1.0, 1e-6) ==
          1 + std::int64_t(std::ceil(2.0 * std::log(2e6) / 1.0)));
    CHECK_THROWS_AS(stable_histogram_threshold(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("most_frequent_approx: empty input yields the sentinel always") {
    Rng rng(11);
    const std::vector<std::string> empty;
    for (int i = 0; i < 100; ++i)
        CHECK_FALSE(most_frequent_approx(empty, 1.0, 1e-6, 0.05, rng).item.has_value());
}

TEST_CASE("most_frequent_approx: a single heavy item survives and wins") {
    const double eps = 1.0, delta = 1e-6, beta = 0.05;
    const std::int64_t tau = stable_histogram_threshold(eps, delta);
    std::vector<std::string> items(static_cast<std::size_t>(3 * tau), "heavy");
    Rng rng(12);
    const std::size_t runs = 10000;
    std::size_t hits = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const FreqOutcome out = most_frequent_approx(items, eps, delta, beta, rng);
        if (out.item.has_value() && *out.item == "heavy") ++hits;
    }
    // analytic: failure only if noise <= tau - 3tau; geometric tail is tiny
    CHECK(two_sided_geometric_tail(eps / 2.0, 2 * tau - 1) / 2.0 <= beta);
    CHECK(double(hits) / double(runs) >= 1.0 - beta);
}

TEST_CASE("most_frequent_approx: a GAP lead hands the mode the argmax") {
    const double eps = 1.0, delta = 1e-4, beta = 0.05;
    const std::size_t runners = 6;
    const std::int64_t base = 40;
    std::vector<std::string> items;
    for (std::size_t r = 0; r < runners; ++r)
        for (std::int64_t c = 0; c < base; ++c) items.push_back("runner" + std::to_string(r));
    const auto n_items = items.size() + 0;
    const std::int64_t gap = static_cast<std::int64_t>(
        std::ceil(8.0 * std::log(4.0 * double(n_items) / (delta * beta)) / eps));
    for (std::int64_t c = 0; c < base + gap; ++c) items.push_back("mode");

    // union-bound oracle: P[mode loses to any runner] + P[mode below threshold]
    const double tail_each = two_sided_geometric_tail(eps / 2.0, gap - 1) / 2.0;
    const std::int64_t tau = stable_histogram_threshold(eps, delta);
    const double below = two_sided_geometric_tail(eps / 2.0, base + gap - tau - 1) / 2.0;
    CHECK(double(runners) * tail_each + below <= beta);

    Rng rng(13);
    const std::size_t runs = 4000;
    std::size_t hits = 0;
    for (std::size_t run = 0; run < runs; ++run) {
        const FreqOutcome out = most_frequent_approx(items, eps, delta, beta, rng);
        if (out.item.has_value() && *out.item == "mode") ++hits;
    }
    CHECK(double(hits) / double(runs) >= 1.0 - beta);
}

TEST_CASE("stable histogram survival flips only where neighboring counts differ") {
    // Neighboring multisets: replace one "b" with an "a".
    const std::vector<std::string> s1{"a", "a", "b", "b", "b", "c"};
    const std::vector<std::string> s2{"a", "a", "a", "b", "b", "c"};
    const auto t1 = frequency_table(s1);
    const auto t2 = frequency_table(s2);
    const std::int64_t tau = 3;
    for (const auto& item : {std::string("a"), std::string("b"), std::string("c")}) {
        const std::int64_t c1 = t1.count(item) ? t1.at(item) : 0;
        const std::int64_t c2 = t2.count(item) ? t2.at(item) : 0;
        CHECK(std::llabs(c1 - c2) <= 1);
        for (std::int64_t noise = -10; noise <= 10; ++noise) {
            const bool survive1 = c1 + noise >= tau;
            const bool survive2 = c2 + noise >= tau;
            if (survive1 != survive2) CHECK(std::llabs(c1 - c2) == 1);
        }
    }
}

TEST_CASE("selection outcomes are total on every valid input") {
    Rng rng(14);
    for (int iter = 0; iter < 300; ++iter) {
        std::vector<std::string> items;
        const std::size_t n = rng.uniform_below(12);
        for (std::size_t i = 0; i < n; ++i)
            items.push_back(std::string(1, char('a' + rng.uniform_below(5))));
        const FreqOutcome pure = most_frequent_pure(items, 64, 0.5, 0.1, rng);
        const FreqOutcome approx = most_frequent_approx(items, 0.5, 1e-6, 0.1, rng);
        if (pure.item.has_value()) CHECK_FALSE(pure.item->empty());
        if (approx.item.has_value()) CHECK_FALSE(approx.item->empty());
    }
}
