#include "ows/learner.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "ows/dp_select.hpp"

namespace ows {

namespace {

void check_config(const LearnConfig& cfg, bool pure) {
    if (!(cfg.alpha >= 1e-9) || !(cfg.alpha < 1.0))
        throw std::invalid_argument("LearnConfig: alpha must lie in [1e-9, 1)");
    if (!(cfg.beta > 0.0) || !(cfg.beta < 1.0))
        throw std::invalid_argument("LearnConfig: beta must lie in (0, 1)");
    if (!(cfg.budget.epsilon > 0.0))
        throw std::invalid_argument("LearnConfig: epsilon must be positive");
    if (pure && cfg.budget.delta != 0.0)
        throw std::invalid_argument("learn_pure: requires delta = 0");
    if (!pure && !(cfg.budget.delta > 0.0))
        throw std::invalid_argument("learn_approx: requires delta > 0");
    if (cfg.params.d == 0) throw std::invalid_argument("LearnConfig: params unset");
    if (!(cfg.sample_constant > 0.0))
        throw std::invalid_argument("LearnConfig: sample_constant must be positive");
}

struct Positive {
    std::uint64_t index;
    const LabeledExample* ex;
};

// Shared pipeline; `approx` switches the two selection subroutines.
LearnResult learn_impl(std::span<const LabeledExample> sample, const LearnConfig& cfg, Rng& rng,
                       bool approx) {
    check_config(cfg, !approx);
    const Params& p = cfg.params;
    const double eps3 = cfg.budget.epsilon / 3.0;
    const double beta6 = cfg.beta / 6.0;
    const double half_delta = cfg.budget.delta / 2.0;

    LearnResult result;
    result.budget_spent = cfg.budget;
    result.stage_budgets = {{eps3, 0.0}, {eps3, half_delta}, {eps3, half_delta}};

    for (const auto& ex : sample) {
        if (ex.x.index >= p.index_count() || ex.x.sigma.bit_size() != p.sigma_bits())
            throw std::invalid_argument("learn: example does not match params");
    }

    std::vector<Positive> positives;
    for (const auto& ex : sample)
        if (ex.label == 1) positives.push_back({ex.x.index, &ex});
    std::stable_sort(positives.begin(), positives.end(),
                     [](const Positive& a, const Positive& b) { return a.index < b.index; });

    const auto n = static_cast<std::uint64_t>(sample.size());
    const auto m = static_cast<std::int64_t>(positives.size());

    // Step 2: noisy gate on the positive count.
    const std::int64_t m_hat = noisy_count(m, eps3, rng);
    if (exact_le_scaled(3 * m_hat, cfg.alpha, n)) {
        result.hypothesis = Hypothesis::all_zero();
        return result;
    }

    // Step 3: private robust minimum of the index list, shifted to [1, 2^k].
    // The gate guarantees m_hat >= 1 here.
    double alpha_rm = cfg.alpha * static_cast<double>(n) / (6.0 * static_cast<double>(m_hat));
    alpha_rm = std::min(alpha_rm, 0.5);
    std::vector<std::int64_t> shifted;
    shifted.reserve(positives.size());
    for (const auto& pos : positives) shifted.push_back(static_cast<std::int64_t>(pos.index) + 1);
    const auto bound = static_cast<std::int64_t>(p.index_count());

    std::uint64_t i_star = 0;
    try {
        const auto data = SortedIntDataset::from_values(std::move(shifted), bound);
        const RobustMinParams rm{alpha_rm, beta6, {eps3, half_delta}, bound};
        const std::int64_t r =
            approx ? robust_min_approx(data, rm, rng) : robust_min_pure(data, rm, rng);
        i_star = static_cast<std::uint64_t>(r - 1);
    } catch (const std::invalid_argument&) {
        // Degenerate rank window (too few points for the fraction): fall back.
        result.hypothesis = Hypothesis::all_zero();
        return result;
    }

    // Step 4: map every positive at or below the anchor through forward
    // computation; the anchor's own examples contribute their own pair.
    std::vector<std::string> mapped;
    for (const auto& pos : positives) {
        if (pos.index > i_star) break;
        if (pos.index < i_star) {
            const ForwardResult fr = compute_forward(p, i_star, pos.index, pos.ex->x.sigma);
            mapped.push_back(pack_sigma_bit(fr.sigma, fr.bit));
        } else {
            mapped.push_back(pack_sigma_bit(pos.ex->x.sigma, pos.ex->label));
        }
    }

    // Step 5: private mode of the mapped pairs. The domain parameter covers
    // the 2^(k+1) anchor pairs the realizable world can produce and always
    // exceeds the observed support.
    const std::uint64_t domain =
        std::max<std::uint64_t>(p.index_count() * 2, static_cast<std::uint64_t>(n) + 1);
    const FreqOutcome mode =
        approx ? most_frequent_approx(mapped, eps3, half_delta, beta6, rng)
               : most_frequent_pure(mapped, domain, eps3, beta6, rng);

    if (!mode.item.has_value()) {
        result.hypothesis = Hypothesis::all_zero();
        return result;
    }
    const auto [sigma_star, b_star] = unpack_sigma_bit(p, *mode.item);
    result.hypothesis = Hypothesis::threshold(i_star, sigma_star, b_star);
    return result;
}

}  // namespace

Hypothesis Hypothesis::threshold(std::uint64_t i_star, BitString sigma_star, std::uint8_t b_star) {
    Hypothesis h;
    h.kind = Kind::threshold;
    h.i_star = i_star;
    h.sigma_star = std::move(sigma_star);
    h.b_star = b_star & 1;
    return h;
}

std::vector<std::uint8_t> Hypothesis::to_bytes(const Params& p) const {
    if (kind == Kind::all_zero) return {0};
    BitString packed(p.d + 1);  // k + (d-k) + 1 bits
    packed.write_bits(0, i_star, p.k);
    for (std::size_t pos = 0; pos < p.sigma_bits(); pos += 64) {
        const std::size_t width = std::min<std::size_t>(64, p.sigma_bits() - pos);
        packed.write_bits(p.k + pos, sigma_star.read_bits(pos, width), width);
    }
    packed.set_bit(p.d, b_star);
    std::vector<std::uint8_t> out{1};
    const auto body = packed.bytes();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Hypothesis Hypothesis::from_bytes(const Params& p, std::span<const std::uint8_t> data) {
    if (data.empty()) throw std::invalid_argument("Hypothesis: empty byte stream");
    if (data[0] == 0) {
        if (data.size() != 1) throw std::invalid_argument("Hypothesis: trailing bytes");
        return all_zero();
    }
    if (data[0] != 1) throw std::invalid_argument("Hypothesis: unknown tag");
    const std::size_t body_bytes = (p.d + 1 + 7) / 8;
    if (data.size() != 1 + body_bytes) throw std::invalid_argument("Hypothesis: length mismatch");
    const BitString packed = BitString::from_bytes(data.data() + 1, body_bytes, p.d + 1);
    const std::uint64_t i_star = packed.read_bits(0, p.k);
    BitString sigma(p.sigma_bits());
    for (std::size_t pos = 0; pos < p.sigma_bits(); pos += 64) {
        const std::size_t width = std::min<std::size_t>(64, p.sigma_bits() - pos);
        sigma.write_bits(pos, packed.read_bits(p.k + pos, width), width);
    }
    return threshold(i_star, std::move(sigma), packed.bit(p.d) ? 1 : 0);
}

std::string Hypothesis::to_json(const Params& p) const {
    nlohmann::ordered_json j;
    j["d"] = p.d;
    j["k"] = p.k;
    if (kind == Kind::all_zero) {
        j["variant"] = "all_zero";
    } else {
        j["variant"] = "threshold";
        j["i_star"] = i_star;
        j["sigma_star_hex"] = sigma_star.to_hex();
        j["b_star"] = b_star;
    }
    return j.dump();
}

Hypothesis Hypothesis::from_json(const Params& p, const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.at("variant") == "all_zero") return all_zero();
    return threshold(j.at("i_star").get<std::uint64_t>(),
                     BitString::from_hex(j.at("sigma_star_hex").get<std::string>(), p.sigma_bits()),
                     j.at("b_star").get<std::uint8_t>());
}

LearnResult learn_pure(std::span<const LabeledExample> sample, const LearnConfig& cfg, Rng& rng) {
    return learn_impl(sample, cfg, rng, false);
}

LearnResult learn_approx(std::span<const LabeledExample> sample, const LearnConfig& cfg, Rng& rng) {
    return learn_impl(sample, cfg, rng, true);
}

std::uint8_t hypothesis_eval(const Params& p, const Hypothesis& h, const Example& x) {
    if (h.kind == Hypothesis::Kind::all_zero) return 0;
    if (x.index < h.i_star) return 0;
    if (x.index == h.i_star) return (x.sigma == h.sigma_star) ? h.b_star : 0;
    const ForwardResult fr = compute_forward(p, x.index, h.i_star, h.sigma_star);
    return (x.sigma == fr.sigma) ? fr.bit : 0;
}

std::uint64_t required_sample_size(const Params& p, const LearnConfig& cfg) {
    const double scale = cfg.sample_constant *
                         (std::sqrt(static_cast<double>(p.d)) + std::log(1.0 / cfg.beta)) /
                         (cfg.alpha * cfg.budget.epsilon);
    const double floor_term = 8.0 * std::log(2.0 / cfg.beta) / cfg.alpha;
    return static_cast<std::uint64_t>(std::max(std::ceil(scale), std::ceil(floor_term)));
}

std::string pack_sigma_bit(const BitString& sigma, std::uint8_t bit) {
    std::string out = sigma.byte_string();
    out.push_back(static_cast<char>(bit & 1));
    return out;
}

std::pair<BitString, std::uint8_t> unpack_sigma_bit(const Params& p, const std::string& item) {
    const std::size_t body = (p.sigma_bits() + 7) / 8;
    if (item.size() != body + 1) throw std::invalid_argument("unpack_sigma_bit: length mismatch");
    const BitString sigma = BitString::from_bytes(
        reinterpret_cast<const std::uint8_t*>(item.data()), body, p.sigma_bits());
    return {sigma, static_cast<std::uint8_t>(item.back() & 1)};
}

bool exact_le_scaled(std::int64_t lhs, double a, std::uint64_t n) {
    if (!(a > 0.0) || !(a < 1.0)) throw std::invalid_argument("exact_le_scaled: a must be in (0,1)");
    if (n > (std::uint64_t{1} << 40)) throw std::invalid_argument("exact_le_scaled: n too large");
    int e = 0;
    const double fr = std::frexp(a, &e);           // a = fr * 2^e, fr in [0.5, 1)
    const auto mant = static_cast<std::int64_t>(std::ldexp(fr, 53));  // exact
    const int shift = 53 - e;                      // a = mant / 2^shift, shift >= 53
    if (shift > 120) return lhs <= 0;              // a below any representable ratio of interest
    const __int128 rhs = static_cast<__int128>(mant) * static_cast<__int128>(n);
    if (lhs <= 0) return rhs >= 0;
    const __int128 q = rhs >> shift;               // floor(a * n)
    return static_cast<__int128>(lhs) <= q;
}

std::vector<LabeledExample> load_dataset_jsonl(const Params& p, const std::string& text) {
    std::vector<LabeledExample> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& err) {
            throw std::invalid_argument("dataset line " + std::to_string(lineno) + ": " + err.what());
        }
        LabeledExample ex;
        ex.x.index = j.at("i").get<std::uint64_t>();
        ex.x.sigma = BitString::from_hex(j.at("sigma_hex").get<std::string>(), p.sigma_bits());
        ex.label = j.at("label").get<std::uint8_t>();
        if (ex.x.index >= p.index_count())
            throw std::invalid_argument("dataset line " + std::to_string(lineno) +
                                        ": index out of range");
        if (ex.label > 1)
            throw std::invalid_argument("dataset line " + std::to_string(lineno) + ": label not a bit");
        out.push_back(std::move(ex));
    }
    return out;
}

std::string save_dataset_jsonl(const Params& p, std::span<const LabeledExample> sample) {
    std::ostringstream out;
    for (const auto& ex : sample) {
        nlohmann::ordered_json j;
        j["i"] = ex.x.index;
        j["sigma_hex"] = ex.x.sigma.to_hex();
        j["label"] = ex.label;
        out << j.dump() << '\n';
    }
    (void)p;
    return out.str();
}

}  // namespace ows
