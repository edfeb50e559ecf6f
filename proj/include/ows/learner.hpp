#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ows/core.hpp"
#include "ows/dp_mech.hpp"
#include "ows/rng.hpp"

namespace ows {

// Learner output: either the all-0 hypothesis or a threshold anchor
// (i*, sigma*, b*) from which later indices are labeled by forward
// computation.
struct Hypothesis {
    enum class Kind : std::uint8_t { all_zero = 0, threshold = 1 };

    Kind kind = Kind::all_zero;
    std::uint64_t i_star = 0;
    BitString sigma_star;  // sigma_bits() wide when kind == threshold
    std::uint8_t b_star = 0;

    static Hypothesis all_zero() { return Hypothesis{}; }
    static Hypothesis threshold(std::uint64_t i_star, BitString sigma_star, std::uint8_t b_star);

    // 1 tag byte, then for thresholds the packed bit stream
    // i* (k bits) || sigma* (d-k bits) || b* (1 bit), zero-padded to a byte.
    std::vector<std::uint8_t> to_bytes(const Params& p) const;
    static Hypothesis from_bytes(const Params& p, std::span<const std::uint8_t> data);

    std::string to_json(const Params& p) const;
    static Hypothesis from_json(const Params& p, const std::string& text);

    bool operator==(const Hypothesis&) const = default;
};

struct LearnConfig {
    double alpha = 0.0;  // accuracy, in (0, 1)
    double beta = 0.0;   // failure probability, in (0, 1)
    PrivacyBudget budget;
    Params params;
    // Calibration constant for required_sample_size; the default is the
    // smallest value in {20, 40, 80, 160, 320} that passes the calibration
    // suite at d in {64, 256, 1024}.
    double sample_constant = kDefaultSampleConstant;

    static constexpr double kDefaultSampleConstant = 80.0;
};

struct LearnResult {
    Hypothesis hypothesis;
    // The three stages spend exact thirds of the configured epsilon (and for
    // the approximate learner, exact halves of delta), so the composed total
    // equals the configured budget identically.
    PrivacyBudget budget_spent;
    std::vector<PrivacyBudget> stage_budgets;
};

// The pure-DP learner: noisy positive count gate, private robust minimum of
// the positive index list, forward-mapping to the anchor, private mode of the
// mapped pairs. Every internal failure routes to a valid hypothesis.
LearnResult learn_pure(std::span<const LabeledExample> sample, const LearnConfig& cfg, Rng& rng);

// Same pipeline with the approximate-DP subroutines.
LearnResult learn_approx(std::span<const LabeledExample> sample, const LearnConfig& cfg, Rng& rng);

std::uint8_t hypothesis_eval(const Params& p, const Hypothesis& h, const Example& x);

// max( ceil(C * (sqrt(d) + ln(1/beta)) / (alpha * eps)),
//      ceil(8 * ln(2/beta) / alpha) ).
std::uint64_t required_sample_size(const Params& p, const LearnConfig& cfg);

// Serialized <sigma, bit> pair used as the opaque item for mode selection.
std::string pack_sigma_bit(const BitString& sigma, std::uint8_t bit);
std::pair<BitString, std::uint8_t> unpack_sigma_bit(const Params& p, const std::string& item);

// Exact comparison lhs <= a * n with `a` treated as the binary rational its
// double encodes; no float ties.
bool exact_le_scaled(std::int64_t lhs, double a, std::uint64_t n);

// JSON-lines dataset format: {"i": <int>, "sigma_hex": "...", "label": 0|1}.
std::vector<LabeledExample> load_dataset_jsonl(const Params& p, const std::string& text);
std::string save_dataset_jsonl(const Params& p, std::span<const LabeledExample> sample);

}  // namespace ows
