#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "ows/core.hpp"
#include "ows/learner.hpp"
#include "ows/rng.hpp"

namespace ows {

// Round protocol: the harness asks for a prediction on x_t, then reveals the
// true label. State may only change in observe(); the harness never reveals a
// label before the matching prediction is committed.
class OnlineLearner {
public:
    virtual ~OnlineLearner() = default;
    virtual std::uint8_t predict(const Example& x) = 0;
    virtual void observe(const Example& x, std::uint8_t label) = 0;
    virtual std::string name() const = 0;
};

struct GameRecord {
    std::uint64_t horizon = 0;
    std::uint64_t mistakes = 0;
    std::vector<std::uint8_t> predictions;  // transcript, optional

    double mistake_rate() const {
        return horizon == 0 ? 0.0 : static_cast<double>(mistakes) / static_cast<double>(horizon);
    }
};

// On-sequence examples in reverse order: indices 2^k - 1 down to 2^k - T.
std::vector<LabeledExample> reverse_stream(const Params& p, SeedKey s, std::uint64_t horizon);

GameRecord run_online_game(OnlineLearner& learner, std::span<const LabeledExample> stream,
                           bool keep_transcript = false);

// Mistakes of the better of the two constant predictors on this stream.
std::uint64_t best_constant_mistakes(std::span<const LabeledExample> stream);

// Baseline zoo ---------------------------------------------------------------

std::unique_ptr<OnlineLearner> make_constant_learner(std::uint8_t bit);
std::unique_ptr<OnlineLearner> make_random_learner(Rng rng);
std::unique_ptr<OnlineLearner> make_majority_learner();
std::unique_ptr<OnlineLearner> make_omniscient_learner(const Params& p, SeedKey s);
// Keeps the lowest-index example seen and predicts by forward computation
// from it when the queried index is higher; otherwise predicts 0.
std::unique_ptr<OnlineLearner> make_forward_predictor(const Params& p);
// Hedge over a pool of experts: both constants plus forward predictors
// anchored at the first distinct examples observed.
std::unique_ptr<OnlineLearner> make_mw_learner(const Params& p, std::uint64_t horizon,
                                               std::size_t pool_size, Rng rng);

// Names accepted: constant0 constant1 random majority forward mw omniscient.
std::unique_ptr<OnlineLearner> make_baseline(const std::string& name, const Params& p,
                                             std::uint64_t horizon, SeedKey s, Rng rng);
std::vector<std::string> baseline_zoo();  // all of the above except omniscient

// PAC harness ----------------------------------------------------------------

// Distribution over labeled examples consistent with concept s: weighted
// on-sequence indices plus an off-sequence (negative) component.
struct RealizableDistribution {
    SeedKey s;
    std::vector<std::uint64_t> on_indices;
    std::vector<double> weights;  // same length as on_indices
    double off_weight = 0.0;

    LabeledExample sample(const Params& p, Rng& rng) const;
};

RealizableDistribution uniform_on_sequence(const Params& p, SeedKey s, std::size_t support,
                                           Rng& rng);

double population_loss(const Params& p, const RealizableDistribution& dist,
                       const std::function<std::uint8_t(const Example&)>& predict,
                       std::size_t mc_samples, Rng& rng);

struct PacReport {
    double sample_loss = 0.0;
    double population_loss = 0.0;
    bool success = false;
    Hypothesis hypothesis;
};

PacReport run_pac_trial(const RealizableDistribution& dist, const LearnConfig& cfg, std::size_t n,
                        std::size_t mc_samples, Rng& rng);

// Reverse-order unpredictability probe: play the forward-computable suffix
// (indices 2^k - 1 down to target+1), then score one prediction at `target`
// against its true label, over fresh random seeds.
double prediction_advantage(
    const std::function<std::unique_ptr<OnlineLearner>(const Params&, SeedKey, Rng)>& make,
    std::uint64_t target, std::size_t trials, const Params& p, Rng& rng);

}  // namespace ows
