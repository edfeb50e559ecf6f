#include "ows/arena.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace ows {

std::vector<LabeledExample> reverse_stream(const Params& p, SeedKey s, std::uint64_t horizon) {
    if (horizon > p.index_count())
        throw std::invalid_argument("reverse_stream: horizon exceeds index count");
    std::vector<LabeledExample> out;
    out.reserve(horizon);
    const std::uint64_t top = p.max_index();
    for (std::uint64_t t = 0; t < horizon; ++t) {
        const std::uint64_t i = top - t;
        DerivedExample d = derive_example(p, s, i);
        out.push_back(LabeledExample{Example{i, std::move(d.sigma)}, d.fbit});
    }
    return out;
}

GameRecord run_online_game(OnlineLearner& learner, std::span<const LabeledExample> stream,
                           bool keep_transcript) {
    if (stream.empty()) throw std::invalid_argument("run_online_game: empty stream");
    GameRecord record;
    record.horizon = stream.size();
    if (keep_transcript) record.predictions.reserve(stream.size());
    for (const auto& round : stream) {
        const std::uint8_t guess = learner.predict(round.x) & 1;
        if (guess != round.label) ++record.mistakes;
        if (keep_transcript) record.predictions.push_back(guess);
        learner.observe(round.x, round.label);
    }
    return record;
}

std::uint64_t best_constant_mistakes(std::span<const LabeledExample> stream) {
    std::uint64_t ones = 0;
    for (const auto& e : stream) ones += e.label;
    return std::min<std::uint64_t>(ones, stream.size() - ones);
}

namespace {

class ConstantLearner final : public OnlineLearner {
public:
    explicit ConstantLearner(std::uint8_t bit) : bit_(bit & 1) {}
    std::uint8_t predict(const Example&) override { return bit_; }
    void observe(const Example&, std::uint8_t) override {}
    std::string name() const override { return bit_ ? "constant1" : "constant0"; }

private:
    std::uint8_t bit_;
};

class RandomLearner final : public OnlineLearner {
public:
    explicit RandomLearner(Rng rng) : rng_(rng) {}
    std::uint8_t predict(const Example&) override { return rng_.next_bit() ? 1 : 0; }
    void observe(const Example&, std::uint8_t) override {}
    std::string name() const override { return "random"; }

private:
    Rng rng_;
};

class MajorityLearner final : public OnlineLearner {
public:
    std::uint8_t predict(const Example&) override { return ones_ > zeros_ ? 1 : 0; }
    void observe(const Example&, std::uint8_t label) override {
        if (label)
            ++ones_;
        else
            ++zeros_;
    }
    std::string name() const override { return "majority"; }

private:
    std::uint64_t ones_ = 0;
    std::uint64_t zeros_ = 0;
};

class OmniscientLearner final : public OnlineLearner {
public:
    OmniscientLearner(const Params& p, SeedKey s) : p_(p), s_(s) {}
    std::uint8_t predict(const Example& x) override { return concept_eval(p_, s_, x); }
    void observe(const Example&, std::uint8_t) override {}
    std::string name() const override { return "omniscient"; }

private:
    Params p_;
    SeedKey s_;
};

class ForwardPredictor final : public OnlineLearner {
public:
    explicit ForwardPredictor(const Params& p) : p_(p) {}

    std::uint8_t predict(const Example& x) override {
        if (!have_anchor_ || x.index <= anchor_.index) return 0;
        const ForwardResult fr = compute_forward(p_, x.index, anchor_.index, anchor_.sigma);
        return (x.sigma == fr.sigma) ? fr.bit : 0;
    }

    void observe(const Example& x, std::uint8_t) override {
        if (!have_anchor_ || x.index < anchor_.index) {
            anchor_ = x;
            have_anchor_ = true;
        }
    }

    std::string name() const override { return "forward"; }

private:
    Params p_;
    Example anchor_;
    bool have_anchor_ = false;
};

// Hedge with a fixed expert pool filled online: the two constants plus
// forward predictors anchored at the first distinct examples seen.
class MwLearner final : public OnlineLearner {
public:
    MwLearner(const Params& p, std::uint64_t horizon, std::size_t pool_size, Rng rng)
        : p_(p), pool_size_(std::max<std::size_t>(pool_size, 2)), rng_(rng) {
        eta_ = std::sqrt(8.0 * std::log(static_cast<double>(pool_size_)) /
                         static_cast<double>(std::max<std::uint64_t>(horizon, 1)));
    }

    std::uint8_t predict(const Example& x) override {
        last_votes_.assign(experts(), 0);
        double total = 0.0;
        double mass_one = 0.0;
        for (std::size_t e = 0; e < experts(); ++e) {
            const std::uint8_t vote = expert_predict(e, x);
            last_votes_[e] = vote;
            total += weight_[e];
            if (vote) mass_one += weight_[e];
        }
        return (total > 0.0 && rng_.next_unit() < mass_one / total) ? 1 : 0;
    }

    void observe(const Example& x, std::uint8_t label) override {
        for (std::size_t e = 0; e < experts(); ++e)
            if (last_votes_[e] != label) weight_[e] *= std::exp(-eta_);
        if (anchors_.size() + 2 < pool_size_) {
            anchors_.push_back({x, label});
            weight_.push_back(1.0);
        }
    }

    std::string name() const override { return "mw"; }

private:
    struct Anchor {
        Example x;
        std::uint8_t label;
    };

    std::size_t experts() const { return 2 + anchors_.size(); }

    std::uint8_t expert_predict(std::size_t e, const Example& x) const {
        if (e == 0) return 0;
        if (e == 1) return 1;
        const Anchor& a = anchors_[e - 2];
        if (x.index == a.x.index) return (x.sigma == a.x.sigma) ? a.label : 0;
        if (x.index < a.x.index) return 0;
        const ForwardResult fr = compute_forward(p_, x.index, a.x.index, a.x.sigma);
        return (x.sigma == fr.sigma) ? fr.bit : 0;
    }

    Params p_;
    std::size_t pool_size_;
    Rng rng_;
    double eta_;
    std::vector<Anchor> anchors_;
    std::vector<double> weight_{1.0, 1.0};
    std::vector<std::uint8_t> last_votes_;
};

}  // namespace

std::unique_ptr<OnlineLearner> make_constant_learner(std::uint8_t bit) {
    return std::make_unique<ConstantLearner>(bit);
}
std::unique_ptr<OnlineLearner> make_random_learner(Rng rng) {
    return std::make_unique<RandomLearner>(rng);
}
std::unique_ptr<OnlineLearner> make_majority_learner() {
    return std::make_unique<MajorityLearner>();
}
std::unique_ptr<OnlineLearner> make_omniscient_learner(const Params& p, SeedKey s) {
    return std::make_unique<OmniscientLearner>(p, s);
}
std::unique_ptr<OnlineLearner> make_forward_predictor(const Params& p) {
    return std::make_unique<ForwardPredictor>(p);
}
std::unique_ptr<OnlineLearner> make_mw_learner(const Params& p, std::uint64_t horizon,
                                               std::size_t pool_size, Rng rng) {
    return std::make_unique<MwLearner>(p, horizon, pool_size, rng);
}

std::unique_ptr<OnlineLearner> make_baseline(const std::string& name, const Params& p,
                                             std::uint64_t horizon, SeedKey s, Rng rng) {
    if (name == "constant0") return make_constant_learner(0);
    if (name == "constant1") return make_constant_learner(1);
    if (name == "random") return make_random_learner(rng);
    if (name == "majority") return make_majority_learner();
    if (name == "forward") return make_forward_predictor(p);
    if (name == "mw") return make_mw_learner(p, horizon, 16, rng);
    if (name == "omniscient") return make_omniscient_learner(p, s);
    throw std::invalid_argument("unknown baseline: " + name);
}

std::vector<std::string> baseline_zoo() {
    return {"constant0", "constant1", "random", "majority", "forward", "mw"};
}

LabeledExample RealizableDistribution::sample(const Params& p, Rng& rng) const {
    double total = off_weight;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw std::invalid_argument("RealizableDistribution: empty support");
    double x = rng.next_unit() * total;
    for (std::size_t i = 0; i < on_indices.size(); ++i) {
        if (x < weights[i]) {
            DerivedExample d = derive_example(p, s, on_indices[i]);
            return LabeledExample{Example{on_indices[i], std::move(d.sigma)}, d.fbit};
        }
        x -= weights[i];
    }
    // Off-sequence negative: a random payload at a random index. Flip one bit
    // on the astronomically unlikely on-sequence collision.
    const std::uint64_t index = rng.uniform_below(p.index_count());
    BitString sigma = random_bits(p.sigma_bits(), rng);
    Example ex{index, std::move(sigma)};
    if (concept_eval(p, s, ex) == 1 || ex.sigma == derive_example(p, s, index).sigma)
        ex.sigma.set_bit(0, !ex.sigma.bit(0));
    return LabeledExample{std::move(ex), 0};
}

RealizableDistribution uniform_on_sequence(const Params& p, SeedKey s, std::size_t support,
                                           Rng& rng) {
    if (support == 0 || support > p.index_count())
        throw std::invalid_argument("uniform_on_sequence: bad support size");
    std::unordered_set<std::uint64_t> chosen;
    while (chosen.size() < support) chosen.insert(rng.uniform_below(p.index_count()));
    RealizableDistribution dist;
    dist.s = s;
    dist.on_indices.assign(chosen.begin(), chosen.end());
    std::sort(dist.on_indices.begin(), dist.on_indices.end());
    dist.weights.assign(support, 1.0 / static_cast<double>(support));
    dist.off_weight = 0.0;
    return dist;
}

double population_loss(const Params& p, const RealizableDistribution& dist,
                       const std::function<std::uint8_t(const Example&)>& predict,
                       std::size_t mc_samples, Rng& rng) {
    if (mc_samples == 0) throw std::invalid_argument("population_loss: need samples");
    std::uint64_t wrong = 0;
    for (std::size_t i = 0; i < mc_samples; ++i) {
        const LabeledExample ex = dist.sample(p, rng);
        if ((predict(ex.x) & 1) != ex.label) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(mc_samples);
}

PacReport run_pac_trial(const RealizableDistribution& dist, const LearnConfig& cfg, std::size_t n,
                        std::size_t mc_samples, Rng& rng) {
    if (n == 0) throw std::invalid_argument("run_pac_trial: need samples");
    const Params& p = cfg.params;
    std::vector<LabeledExample> sample;
    sample.reserve(n);
    for (std::size_t i = 0; i < n; ++i) sample.push_back(dist.sample(p, rng));

    const LearnResult learned = cfg.budget.delta > 0.0 ? learn_approx(sample, cfg, rng)
                                                       : learn_pure(sample, cfg, rng);
    PacReport report;
    report.hypothesis = learned.hypothesis;

    std::uint64_t wrong = 0;
    for (const auto& ex : sample)
        if (hypothesis_eval(p, report.hypothesis, ex.x) != ex.label) ++wrong;
    report.sample_loss = static_cast<double>(wrong) / static_cast<double>(n);

    report.population_loss = population_loss(
        p, dist, [&](const Example& x) { return hypothesis_eval(p, report.hypothesis, x); },
        mc_samples, rng);
    report.success = report.population_loss <= cfg.alpha;
    return report;
}

double prediction_advantage(
    const std::function<std::unique_ptr<OnlineLearner>(const Params&, SeedKey, Rng)>& make,
    std::uint64_t target, std::size_t trials, const Params& p, Rng& rng) {
    if (target + 1 >= p.index_count())
        throw std::invalid_argument("prediction_advantage: target must be below 2^k - 1");
    if (trials == 0) throw std::invalid_argument("prediction_advantage: need trials");
    std::uint64_t hits = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        Rng trial_rng = rng.split(trial);
        const SeedKey s{trial_rng.next_u64() & p.seed_mask()};
        auto learner = make(p, s, trial_rng.split(1));
        const std::uint64_t suffix = p.max_index() - target;
        for (std::uint64_t t = 0; t < suffix; ++t) {
            const std::uint64_t i = p.max_index() - t;
            DerivedExample d = derive_example(p, s, i);
            const Example x{i, std::move(d.sigma)};
            (void)learner->predict(x);
            learner->observe(x, d.fbit);
        }
        DerivedExample d = derive_example(p, s, target);
        if ((learner->predict(Example{target, d.sigma}) & 1) == d.fbit) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace ows
