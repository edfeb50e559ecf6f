#pragma once

#include <cstdint>
#include <stdexcept>

namespace ows {

// Counter-based pseudorandom stream: a Weyl sequence through a 64-bit
// finalizer, so every draw is a pure function of (key, counter). split()
// derives an independent stream, which keeps parallel trials reproducible
// regardless of scheduling.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : key_(mix(seed ^ 0x8badf00d5eedull)) {}

    std::uint64_t next_u64() {
        counter_ += 1;
        return mix(key_ + counter_ * 0x9e3779b97f4a7c15ull);
    }

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound == 0) throw std::invalid_argument("uniform_below: zero bound");
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive range
        if (lo > hi) throw std::invalid_argument("uniform_int: empty range");
        const std::uint64_t span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<std::int64_t>(span == 0 ? next_u64() : uniform_below(span));
    }

    bool next_bit() { return next_u64() >> 63; }

    // Independent child stream; deterministic in (parent key, stream id).
    Rng split(std::uint64_t stream) const {
        Rng child(0);
        child.key_ = mix(key_ ^ mix(stream + 0x6a09e667f3bcc909ull));
        child.counter_ = 0;
        return child;
    }

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace ows
