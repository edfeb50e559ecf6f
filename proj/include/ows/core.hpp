#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ows/bitstring.hpp"

namespace ows {

// Domain geometry. Examples live on {0,1}^d split as a k-bit sequence index
// plus a (d-k)-bit payload, with k = floor(sqrt(d)) - 1. The payload holds k
// fixed slots of k bits (one per tree depth) followed by zero padding, so
// k*k + k <= d - k must hold; it does for every d >= 9.
struct Params {
    std::uint32_t d = 0;
    std::uint32_t k = 0;

    static Params for_domain(std::uint32_t d);

    std::uint32_t sigma_bits() const { return d - k; }
    std::uint64_t index_count() const { return std::uint64_t{1} << k; }
    std::uint64_t max_index() const { return index_count() - 1; }
    std::uint64_t seed_mask() const {
        return k >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << k) - 1;
    }
    // Depth-t bit of a k-bit index, MSB first; t in [1, k].
    bool index_bit(std::uint64_t index, std::uint32_t t) const {
        return (index >> (k - t)) & 1;
    }
};

// A k-bit GGM node/root seed, right-aligned in a 64-bit word.
using Seed = std::uint64_t;

struct SeedKey {
    Seed bits = 0;
    bool operator==(const SeedKey&) const = default;
};

struct Example {
    std::uint64_t index = 0;
    BitString sigma;  // sigma_bits() wide
    bool operator==(const Example&) const = default;
};

struct LabeledExample {
    Example x;
    std::uint8_t label = 0;
    bool operator==(const LabeledExample&) const = default;
};

struct PrgOutput {
    Seed left = 0;
    Seed right = 0;
    bool operator==(const PrgOutput&) const = default;
};

// Right-sibling seeds along a leaf's root path, one entry per zero bit of the
// index, depths strictly increasing. Enough to recompute every later leaf;
// reveals nothing below the path's own left turns.
struct CoPath {
    std::vector<std::pair<std::uint32_t, Seed>> entries;  // (depth in [1,k], seed)

    BitString serialize(const Params& p) const;
    static CoPath parse(const Params& p, const BitString& sigma, std::uint64_t index);
    bool operator==(const CoPath&) const = default;
};

struct DerivedExample {
    BitString sigma;
    std::uint8_t fbit = 0;
};

struct ForwardResult {
    BitString sigma;
    std::uint8_t bit = 0;
};

// Length-doubling generator: one ChaCha20 block keyed by (seed, k), truncated
// to 2k bits. Frozen; test vectors for it ship under tests/data/.
PrgOutput prg_expand(const Params& p, Seed seed);

// k GGM descents from the root, left on 0, right on 1, MSB first.
Seed leaf_seed(const Params& p, SeedKey s, std::uint64_t index);

// The on-sequence payload for `index` plus its label bit. The label comes
// from one extra expansion of the leaf seed, which the co-path excludes, so
// the label is not a function of the payload alone.
DerivedExample derive_example(const Params& p, SeedKey s, std::uint64_t index);

// Random-access forward computation: from (i, sigma_i) reconstruct the
// payload and label of any later index j. Total in sigma_i: arbitrary bit
// patterns are parsed positionally and walked the same way.
ForwardResult compute_forward(const Params& p, std::uint64_t j, std::uint64_t i,
                              const BitString& sigma_i);

// 1 iff x.sigma is exactly the on-sequence payload of x.index and the label
// bit is 1; 0 otherwise.
std::uint8_t concept_eval(const Params& p, SeedKey s, const Example& x);

namespace detail {
// RFC 8439 ChaCha20 block function, exposed for vector checks.
void chacha20_block(const std::uint32_t key[8], std::uint32_t counter,
                    const std::uint32_t nonce[3], std::uint32_t out[16]);
}  // namespace detail

}  // namespace ows
