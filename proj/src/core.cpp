#include "ows/core.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace ows {

namespace detail {

namespace {

inline std::uint32_t rotl(std::uint32_t x, int n) { return (x << n) | (x >> (32 - n)); }

inline void quarter_round(std::uint32_t& a, std::uint32_t& b, std::uint32_t& c, std::uint32_t& d) {
    a += b; d ^= a; d = rotl(d, 16);
    c += d; b ^= c; b = rotl(b, 12);
    a += b; d ^= a; d = rotl(d, 8);
    c += d; b ^= c; b = rotl(b, 7);
}

}  // namespace

void chacha20_block(const std::uint32_t key[8], std::uint32_t counter,
                    const std::uint32_t nonce[3], std::uint32_t out[16]) {
    std::uint32_t state[16] = {
        0x61707865, 0x3320646e, 0x79622d32, 0x6b206574,
        key[0], key[1], key[2], key[3],
        key[4], key[5], key[6], key[7],
        counter, nonce[0], nonce[1], nonce[2],
    };
    std::uint32_t x[16];
    for (int i = 0; i < 16; ++i) x[i] = state[i];
    for (int round = 0; round < 10; ++round) {
        quarter_round(x[0], x[4], x[8], x[12]);
        quarter_round(x[1], x[5], x[9], x[13]);
        quarter_round(x[2], x[6], x[10], x[14]);
        quarter_round(x[3], x[7], x[11], x[15]);
        quarter_round(x[0], x[5], x[10], x[15]);
        quarter_round(x[1], x[6], x[11], x[12]);
        quarter_round(x[2], x[7], x[8], x[13]);
        quarter_round(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) out[i] = x[i] + state[i];
}

}  // namespace detail

namespace {

std::uint32_t isqrt(std::uint32_t v) {
    std::uint32_t r = 0;
    while ((r + 1) * std::uint64_t(r + 1) <= v) ++r;
    return r;
}

void check_index(const Params& p, std::uint64_t index, const char* who) {
    if (index >= p.index_count())
        throw std::invalid_argument(std::string(who) + ": index out of range for k=" +
                                    std::to_string(p.k));
}

void check_sigma(const Params& p, const BitString& sigma, const char* who) {
    if (sigma.bit_size() != p.sigma_bits())
        throw std::invalid_argument(std::string(who) + ": sigma must be " +
                                    std::to_string(p.sigma_bits()) + " bits, got " +
                                    std::to_string(sigma.bit_size()));
}

}  // namespace

Params Params::for_domain(std::uint32_t d) {
    if (d < 9) throw std::invalid_argument("Params: d must be at least 9");
    Params p;
    p.d = d;
    p.k = isqrt(d) - 1;
    if (p.k > 60) throw std::invalid_argument("Params: d too large, k must fit 60 bits");
    // Guaranteed by k = floor(sqrt(d)) - 1: (k+1)^2 <= d.
    if (std::uint64_t(p.k) * p.k + p.k > p.d - p.k)
        throw std::logic_error("Params: slot layout does not fit");
    return p;
}

PrgOutput prg_expand(const Params& p, Seed seed) {
    if ((seed & ~p.seed_mask()) != 0)
        throw std::invalid_argument("prg_expand: seed wider than k bits");
    const std::uint32_t key[8] = {
        static_cast<std::uint32_t>(seed),
        static_cast<std::uint32_t>(seed >> 32),
        p.k, 0, 0, 0, 0, 0,
    };
    const std::uint32_t nonce[3] = {0, 0, 0};
    std::uint32_t block[16];
    detail::chacha20_block(key, 0, nonce, block);
    const std::uint64_t lo = block[0] | (std::uint64_t(block[1]) << 32);
    const std::uint64_t hi = block[2] | (std::uint64_t(block[3]) << 32);
    return PrgOutput{lo & p.seed_mask(), hi & p.seed_mask()};
}

Seed leaf_seed(const Params& p, SeedKey s, std::uint64_t index) {
    check_index(p, index, "leaf_seed");
    Seed cur = s.bits;
    for (std::uint32_t t = 1; t <= p.k; ++t) {
        const PrgOutput out = prg_expand(p, cur);
        cur = p.index_bit(index, t) ? out.right : out.left;
    }
    return cur;
}

BitString CoPath::serialize(const Params& p) const {
    BitString sigma(p.sigma_bits());
    for (const auto& [depth, seed] : entries) {
        if (depth < 1 || depth > p.k) throw std::invalid_argument("CoPath: depth out of range");
        sigma.write_bits(std::size_t(depth - 1) * p.k, seed, p.k);
    }
    return sigma;
}

CoPath CoPath::parse(const Params& p, const BitString& sigma, std::uint64_t index) {
    check_sigma(p, sigma, "CoPath::parse");
    check_index(p, index, "CoPath::parse");
    CoPath cp;
    for (std::uint32_t t = 1; t <= p.k; ++t) {
        if (!p.index_bit(index, t))
            cp.entries.emplace_back(t, sigma.read_bits(std::size_t(t - 1) * p.k, p.k));
    }
    return cp;
}

DerivedExample derive_example(const Params& p, SeedKey s, std::uint64_t index) {
    check_index(p, index, "derive_example");
    Seed cur = s.bits;
    CoPath cp;
    for (std::uint32_t t = 1; t <= p.k; ++t) {
        const PrgOutput out = prg_expand(p, cur);
        if (p.index_bit(index, t)) {
            cur = out.right;
        } else {
            cp.entries.emplace_back(t, out.right);
            cur = out.left;
        }
    }
    const std::uint8_t fbit = static_cast<std::uint8_t>((prg_expand(p, cur).left >> (p.k - 1)) & 1);
    return DerivedExample{cp.serialize(p), fbit};
}

ForwardResult compute_forward(const Params& p, std::uint64_t j, std::uint64_t i,
                              const BitString& sigma_i) {
    check_index(p, j, "compute_forward");
    check_index(p, i, "compute_forward");
    if (j <= i) throw std::invalid_argument("compute_forward: requires j > i");
    check_sigma(p, sigma_i, "compute_forward");

    // Highest depth where i and j diverge; j > i forces i=0, j=1 there, so
    // the node at that depth on j's path is i's stored right sibling.
    const int high_bit = 63 - std::countl_zero(i ^ j);
    const std::uint32_t split = p.k - static_cast<std::uint32_t>(high_bit);

    CoPath cp;
    for (std::uint32_t t = 1; t < split; ++t) {
        if (!p.index_bit(j, t))
            cp.entries.emplace_back(t, sigma_i.read_bits(std::size_t(t - 1) * p.k, p.k));
    }
    Seed cur = sigma_i.read_bits(std::size_t(split - 1) * p.k, p.k);
    for (std::uint32_t t = split + 1; t <= p.k; ++t) {
        const PrgOutput out = prg_expand(p, cur);
        if (p.index_bit(j, t)) {
            cur = out.right;
        } else {
            cp.entries.emplace_back(t, out.right);
            cur = out.left;
        }
    }
    const std::uint8_t bit = static_cast<std::uint8_t>((prg_expand(p, cur).left >> (p.k - 1)) & 1);
    return ForwardResult{cp.serialize(p), bit};
}

std::uint8_t concept_eval(const Params& p, SeedKey s, const Example& x) {
    check_sigma(p, x.sigma, "concept_eval");
    const DerivedExample d = derive_example(p, s, x.index);
    return (x.sigma == d.sigma && d.fbit == 1) ? 1 : 0;
}

}  // namespace ows
