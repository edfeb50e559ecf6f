#include <doctest.h>

#include "ows/bitstring.hpp"
#include "ows/rng.hpp"

using ows::BitString;

TEST_CASE("bit addressing is MSB first") {
    BitString b(12);
    b.set_bit(0, true);
    b.set_bit(11, true);
    CHECK(b.to_hex() == "8010");
    CHECK(b.bit(0));
    CHECK_FALSE(b.bit(1));
    CHECK(b.read_bits(0, 12) == 0x801);
}

TEST_CASE("read/write round trip across word boundaries") {
    ows::Rng rng(7);
    for (int iter = 0; iter < 200; ++iter) {
        const std::size_t nbits = 1 + rng.uniform_below(200);
        BitString b(nbits);
        const std::size_t width = 1 + rng.uniform_below(std::min<std::size_t>(64, nbits));
        const std::size_t pos = rng.uniform_below(nbits - width + 1);
        const std::uint64_t value =
            width == 64 ? rng.next_u64() : rng.next_u64() & ((std::uint64_t{1} << width) - 1);
        b.write_bits(pos, value, width);
        CHECK(b.read_bits(pos, width) == value);
    }
}

TEST_CASE("hex round trip") {
    ows::Rng rng(11);
    for (std::size_t nbits : {1u, 7u, 8u, 9u, 63u, 64u, 65u, 129u, 993u}) {
        const BitString b = ows::random_bits(nbits, rng);
        CHECK(BitString::from_hex(b.to_hex(), nbits) == b);
    }
}

TEST_CASE("from_hex masks pad bits and rejects bad input") {
    // 5-bit string: the low 3 bits of the byte are padding.
    const BitString b = BitString::from_hex("ff", 5);
    CHECK(b.to_hex() == "f8");
    CHECK_THROWS_AS(BitString::from_hex("f", 5), std::invalid_argument);
    CHECK_THROWS_AS(BitString::from_hex("zz", 8), std::invalid_argument);
}

TEST_CASE("from_uint/to_uint") {
    const BitString b = BitString::from_uint(0x2a, 6);
    CHECK(b.to_uint() == 0x2a);
    CHECK(b.to_hex() == "a8");  // 101010 padded to 10101000
    CHECK_THROWS_AS(BitString::from_uint(1, 65), std::invalid_argument);
}

TEST_CASE("byte_string matches bytes") {
    ows::Rng rng(3);
    const BitString b = ows::random_bits(21, rng);
    const auto raw = b.bytes();
    const auto str = b.byte_string();
    REQUIRE(raw.size() == str.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        CHECK(static_cast<std::uint8_t>(str[i]) == raw[i]);
}
