#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ows {

class Rng;

// Fixed-width bit string with MSB-first addressing: position 0 is the most
// significant bit of the first byte produced by bytes()/to_hex(). Trailing
// pad bits (up to the byte boundary) are always zero.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::size_t nbits);

    static BitString from_uint(std::uint64_t value, std::size_t nbits);
    // Expects exactly 2*ceil(nbits/8) hex digits; pad bits are masked off.
    static BitString from_hex(std::string_view hex, std::size_t nbits);
    static BitString from_bytes(const std::uint8_t* data, std::size_t len, std::size_t nbits);

    std::size_t bit_size() const { return nbits_; }
    bool empty() const { return nbits_ == 0; }

    bool bit(std::size_t pos) const;
    void set_bit(std::size_t pos, bool value);

    // Reads/writes `width` <= 64 bits starting at `pos`; value right-aligned.
    std::uint64_t read_bits(std::size_t pos, std::size_t width) const;
    void write_bits(std::size_t pos, std::uint64_t value, std::size_t width);

    std::uint64_t to_uint() const;  // requires bit_size() <= 64
    std::vector<std::uint8_t> bytes() const;
    std::string byte_string() const;  // same bytes in a std::string container
    std::string to_hex() const;

    bool operator==(const BitString& other) const = default;

private:
    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> words_;  // bit p lives in words_[p/64], bit 63 - p%64

    void check_range(std::size_t pos, std::size_t width) const;
};

BitString random_bits(std::size_t nbits, Rng& rng);

}  // namespace ows
