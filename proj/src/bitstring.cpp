#include "ows/bitstring.hpp"

#include <stdexcept>

#include "ows/rng.hpp"

namespace ows {

namespace {

constexpr std::uint64_t width_mask(std::size_t width) {
    return width >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

BitString::BitString(std::size_t nbits) : nbits_(nbits), words_((nbits + 63) / 64, 0) {}

BitString BitString::from_uint(std::uint64_t value, std::size_t nbits) {
    if (nbits > 64) throw std::invalid_argument("from_uint: width exceeds 64 bits");
    BitString b(nbits);
    if (nbits > 0) b.write_bits(0, value & width_mask(nbits), nbits);
    return b;
}

BitString BitString::from_hex(std::string_view hex, std::size_t nbits) {
    const std::size_t nbytes = (nbits + 7) / 8;
    if (hex.size() != 2 * nbytes)
        throw std::invalid_argument("from_hex: expected " + std::to_string(2 * nbytes) +
                                    " hex digits, got " + std::to_string(hex.size()));
    BitString b(nbits);
    for (std::size_t byte = 0; byte < nbytes; ++byte) {
        const int hi = hex_digit(hex[2 * byte]);
        const int lo = hex_digit(hex[2 * byte + 1]);
        if (hi < 0 || lo < 0) throw std::invalid_argument("from_hex: invalid hex digit");
        const std::uint64_t v = static_cast<std::uint64_t>(hi) << 4 | static_cast<std::uint64_t>(lo);
        const std::size_t pos = 8 * byte;
        const std::size_t width = nbits - pos < 8 ? nbits - pos : 8;
        b.write_bits(pos, v >> (8 - width), width);
    }
    return b;
}

BitString BitString::from_bytes(const std::uint8_t* data, std::size_t len, std::size_t nbits) {
    if (len != (nbits + 7) / 8) throw std::invalid_argument("from_bytes: length mismatch");
    BitString b(nbits);
    for (std::size_t byte = 0; byte < len; ++byte) {
        const std::size_t pos = 8 * byte;
        const std::size_t width = nbits - pos < 8 ? nbits - pos : 8;
        b.write_bits(pos, static_cast<std::uint64_t>(data[byte]) >> (8 - width), width);
    }
    return b;
}

void BitString::check_range(std::size_t pos, std::size_t width) const {
    if (width > 64) throw std::invalid_argument("bit field wider than 64");
    if (pos + width > nbits_) throw std::out_of_range("bit range past end of string");
}

bool BitString::bit(std::size_t pos) const {
    check_range(pos, 1);
    return (words_[pos / 64] >> (63 - pos % 64)) & 1;
}

void BitString::set_bit(std::size_t pos, bool value) {
    check_range(pos, 1);
    const std::uint64_t m = std::uint64_t{1} << (63 - pos % 64);
    if (value)
        words_[pos / 64] |= m;
    else
        words_[pos / 64] &= ~m;
}

std::uint64_t BitString::read_bits(std::size_t pos, std::size_t width) const {
    if (width == 0) return 0;
    check_range(pos, width);
    const std::size_t w = pos / 64;
    const std::size_t off = pos % 64;
    if (off + width <= 64) return (words_[w] >> (64 - off - width)) & width_mask(width);
    const std::size_t hi_bits = 64 - off;
    const std::size_t lo_bits = width - hi_bits;
    const std::uint64_t hi = words_[w] & width_mask(hi_bits);
    const std::uint64_t lo = words_[w + 1] >> (64 - lo_bits);
    return (hi << lo_bits) | lo;
}

void BitString::write_bits(std::size_t pos, std::uint64_t value, std::size_t width) {
    if (width == 0) return;
    check_range(pos, width);
    value &= width_mask(width);
    const std::size_t w = pos / 64;
    const std::size_t off = pos % 64;
    if (off + width <= 64) {
        const std::size_t shift = 64 - off - width;
        words_[w] = (words_[w] & ~(width_mask(width) << shift)) | (value << shift);
        return;
    }
    const std::size_t hi_bits = 64 - off;
    const std::size_t lo_bits = width - hi_bits;
    words_[w] = (words_[w] & ~width_mask(hi_bits)) | (value >> lo_bits);
    words_[w + 1] = (words_[w + 1] & width_mask(64 - lo_bits)) |
                    ((value & width_mask(lo_bits)) << (64 - lo_bits));
}

std::uint64_t BitString::to_uint() const {
    if (nbits_ > 64) throw std::invalid_argument("to_uint: string wider than 64 bits");
    return read_bits(0, nbits_);
}

std::vector<std::uint8_t> BitString::bytes() const {
    const std::size_t nbytes = (nbits_ + 7) / 8;
    std::vector<std::uint8_t> out(nbytes, 0);
    for (std::size_t byte = 0; byte < nbytes; ++byte) {
        const std::size_t pos = 8 * byte;
        const std::size_t width = nbits_ - pos < 8 ? nbits_ - pos : 8;
        out[byte] = static_cast<std::uint8_t>(read_bits(pos, width) << (8 - width));
    }
    return out;
}

std::string BitString::byte_string() const {
    const auto raw = bytes();
    return std::string(raw.begin(), raw.end());
}

std::string BitString::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : bytes()) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

BitString random_bits(std::size_t nbits, Rng& rng) {
    BitString b(nbits);
    std::size_t pos = 0;
    while (pos < nbits) {
        const std::size_t width = nbits - pos < 64 ? nbits - pos : 64;
        b.write_bits(pos, rng.next_u64(), width);
        pos += width;
    }
    return b;
}

}  // namespace ows
