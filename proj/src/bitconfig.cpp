#include "gridgas/bitconfig.hpp"

namespace gridgas {

namespace {
int hex_digit_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw validation_error(std::string("invalid hex digit '") + c + "'");
}
}  // namespace

std::string Configuration::to_hex() const {
    int digits = (sites_ + 3) / 4;
    std::string out(digits, '0');
    static const char* kHex = "0123456789abcdef";
    for (int d = 0; d < digits; ++d) {
        int shift = 4 * d;
        std::uint64_t word = words_[shift >> 6];
        int nibble = static_cast<int>((word >> (shift & 63)) & 0xF);
        out[digits - 1 - d] = kHex[nibble];
    }
    return out;
}

Configuration Configuration::from_hex(const std::string& hex, int site_count) {
    int digits = (site_count + 3) / 4;
    if (static_cast<int>(hex.size()) != digits)
        throw validation_error("hex configuration has " + std::to_string(hex.size()) +
                               " digits, expected " + std::to_string(digits));
    Configuration c(site_count);
    for (int d = 0; d < digits; ++d) {
        int value = hex_digit_value(hex[digits - 1 - d]);
        int shift = 4 * d;
        c.words_[shift >> 6] |= static_cast<std::uint64_t>(value) << (shift & 63);
    }
    for (int s = site_count; s < digits * 4; ++s) {
        if (s < static_cast<int>(c.words_.size()) * 64 && c.occupied(s))
            throw validation_error("hex configuration sets bits beyond the last site");
    }
    return c;
}

}  // namespace gridgas
