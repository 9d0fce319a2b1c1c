#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "gridgas/errors.hpp"

namespace gridgas {

// Occupancy bit-vector over graph sites. Site i lives at bit (i % 64) of
// word (i / 64); a single word covers every enumerable state space, the
// word vector is the fallback for larger simulated graphs.
class Configuration {
public:
    Configuration() : sites_(0) {}
    explicit Configuration(int site_count)
        : sites_(site_count), words_((site_count + 63) / 64, 0) {
        if (site_count < 0) throw validation_error("Configuration: negative site count");
    }

    static Configuration empty(int site_count) { return Configuration(site_count); }

    int site_count() const { return sites_; }

    bool occupied(int site) const { return (words_[site >> 6] >> (site & 63)) & 1u; }

    void set(int site, bool value) {
        std::uint64_t mask = std::uint64_t{1} << (site & 63);
        if (value)
            words_[site >> 6] |= mask;
        else
            words_[site >> 6] &= ~mask;
    }

    void flip(int site) { words_[site >> 6] ^= std::uint64_t{1} << (site & 63); }

    int particle_count() const {
        int n = 0;
        for (std::uint64_t w : words_) n += __builtin_popcountll(w);
        return n;
    }

    // H(sigma) = -(number of particles)
    int energy() const { return -particle_count(); }

    std::uint64_t key64() const {
        if (sites_ > 64) throw computation_error("Configuration: key64 needs <= 64 sites");
        return words_.empty() ? 0 : words_[0];
    }

    static Configuration from_key64(std::uint64_t key, int site_count) {
        Configuration c(site_count);
        if (!c.words_.empty()) c.words_[0] = key;
        return c;
    }

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.sites_ == b.sites_ && a.words_ == b.words_;
    }
    friend bool operator!=(const Configuration& a, const Configuration& b) { return !(a == b); }

    // Canonical enumeration order: numeric value of the bit-vector,
    // least-significant site first.
    friend bool operator<(const Configuration& a, const Configuration& b) {
        for (std::size_t i = a.words_.size(); i-- > 0;) {
            if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
        }
        return false;
    }

    // Number of sites on which the two configurations differ.
    int hamming(const Configuration& other) const {
        int d = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            d += __builtin_popcountll(words_[i] ^ other.words_[i]);
        return d;
    }

    // Hex encoding of the bit-vector read as one big integer (site 0 is the
    // least significant bit), zero-padded to ceil(sites/4) digits.
    std::string to_hex() const;
    static Configuration from_hex(const std::string& hex, int site_count);

private:
    int sites_;
    std::vector<std::uint64_t> words_;
};

struct ConfigurationHash {
    std::size_t operator()(const Configuration& c) const {
        std::uint64_t h = 0x9e3779b97f4a7c15ull ^ static_cast<std::uint64_t>(c.site_count());
        for (std::uint64_t w : c.words()) {
            h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return static_cast<std::size_t>(h);
    }
};

}  // namespace gridgas
