#include "flap/bitstring.hpp"

#include <numeric>

#include "flap/error.hpp"

namespace flap {

BitString BitString::from_string(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] != '0' && text[i] != '1') {
            throw ValidationError("bit string may only contain '0' and '1'");
        }
        out.bits_[i] = text[i] == '1' ? 1 : 0;
    }
    return out;
}

BitString BitString::random(std::size_t length, Rng& rng) {
    BitString out(length);
    for (auto& b : out.bits_) {
        b = static_cast<std::uint8_t>(rng.next() >> 63);
    }
    return out;
}

std::size_t BitString::count() const noexcept {
    return std::accumulate(bits_.begin(), bits_.end(), std::size_t{0});
}

BitString BitString::complement() const {
    BitString out(*this);
    for (auto& b : out.bits_) {
        b ^= 1;
    }
    return out;
}

std::string BitString::to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out[i] = '1';
        }
    }
    return out;
}

std::size_t hamming(const BitString& a, const BitString& b) {
    if (a.size() != b.size()) {
        throw ValidationError("hamming: length mismatch (" + std::to_string(a.size()) + " vs " +
                              std::to_string(b.size()) + ")");
    }
    const auto x = a.bits();
    const auto y = b.bits();
    std::size_t d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        d += static_cast<std::size_t>(x[i] != y[i]);
    }
    return d;
}

} // namespace flap
