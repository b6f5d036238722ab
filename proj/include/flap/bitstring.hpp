#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flap/rng.hpp"

namespace flap {

/// Fixed-length binary genotype. One byte per bit; every byte is 0 or 1.
class BitString {
  public:
    BitString() = default;
    explicit BitString(std::size_t length, bool value = false) : bits_(length, value ? 1 : 0) {}

    /// Parses a string of '0'/'1' characters.
    static BitString from_string(std::string_view text);
    static BitString random(std::size_t length, Rng& rng);

    std::size_t size() const noexcept { return bits_.size(); }
    bool empty() const noexcept { return bits_.empty(); }

    bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
    void set(std::size_t i, bool value) noexcept { bits_[i] = value ? 1 : 0; }
    void flip(std::size_t i) noexcept { bits_[i] ^= 1; }

    std::size_t count() const noexcept;
    BitString complement() const;
    std::string to_string() const;

    std::span<const std::uint8_t> bits() const noexcept { return bits_; }

    bool operator==(const BitString&) const = default;

  private:
    std::vector<std::uint8_t> bits_;
};

/// Number of differing positions. Throws ValidationError on length mismatch.
std::size_t hamming(const BitString& a, const BitString& b);

} // namespace flap
