#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace flap {

/// Seeded pseudo-random source with portable, fully specified draws.
///
/// The standard distributions are implementation-defined, so every draw here
/// is derived directly from the raw 64-bit engine output. Identical seeds give
/// identical streams on every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    /// Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n) {
        // Rejection of the top partial block keeps the draw unbiased.
        const std::uint64_t bound = n;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) {
            x = engine_();
        }
        return static_cast<std::size_t>(x % bound);
    }

    /// Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(index(static_cast<std::size_t>(hi - lo) + 1));
    }

    /// Independent child stream, e.g. one per tree or per run.
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

  private:
    std::mt19937_64 engine_;
};

/// In-place Fisher-Yates shuffle driven by Rng.
template <typename Container>
void shuffle(Container& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        using std::swap;
        swap(items[i - 1], items[rng.index(i)]);
    }
}

} // namespace flap
