#pragma once

#include <cstdint>
#include <random>

namespace manet {

/// SplitMix64 finalizer; used to derive independent stream seeds from a master seed.
constexpr std::uint64_t SplitMix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

enum class StreamPurpose : std::uint64_t { Mobility = 1, Traffic = 2 };

/**
 * Deterministic random stream. Streams for different (purpose, index) pairs are
 * seeded independently, so draws on one node never perturb another node's stream.
 */
class RngStream {
  public:
    RngStream() = default;

    RngStream(std::uint64_t masterSeed, StreamPurpose purpose, std::uint64_t index)
        : m_engine(SplitMix64(SplitMix64(masterSeed ^ SplitMix64(static_cast<std::uint64_t>(purpose))) +
                              index))
    {
    }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double Uniform01() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

    /// Uniform integer in [0, n).
    std::uint64_t UniformIndex(std::uint64_t n)
    {
        // Rejection sampling keeps the draw unbiased and independent of the stdlib.
        const std::uint64_t limit = (~0ull) - ((~0ull) % n);
        std::uint64_t v;
        do {
            v = m_engine();
        } while (v >= limit);
        return v % n;
    }

  private:
    std::mt19937_64 m_engine{0};
};

} // namespace manet
