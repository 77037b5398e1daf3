#pragma once

#include <cmath>
#include <cstdint>

namespace acaf {

/// Counter-based uniform stream. Output i is a pure function of (key, i), so
/// draws can be generated out of order and substreams never overlap for
/// distinct keys. The mixing function is the splitmix64 finalizer.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) : key_(key) {}

    std::uint64_t bits(std::uint64_t counter) const {
        return mix(key_ + (counter + 1) * kGamma);
    }

    /// Uniform draw strictly inside (0,1).
    double uniform(std::uint64_t counter) const {
        return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
    }

    std::uint64_t key() const { return key_; }

    static std::uint64_t mix(std::uint64_t x) {
        x ^= x >> 30;
        x *= 0xBF58476D1CE4E5B9ULL;
        x ^= x >> 27;
        x *= 0x94D049BB133111EBULL;
        x ^= x >> 31;
        return x;
    }

private:
    static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
    std::uint64_t key_;
};

/// Derives an independent substream key from a master seed and stream indices.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t index = 0) {
    std::uint64_t k = CounterRng::mix(master ^ 0x6A09E667F3BCC909ULL);
    k = CounterRng::mix(k + stream * 0x9E3779B97F4A7C15ULL);
    k = CounterRng::mix(k + index * 0xD1B54A32D192ED03ULL);
    return k;
}

/// Sequential adapter over CounterRng for samplers with variable draw counts.
class SequentialRng {
public:
    explicit SequentialRng(std::uint64_t key) : rng_(key) {}

    double uniform() { return rng_.uniform(counter_++); }

    /// Standard normal via Box-Muller (one value per call; the pair's second
    /// half is discarded to keep the draw count predictable).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    CounterRng rng_;
    std::uint64_t counter_ = 0;
};

}  // namespace acaf
