#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>

namespace tlab {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t s = a ^ (b * 0xd1342543de82ef95ull);
    splitmix64(s);
    return splitmix64(s);
}

/// Names one reproducible random stream. Streams with the same root seed but
/// different indices are seeded through a 64-bit mixing hash and treated as
/// independent. Work is always partitioned by deriving child streams, never
/// by handing out pieces of a single stream.
struct RandomStream {
    std::uint64_t root_seed = 0;
    std::uint64_t stream_index = 0;

    /// Child stream `k`, used for sharding and for sub-tasks of an experiment.
    [[nodiscard]] RandomStream child(std::uint64_t k) const noexcept {
        return {root_seed, mix64(stream_index + 0x632be59bd9b4e019ull, k)};
    }

    friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

/// xoshiro256** seeded from a RandomStream. All variate generation is done
/// here rather than through <random> distributions so that draws are
/// bit-identical across standard library implementations.
class Engine {
public:
    explicit Engine(const RandomStream& stream) noexcept {
        std::uint64_t sm = mix64(stream.root_seed, stream.stream_index);
        for (auto& w : s_) w = splitmix64(sm);
    }

    std::uint64_t next() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on the open interval (0, 1).
    double uniform() noexcept {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

    // Marsaglia polar method; the spare variate is cached.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        has_spare_ = true;
        return u * f;
    }

    // Exp(1).
    double exponential() noexcept { return -std::log(uniform()); }

    bool coin() noexcept { return (next() >> 63) != 0; }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace tlab
