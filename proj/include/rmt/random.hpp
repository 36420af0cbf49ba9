#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

namespace rmt {

/// One round of the splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replicate `replicate` of stream `stream_tag` under `master_seed`.
/// Chained mixing, so (master, r, tag) triples map to unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t replicate,
                                    std::uint64_t stream_tag = 0) noexcept {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ replicate);
    h = splitmix64(h ^ (stream_tag * 0xD6E8FEB86659FD93ULL));
    return h;
}

/// Seeded generator with platform-independent uniform and normal draws.
///
/// The standard library's distributions are implementation-defined, so the
/// uniform and Gaussian transforms are written out here; only the
/// 64-bit Mersenne Twister engine (fully specified) is taken from <random>.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (-1, 1).
    double uniform_symmetric() {
        double u;
        do {
            u = 2.0 * uniform() - 1.0;
        } while (u == -1.0);
        return u;
    }

    /// Standard normal by the Marsaglia polar method; the second variate of
    /// each accepted pair is cached for the next call.
    double normal() {
        if (spare_) {
            double s = *spare_;
            spare_.reset();
            return s;
        }
        double u, v, s;
        do {
            u = uniform_symmetric();
            v = uniform_symmetric();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        return u * f;
    }

    bool coin() { return (engine_() >> 63) != 0; }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

}  // namespace rmt
