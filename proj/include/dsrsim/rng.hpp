#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace dsrsim {

// Deterministic random stream. Every subsystem gets its own stream derived
// from the run seed and a stable label, so e.g. changing the cache size can
// never perturb the mobility draws. mt19937_64 output is fixed by the
// standard; the uniform mappings below are ours, so (seed, label, index)
// yields the same value everywhere.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::string_view label, std::uint64_t index = 0)
        : RngStream(mix(mix(seed ^ fnv1a(label)) ^ index)) {}

    // Independent child stream, e.g. one per node or per flow.
    RngStream substream(std::uint64_t index) const {
        return RngStream{mix(origin_ + 0x9e3779b97f4a7c15ull * (index + 1))};
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform_unit() * (hi - lo); }

    // Uniform integer in [0, n). Multiply-shift; n must be > 0.
    std::uint64_t uniform_int(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    explicit RngStream(std::uint64_t derived) : origin_(derived), gen_(derived) {}

    static constexpr std::uint64_t fnv1a(std::string_view s) {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : s) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t origin_;
    std::mt19937_64 gen_;
};

} // namespace dsrsim
