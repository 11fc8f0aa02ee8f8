#pragma once

#include <cstdint>
#include <string_view>

namespace qam {

/// Identity of a deterministic random stream. A (master_seed, stream_index)
/// pair fully determines every value the stream ever produces, so independent
/// tasks can be given disjoint stream indices and replayed in any order.
struct RngSeed {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    RngSeed with_stream(std::uint64_t stream) const { return {master_seed, stream}; }
};

constexpr std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
}

/// Counter-style generator built on splitmix64. Unlike the standard library
/// distributions, every operation here is pinned to a fixed algorithm so that
/// results are identical across platforms and compilers.
class RngStream {
public:
    explicit RngStream(RngSeed seed)
        : key_(mix(mix(seed.master_seed + 0x9e3779b97f4a7c15ULL) ^
                   mix(seed.stream_index + 0xbf58476d1ce4e5b9ULL))),
          state_(key_) {}

    /// Derives an independent stream from this stream's identity (not from
    /// its consumed state), so substreams are stable regardless of how much
    /// of the parent has been used.
    RngStream substream(std::uint64_t salt) const {
        return RngStream(hash_combine(key_, mix(salt)));
    }

    RngStream substream(std::string_view label) const { return substream(fnv1a(label)); }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    double uniform_real(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    bool bernoulli(double p) { return next_double() < p; }

private:
    explicit RngStream(std::uint64_t key) : key_(key), state_(key) {}

    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t state_;
};

}  // namespace qam
