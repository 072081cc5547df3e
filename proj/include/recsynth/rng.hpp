#pragma once

#include <cstdint>
#include <string_view>

namespace recsynth {

/// 64-bit finalizer from splitmix64; bijective, well-mixed.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over a string, used to turn step names into stream selectors.
inline constexpr std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Seedable PCG32 stream. A (seed, stream_id) pair selects both the initial
/// state and the LCG increment, so distinct stream_ids run on disjoint
/// orbits and the same pair always replays the same draw sequence
/// regardless of what other streams are doing on other threads.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id)
        : state_(0), inc_((stream_id << 1u) | 1u) {
        next_u32();
        state_ += mix64(seed ^ mix64(stream_id));
        next_u32();
    }

    std::uint32_t next_u32() {
        std::uint64_t old = state_;
        state_ = old * 6364136223846793005ULL + inc_;
        std::uint32_t xorshifted = static_cast<std::uint32_t>(((old >> 18u) ^ old) >> 27u);
        std::uint32_t rot = static_cast<std::uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((-rot) & 31u));
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    /// Uniform on [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform on the open interval (0, 1); safe to feed into inverse CDFs.
    double next_open01() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t next_below(std::uint64_t bound) {
        std::uint64_t threshold = (~bound + 1) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

private:
    std::uint64_t state_;
    std::uint64_t inc_;
};

/// Derives per-entity substreams from a master seed. Stream ids are
/// hash(step_name, index), so the draw sequence of any entity is fixed by
/// (seed, step, index) alone and is independent of worker-thread count.
class StreamFamily {
public:
    explicit StreamFamily(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    RngStream stream(std::string_view step, std::uint64_t index = 0) const {
        return RngStream(seed_, mix64(fnv1a(step) ^ mix64(index)));
    }

private:
    std::uint64_t seed_;
};

}  // namespace recsynth
