#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace sbreak::rng {

// Generator identifier recorded in run manifests. Bump when the mapping from
// (seed, stream, index) to variates changes.
inline constexpr const char* kGeneratorVersion = "philox4x32-10/box-muller.1";

// Philox-4x32 with 10 rounds. Counter-based: the block function is a pure
// map from (counter, key), so any draw can be addressed directly and
// parallel replications never share state.
struct Philox4x32 {
    static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                              std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += 0x9E3779B9u;
                key[1] += 0xBB67AE85u;
            }
            const std::uint64_t p0 = std::uint64_t{0xD2511F53u} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{0xCD9E8D57u} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<std::uint32_t>(p0)};
        }
        return ctr;
    }
};

// Addressed random variates on a (seed, stream) lane. Block i of the counter
// space yields 128 independent bits; indexed accessors below carve those into
// uniforms, normals and signs. Every accessor is const and thread-safe.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0)
        : seed_(seed), stream_(stream) {}

    std::array<std::uint32_t, 4> block_at(std::uint64_t i) const {
        return Philox4x32::block(
            {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32),
             static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)},
            {static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)});
    }

    // Box-Muller pair from block i; u1 lands in (0,1] so the log is finite.
    std::pair<double, double> normal_pair_at(std::uint64_t i) const {
        const auto w = block_at(i);
        const double u1 = to_unit(w[0], w[1]);
        const double u2 = to_unit(w[2], w[3]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    double normal_at(std::uint64_t i) const {
        const auto p = normal_pair_at(i >> 1);
        return (i & 1) ? p.second : p.first;
    }

    // Uniform on (0,1], 53-bit resolution, two blocks' worth per block word
    // pair (words 0,1 for even i, words 2,3 for odd i).
    double uniform_at(std::uint64_t i) const {
        const auto w = block_at(i >> 1);
        return (i & 1) ? to_unit(w[2], w[3]) : to_unit(w[0], w[1]);
    }

    // Rademacher sign from a single counter word.
    double sign_at(std::uint64_t i) const {
        const auto w = block_at(i >> 2);
        return (w[i & 3] & 1u) ? 1.0 : -1.0;
    }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

private:
    static double to_unit(std::uint32_t hi, std::uint32_t lo) {
        const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
        return static_cast<double>((bits >> 11) + 1) * 0x1p-53;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
};

// Independent per-replicate seed from a master seed; replicate order and
// worker scheduling cannot affect the derived value.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    const auto w = Philox4x32::block(
        {static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
         0x5B5E4A1Du, 0x9D2C5680u},
        {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)});
    return (std::uint64_t{w[0]} << 32) | w[1];
}

} // namespace sbreak::rng
