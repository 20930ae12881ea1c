#include <doctest.h>

#include <cmath>
#include <set>

#include "sbreak/rng.hpp"

using namespace sbreak;

TEST_SUITE("rng") {

TEST_CASE("philox known-answer vectors") {
    // reference vectors for the 10-round 4x32 variant
    auto out = rng::Philox4x32::block({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);

    out = rng::Philox4x32::block({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                 {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);

    out = rng::Philox4x32::block({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                 {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
}

TEST_CASE("streams and seeds separate draws") {
    rng::RandomStream a(1, 0), b(1, 1), c(2, 0);
    CHECK(a.normal_at(0) != b.normal_at(0));
    CHECK(a.normal_at(0) != c.normal_at(0));
    CHECK(a.normal_at(0) == rng::RandomStream(1, 0).normal_at(0));
}

TEST_CASE("normal moments at one million draws") {
    rng::RandomStream s(42);
    const std::size_t n = 1'000'000;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = s.normal_at(i);
        sum += z;
        sum2 += z * z;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::fabs(mean) < 0.005);
    CHECK(std::fabs(var - 1.0) < 0.01);
}

TEST_CASE("signs are +-1 with near-even frequency") {
    rng::RandomStream s(7);
    int pos = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double v = s.sign_at(i);
        CHECK((v == 1.0 || v == -1.0));
        if (v > 0) ++pos;
    }
    CHECK(std::fabs(pos / static_cast<double>(n) - 0.5) < 0.01);
}

TEST_CASE("derived replicate seeds are distinct") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(rng::derive_seed(123, i));
    CHECK(seen.size() == 10000);
}

TEST_CASE("uniforms live in (0, 1]") {
    rng::RandomStream s(9);
    for (int i = 0; i < 1000; ++i) {
        const double u = s.uniform_at(i);
        CHECK(u > 0.0);
        CHECK(u <= 1.0);
    }
}

} // TEST_SUITE
