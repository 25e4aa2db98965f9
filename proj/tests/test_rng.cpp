#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "npns/rng.hpp"

using namespace npns;

// Published Philox4x32-10 reference vectors (Random123 known-answer set).
TEST_CASE("philox4x32-10 reference vectors") {
    {
        const auto r = philox4x32({0, 0, 0, 0}, {0, 0});
        CHECK(r[0] == 0x6627e8d5u);
        CHECK(r[1] == 0xe169c58du);
        CHECK(r[2] == 0xbc57ac4cu);
        CHECK(r[3] == 0x9b00dbd8u);
    }
    {
        const auto r = philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                  {0xffffffffu, 0xffffffffu});
        CHECK(r[0] == 0x408f276du);
        CHECK(r[1] == 0x41c83b0eu);
        CHECK(r[2] == 0xa20bc7c6u);
        CHECK(r[3] == 0x6d5451fdu);
    }
    {
        const auto r = philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                  {0xa4093822u, 0x299f31d0u});
        CHECK(r[0] == 0xd16cfe09u);
        CHECK(r[1] == 0x94fdccebu);
        CHECK(r[2] == 0x5001e420u);
        CHECK(r[3] == 0x24126ea1u);
    }
}

TEST_CASE("draws are reproducible and keyed by (seed, stream, step)") {
    const CounterRng a(42, 3), b(42, 3), c(42, 4), d(43, 3);
    CHECK(a.normal(7, 0) == b.normal(7, 0));
    CHECK(a.normal(7, 1) == b.normal(7, 1));
    CHECK(a.normal(7, 0) != c.normal(7, 0));
    CHECK(a.normal(7, 0) != d.normal(7, 0));
    CHECK(a.normal(7, 0) != a.normal(8, 0));
    CHECK(a.uniform(7, 0) != a.normal(7, 0));

    double buf[5];
    a.normals(7, 5, buf);
    for (uint32_t k = 0; k < 5; ++k) CHECK(buf[k] == a.normal(7, k));
}

TEST_CASE("normal draws have the right first two moments") {
    const CounterRng rng(2024, 0);
    const int n = 200000;
    double sum = 0.0, sum2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = rng.normal(static_cast<uint64_t>(k), 0);
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) <= 4.0 / std::sqrt(static_cast<double>(n)));
    CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("uniforms stay inside (0,1)") {
    const CounterRng rng(9, 1);
    for (int k = 0; k < 1000; ++k) {
        const double u = rng.uniform(0, static_cast<uint32_t>(k));
        CHECK(u > 0.0);
        CHECK(u < 1.0);
    }
}
