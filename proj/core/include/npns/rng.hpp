#pragma once

#include <array>
#include <cstdint>

namespace npns {

// Philox4x32-10 counter-based generator. A draw is a pure function of
// (seed, stream, step, slot), so ensemble workers share nothing and a
// trajectory replays bit-identically from its (seed, stream) pair.
std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key);

class CounterRng {
public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

    // k-th standard normal of a step (Box-Muller on Philox uniforms).
    double normal(uint64_t step, uint32_t k) const;

    // Fills out[0..n) with independent standard normals for one step.
    void normals(uint64_t step, uint32_t n, double* out) const;

    // Uniform draws in (0,1), two per counter block.
    double uniform(uint64_t step, uint32_t k) const;

private:
    std::array<uint32_t, 4> block(uint64_t step, uint32_t slot) const;

    uint64_t seed_;
    uint64_t stream_;
};

}  // namespace npns
