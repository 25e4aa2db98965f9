#include "npns/rng.hpp"

#include <cmath>

namespace npns {

namespace {

constexpr uint32_t kMul0 = 0xD2511F53u;
constexpr uint32_t kMul1 = 0xCD9E8D57u;
constexpr uint32_t kWeyl0 = 0x9E3779B9u;
constexpr uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(uint32_t a, uint32_t b, uint32_t& hi, uint32_t& lo) {
    const uint64_t p = static_cast<uint64_t>(a) * b;
    hi = static_cast<uint32_t>(p >> 32);
    lo = static_cast<uint32_t>(p);
}

inline std::array<uint32_t, 4> round_(const std::array<uint32_t, 4>& c,
                                      const std::array<uint32_t, 2>& k) {
    uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

constexpr double kInv32 = 1.0 / 4294967296.0;  // 2^-32
constexpr double kTwoPi = 6.283185307179586476925286766559;

inline double to_unit(uint32_t w) { return (static_cast<double>(w) + 0.5) * kInv32; }

}  // namespace

std::array<uint32_t, 4> philox4x32(const std::array<uint32_t, 4>& counter,
                                   const std::array<uint32_t, 2>& key) {
    std::array<uint32_t, 4> c = counter;
    std::array<uint32_t, 2> k = key;
    for (int r = 0; r < 10; ++r) {
        c = round_(c, k);
        k[0] += kWeyl0;
        k[1] += kWeyl1;
    }
    return c;
}

std::array<uint32_t, 4> CounterRng::block(uint64_t step, uint32_t slot) const {
    const std::array<uint32_t, 4> counter = {
        slot,
        static_cast<uint32_t>(step),
        static_cast<uint32_t>(step >> 32),
        static_cast<uint32_t>(stream_),
    };
    const std::array<uint32_t, 2> key = {
        static_cast<uint32_t>(seed_),
        static_cast<uint32_t>(seed_ >> 32) ^ static_cast<uint32_t>(stream_ >> 32),
    };
    return philox4x32(counter, key);
}

double CounterRng::normal(uint64_t step, uint32_t k) const {
    const auto w = block(step, k >> 1);
    const double u1 = to_unit(w[0]);
    const double u2 = to_unit(w[1]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    return (k & 1u) ? r * std::sin(kTwoPi * u2) : r * std::cos(kTwoPi * u2);
}

void CounterRng::normals(uint64_t step, uint32_t n, double* out) const {
    for (uint32_t k = 0; k < n; k += 2) {
        const auto w = block(step, k >> 1);
        const double u1 = to_unit(w[0]);
        const double u2 = to_unit(w[1]);
        const double r = std::sqrt(-2.0 * std::log(u1));
        out[k] = r * std::cos(kTwoPi * u2);
        if (k + 1 < n) out[k + 1] = r * std::sin(kTwoPi * u2);
    }
}

double CounterRng::uniform(uint64_t step, uint32_t k) const {
    // separate slot space from normal() so mixed use cannot alias
    const auto w = block(step, (k >> 2) | 0x80000000u);
    return to_unit(w[k & 3u]);
}

}  // namespace npns
