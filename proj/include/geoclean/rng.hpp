#pragma once

#include <cstdint>
#include <random>

namespace geoclean {

// mt19937_64 with hand-rolled draws: std::uniform_*_distribution output is
// implementation-defined, these streams are reproducible everywhere
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    // [0, 1) with 53 random bits
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // unbiased integer in [0, n)
    uint64_t below(uint64_t n) {
        if (n == 0) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do { x = eng_(); } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 eng_;
};

} // namespace geoclean
