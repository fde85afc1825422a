#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

namespace geoclean {

// exact fraction for report output; only used when every Phase-2 factor is a
// small decimal, so numerators/denominators stay modest
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    void reduce() {
        if (den < 0) { num = -num; den = -den; }
        int64_t g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }
    bool operator==(const Rational&) const = default;
    std::string str() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }
};

// a*b with overflow detection
inline std::optional<int64_t> checked_mul(int64_t a, int64_t b) {
    int64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) return std::nullopt;
    return out;
}

} // namespace geoclean
