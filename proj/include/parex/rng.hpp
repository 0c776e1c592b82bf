#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "parex/rational.hpp"

namespace parex {

// All randomness flows through Rng seeded from (root seed, property name) so
// reports are reproducible byte for byte. std::mt19937_64 output is fixed by
// the standard; bounded draws below avoid the non-portable distributions.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    static uint64_t sub_seed(uint64_t root, const std::string& label) {
        // FNV-1a, stable across platforms (std::hash is not)
        uint64_t h = 14695981039346656037ull ^ root;
        for (unsigned char c : label) {
            h ^= c;
            h *= 1099511628211ull;
        }
        return h;
    }

    static Rng for_property(uint64_t root, const std::string& label) {
        return Rng(sub_seed(root, label));
    }

    uint64_t next() { return eng_(); }

    // uniform in [0, n)
    uint64_t below(uint64_t n) { return n == 0 ? 0 : eng_() % n; }

    // uniform in [lo, hi]
    int64_t range(int64_t lo, int64_t hi) {
        return lo + static_cast<int64_t>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    bool chance(double p) { return below(1u << 20) < static_cast<uint64_t>(p * (1u << 20)); }

    // small-numerator rational, denominator 1 or 2
    Rational small_rational(int64_t max_abs_num = 2) {
        int64_t num = range(-max_abs_num, max_abs_num);
        int64_t den = chance(0.25) ? 2 : 1;
        return Rational(num, den);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace parex
