#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "compotest/errors.hpp"

namespace compotest {

// Thin wrapper over mt19937_64 with platform-stable bounded draws
// (std::uniform_int_distribution is not specified bit-for-bit, and every
// seeded run here must be reproducible byte-for-byte).
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next() { return engine_(); }

    // Unbiased draw in [0, n) via rejection sampling.
    uint64_t below(uint64_t n) {
        if (n == 0) throw Error("Rng::below(0)");
        uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n);
        uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    // Draw in [0,1) with 53 random bits.
    double unit() {
        return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740992.0);
    }

    template <typename T> const T& pick(const std::vector<T>& xs) {
        if (xs.empty()) throw Error("Rng::pick on empty vector");
        return xs[below(xs.size())];
    }

    // Weighted index draw; zero-weight entries are never chosen.
    size_t weighted(const std::vector<double>& weights) {
        double total = 0;
        for (double w : weights) total += w > 0 ? w : 0;
        if (total <= 0) throw Error("Rng::weighted with no positive weight");
        double r = unit() * total;
        for (size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0) continue;
            if (r < weights[i]) return i;
            r -= weights[i];
        }
        for (size_t i = weights.size(); i-- > 0;)
            if (weights[i] > 0) return i;
        throw Error("Rng::weighted unreachable");
    }

private:
    std::mt19937_64 engine_;
};

// Stable seed mixing for derived streams (reset counts, per-test seeds).
inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
}

} // namespace compotest
