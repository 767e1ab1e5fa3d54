#pragma once

#include <cstdint>
#include <vector>

#include "qpav/errors.hpp"

namespace qpav {

/// Seeded, portable 64-bit generator (SplitMix64, Steele/Lea/Flood 2014).
///
/// The full output sequence is a pure function of the seed and is identical
/// on every platform; no standard-library distribution objects are used, so
/// results are reproducible across compilers. `child(i)` derives an
/// independent stream from (seed, i) only, regardless of how much of the
/// parent stream has been consumed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return mix(state_);
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform integer in [0, bound), rejection-sampled (no modulo bias).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
        const std::uint64_t limit = ~std::uint64_t(0) - ~std::uint64_t(0) % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    int uniform_int(int lo, int hi_inclusive) {
        return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi_inclusive - lo + 1)));
    }

    /// Independent stream derived from (seed, stream_index).
    Rng child(std::uint64_t stream_index) const {
        return Rng(mix(seed_ ^ mix(stream_index + 0x632be59bd9b4e019ULL)));
    }

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

    /// k distinct integers sampled uniformly from [0, n), in draw order.
    std::vector<int> sample_distinct(int n, int k) {
        if (k > n) throw ValidationError("Rng::sample_distinct: k > n");
        std::vector<int> pool(n);
        for (int i = 0; i < n; ++i) pool[i] = i;
        std::vector<int> out;
        out.reserve(k);
        for (int i = 0; i < k; ++i) {
            int j = i + static_cast<int>(below(static_cast<std::uint64_t>(n - i)));
            std::swap(pool[i], pool[j]);
            out.push_back(pool[i]);
        }
        return out;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::uint64_t state_;
};

}  // namespace qpav
