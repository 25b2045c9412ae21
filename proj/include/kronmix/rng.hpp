#ifndef KRONMIX_RNG_HPP
#define KRONMIX_RNG_HPP

#include <cstdint>
#include <limits>
#include <random>

namespace kronmix {

/// Seedable 64-bit generator with reproducible stream derivation.
///
/// Every parallel consumer asks for `Rng::stream(seed, index)` so results do
/// not depend on how work is split across threads. Floating point draws are
/// produced from raw bits (not std distributions) so sequences are identical
/// across standard library implementations.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : engine_(derive(seed, 0, 0)) {}

    static Rng stream(std::uint64_t seed, std::uint64_t index, std::uint64_t tag = 0) {
        Rng r;
        r.engine_ = derive(seed, index, tag);
        return r;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return engine_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = max() - (max() % bound);
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    bool bernoulli(double p) { return uniform() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    static std::seed_seq::result_type half(std::uint64_t v, int hi) {
        return static_cast<std::seed_seq::result_type>(hi ? (v >> 32) : (v & 0xffffffffULL));
    }

    static std::mt19937_64 derive(std::uint64_t seed, std::uint64_t index, std::uint64_t tag) {
        const std::uint64_t a = mix(seed), b = mix(index ^ mix(tag));
        std::seed_seq seq{half(a, 0), half(a, 1), half(b, 0), half(b, 1)};
        return std::mt19937_64(seq);
    }

    std::mt19937_64 engine_;
};

}  // namespace kronmix

#endif  // KRONMIX_RNG_HPP
