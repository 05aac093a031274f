#pragma once

#include <cstdint>
#include <random>

namespace bpir {

/// splitmix64 step; used to derive independent sub-stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic child seed for sub-stream `index` of `base`.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    return splitmix64(s);
}

/// Two-level stream split (e.g. per database, per block).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(base, a), b);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c) {
    return derive_seed(derive_seed(base, a, b), c);
}

/// Seeded random source. Wraps mt19937_64 but does the integer-range
/// reduction itself so sampled values are identical across platforms
/// (uniform_int_distribution is implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform value in [0, bound) via rejection; bound >= 1.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = gen_();
        } while (v >= limit);
        return v % bound;
    }

    /// Bernoulli(p) draw with p in [0,1].
    bool coin(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        // 53-bit mantissa uniform in [0,1)
        const double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return u < p;
    }

    /// Independent stream derived from this source's seed (not its state).
    Rng child(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

} // namespace bpir
