#ifndef RITESCENE_RNG_HPP
#define RITESCENE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace ritescene {

// Deterministic splitmix64 generator. Every randomized component in the
// toolkit draws from this so that results are reproducible bit-for-bit
// across platforms and standard-library versions (std::uniform_*
// distributions do not guarantee that).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0,1), 53-bit resolution.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [lo, hi] inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Standard normal via Box-Muller.
    double normal() {
        double u1 = uniform();
        double u2 = uniform();
        if (u1 <= 0.0) u1 = 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    // Independent child stream; children with distinct tags never collide
    // regardless of how much the parent has been consumed.
    Rng fork(std::uint64_t tag) {
        Rng mix(state_ ^ (0xa0761d6478bd642fULL * (tag + 1)));
        return Rng(mix.next_u64());
    }

private:
    std::uint64_t state_;
};

}  // namespace ritescene

#endif
