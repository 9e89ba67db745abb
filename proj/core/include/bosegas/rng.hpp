#ifndef BOSEGAS_RNG_HPP
#define BOSEGAS_RNG_HPP

#include <cmath>
#include <cstdint>

namespace bosegas {

// Counter-based randomness: every draw is a pure function of (key, counter),
// so ensembles are reproducible regardless of thread count or evaluation
// order. The generator is the splitmix64 finalizer applied to a keyed
// counter; statistical quality is ample for sampling.

struct Seed {
    std::uint64_t master = 1;
    std::uint64_t realization = 0;

    Seed with_realization(std::uint64_t r) const { return {master, r}; }
};

namespace rng {

inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Independent stream key for a (seed, purpose) pair. Distinct salts give
// decorrelated streams for the same physical realization.
inline std::uint64_t derive_key(const Seed& seed, std::uint64_t salt) {
    std::uint64_t k = mix(seed.master);
    k = mix(k ^ mix(seed.realization + 0x632be59bd9b4e019ull));
    return mix(k ^ mix(salt + 0x1d8e4e27c47d124full));
}

inline std::uint64_t bits(std::uint64_t key, std::uint64_t counter) {
    return mix(key + 0x9e3779b97f4a7c15ull * counter);
}

// Uniform on (0, 1]: never returns 0, safe under log.
inline double uniform01(std::uint64_t key, std::uint64_t counter) {
    return (static_cast<double>(bits(key, counter) >> 11) + 1.0) * 0x1.0p-53;
}

// One standard normal per counter (Box-Muller, cosine leg; two sub-draws).
inline double normal(std::uint64_t key, std::uint64_t counter) {
    const double u1 = uniform01(key, 2 * counter);
    const double u2 = uniform01(key, 2 * counter + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace rng
} // namespace bosegas

#endif
