#ifndef QTRAJ_RNG_HPP
#define QTRAJ_RNG_HPP

#include <cstdint>
#include <random>

namespace qtraj {

// splitmix64: used only to derive well-separated substream seeds from a master
// seed, so results do not depend on evaluation order (cells, trajectories and
// stages each get an independent stream).
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Seed for substream `stream` of the given master seed.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s);
    s = a ^ (stream * 0x9e3779b97f4a7c15ull + 0x7f4a7c15ull);
    return splitmix64(s);
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

/// Uniform double in [0, 1) from the top 53 bits; avoids distribution objects
/// so the mapping from engine output to variate is pinned by this code.
inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Stage tags for substream derivation (arbitrary, distinct, frozen).
inline constexpr std::uint64_t kStreamTrajectories = 101;
inline constexpr std::uint64_t kStreamWeakScan = 202;
inline constexpr std::uint64_t kStreamReconstruct = 303;
inline constexpr std::uint64_t kStreamFieldMode = 404;

}  // namespace qtraj

#endif
