#pragma once

#include <cstdint>
#include <random>

namespace cranring {

/// splitmix64 step; used to derive child seeds so that every (master, index)
/// pair maps to a well-mixed seed independent of evaluation order.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(splitmix64(master) ^ splitmix64(index * 0x9e3779b97f4a7c15ULL + 1));
}

/// mt19937_64 with reproducible bounded draws (std distributions are
/// implementation-defined; these are not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// true with probability p.
    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return to_unit(next_u64()) < p;
    }

    /// Uniform in [0, n) via 128-bit multiply (Lemire, without rejection;
    /// bias < 2^-64 is irrelevant here).
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Uniform double in [0, 1).
    double unit() { return to_unit(next_u64()); }

private:
    static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

    std::mt19937_64 engine_;
};

}  // namespace cranring
