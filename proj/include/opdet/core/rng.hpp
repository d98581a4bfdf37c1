#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace opdet {

/// splitmix64 mix of (seed, index); used to derive independent per-scene /
/// per-chip streams so parallel and serial runs agree bit for bit.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// mt19937_64 with hand-rolled distributions. The standard distribution
/// objects are implementation-defined, which would break byte-identical
/// reruns across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0,1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo,hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [lo,hi], inclusive.
    int uniform_int(int lo, int hi) {
        const double span = static_cast<double>(hi) - lo + 1.0;
        int v = lo + static_cast<int>(uniform() * span);
        return v > hi ? hi : v;
    }

    /// Uniform index in [0,n).
    std::size_t index(std::size_t n) {
        std::size_t v = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return v >= n ? n - 1 : v;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Gaussian via Box-Muller (cached pair half).
    double normal(double mean, double sigma) {
        if (have_spare_) {
            have_spare_ = false;
            return mean + sigma * spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double two_pi = 6.283185307179586476925286766559;
        spare_ = mag * std::sin(two_pi * u2);
        have_spare_ = true;
        return mean + sigma * mag * std::cos(two_pi * u2);
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[index(v.size())];
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace opdet
