#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <vector>

namespace recon {

// Self-contained xoshiro256++ generator with splitmix64 stream derivation.
//
// Every stochastic routine in this library draws from an RngStream derived as
// substream(master_seed, tag0, tag1, ...). Tasks that may run concurrently
// (replicates, blocks, chains, columns) each own a private substream, so
// results are identical for any worker count and do not depend on the C++
// standard library's distribution implementations.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed) { init(seed); }

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Hash-chains the tags into a fresh, statistically independent stream.
    static RngStream substream(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
        std::uint64_t h = seed;
        for (std::uint64_t t : tags) {
            std::uint64_t s = t + 0x9e3779b97f4a7c15ULL;
            h ^= splitmix64(s) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        }
        return RngStream(h);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() { return 1.0 - uniform(); }

    // Standard normal, Box-Muller without caching so the draw count per call
    // is fixed (two uniforms per variate).
    double normal() {
        const double u1 = uniform_pos();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    // Unbiased integer in [0, n), rejection sampling.
    std::uint64_t uniform_int(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    // Gamma(shape, 1), Marsaglia-Tsang.
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform_pos();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            const double u = uniform_pos();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    // In-place Fisher-Yates.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // 0..n-1 in random order.
    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        shuffle(idx);
        return idx;
    }

    // Stationary AR(1) path with unit innovations: X_1 ~ N(0, 1/(1-phi^2)),
    // X_t = phi X_{t-1} + e_t. At phi = 0 this is exactly the innovation
    // sequence, so white-noise comparisons share draws path-for-path.
    std::vector<double> stationary_ar1_path(int n, double phi) {
        std::vector<double> x(static_cast<std::size_t>(n));
        x[0] = normal() / std::sqrt(1.0 - phi * phi);
        for (int t = 1; t < n; ++t)
            x[static_cast<std::size_t>(t)] = phi * x[static_cast<std::size_t>(t - 1)] + normal();
        return x;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void init(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& s : s_) s = splitmix64(sm);
    }

    std::uint64_t s_[4];
};

}  // namespace recon
