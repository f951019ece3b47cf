#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace causalgen {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace detail

// Deterministic random source. All sampling routines are written out
// explicitly (rather than delegating to std:: distributions) so that a
// given seed produces the same stream on every standard library.
//
// Substreams are derived from the root seed and a tag, which lets
// independent pipeline stages draw from non-overlapping streams and makes
// results independent of evaluation order.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(detail::splitmix64(seed)) {}

    std::uint64_t seed() const { return seed_; }

    Rng substream(std::string_view tag) const {
        return Rng(detail::splitmix64(seed_ ^ detail::fnv1a(tag)));
    }
    Rng substream(std::uint64_t a, std::uint64_t b = 0) const {
        return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(a * 0x9e3779b97f4a7c15ULL + b)));
    }
    Rng substream(std::string_view tag, std::uint64_t a, std::uint64_t b = 0) const {
        return substream(tag).substream(a, b);
    }

    std::uint64_t next_u64() { return eng_(); }

    // uniform on [0, 1) with 53-bit resolution
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // value in [0, n), unbiased via rejection on a power-of-two mask
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n <= 1) return 0;
        const int bits = std::bit_width(n - 1);
        const std::uint64_t mask = bits >= 64 ? ~0ULL : (1ULL << bits) - 1;
        std::uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double normal(double mu = 0.0, double sigma = 1.0) {
        // Box-Muller; the second variate is discarded to keep the stream
        // position a pure function of the number of calls
        double u1;
        do {
            u1 = uniform01();
        } while (u1 <= 0.0);
        double u2 = uniform01();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
        return mu + sigma * z;
    }

    double exponential(double scale) {
        double u;
        do {
            u = uniform01();
        } while (u <= 0.0);
        return -scale * std::log(u);
    }

    // Marsaglia-Tsang; boosts shape < 1 through the power transform
    double gamma_dist(double shape, double scale) {
        if (shape < 1.0) {
            double u;
            do {
                u = uniform01();
            } while (u <= 0.0);
            return gamma_dist(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
        }
    }

    double beta_dist(double a, double b) {
        double x = gamma_dist(a, 1.0);
        double y = gamma_dist(b, 1.0);
        return x / (x + y);
    }

    double chi_squared(double k) { return gamma_dist(0.5 * k, 2.0); }

    double lognormal(double mu_log, double sigma_log) { return std::exp(normal(mu_log, sigma_log)); }

    double laplace(double mu, double b) {
        double u;
        do {
            u = uniform01() - 0.5;
        } while (std::fabs(u) >= 0.5);
        double sgn = u < 0.0 ? -1.0 : 1.0;
        return mu - b * sgn * std::log(1.0 - 2.0 * std::fabs(u));
    }

    // pdf a*y^(a-1) on [loc, loc+scale]
    double powerlaw(double a, double loc, double scale) {
        return loc + scale * std::pow(uniform01(), 1.0 / a);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

}  // namespace causalgen
