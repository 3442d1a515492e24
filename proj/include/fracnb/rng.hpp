#ifndef FRACNB_RNG_HPP
#define FRACNB_RNG_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace fracnb {

// Philox4x32-10 block function.
inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
    constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
    constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
        std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
        std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
        std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
        std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += W0;
        key[1] += W1;
    }
    return ctr;
}

// Counter-based stream keyed by seed; the stream id occupies the upper counter words.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_(stream_id) {}

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_; }
    std::uint64_t counter() const { return counter_; }

    std::uint32_t next_u32() {
        if (idx_ == 4) refill();
        return buf_[idx_++];
    }

    std::uint64_t next_u64() {
        std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // Uniform on the open interval (0,1).
    double uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

private:
    void refill() {
        std::array<std::uint32_t, 4> c{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                       static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        std::array<std::uint32_t, 2> k{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
        buf_ = philox4x32(c, k);
        ++counter_;
        idx_ = 0;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> buf_{};
    int idx_ = 4;
};

namespace rng {

inline double exponential(RngStream& r) { return -std::log(r.uniform()); }

// Marsaglia polar method; the spare value is discarded to keep the stream stateless.
inline double normal(RngStream& r) {
    for (;;) {
        double u = 2.0 * r.uniform() - 1.0;
        double v = 2.0 * r.uniform() - 1.0;
        double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

// Marsaglia-Tsang squeeze; shape < 1 uses Gamma(shape+1) * U^{1/shape}.
inline double gamma(RngStream& r, double shape, double rate) {
    if (shape < 1.0) {
        double g = gamma(r, shape + 1.0, 1.0);
        return g * std::exp(std::log(r.uniform()) / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x, v;
        do {
            x = normal(r);
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        double u = r.uniform();
        double x2 = x * x;
        if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
        if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

// Inversion for small means, Hormann's PTRS otherwise.
inline std::int64_t poisson(RngStream& r, double mu) {
    if (!(mu > 0.0)) return 0;
    if (mu < 10.0) {
        double u = r.uniform();
        double p = std::exp(-mu);
        double F = p;
        std::int64_t k = 0;
        while (u > F && k < 1000) {
            ++k;
            p *= mu / k;
            F += p;
        }
        return k;
    }
    const double smu = std::sqrt(mu);
    const double lmu = std::log(mu);
    const double b = 0.931 + 2.53 * smu;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        double U = r.uniform() - 0.5;
        double V = r.uniform();
        double us = 0.5 - std::fabs(U);
        double kd = std::floor((2.0 * a / us + b) * U + mu + 0.43);
        if (us >= 0.07 && V <= vr) return static_cast<std::int64_t>(kd);
        if (kd < 0.0 || (us < 0.013 && V > us)) continue;
        if (std::log(V) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -mu + kd * lmu - std::lgamma(kd + 1.0))
            return static_cast<std::int64_t>(kd);
    }
}

// Logarithmic series LS(eta) on {1,2,...} by sequential inversion.
inline std::int64_t log_series(RngStream& r, double eta) {
    double u = r.uniform();
    double p = -eta / std::log1p(-eta);
    double F = p;
    std::int64_t k = 1;
    while (u > F && p > 0.0) {
        p *= eta * k / (k + 1.0);
        F += p;
        ++k;
    }
    return k;
}

// D_beta(1) with Laplace transform exp(-s^beta), by the Kanter transform.
inline double stable_oneside(RngStream& r, double beta) {
    using std::numbers::pi;
    if (beta == 1.0) return 1.0;
    double u = pi * r.uniform();
    double e = exponential(r);
    double l = std::log(std::sin(beta * u)) - std::log(std::sin(u)) / beta +
               (1.0 - beta) / beta * (std::log(std::sin((1.0 - beta) * u)) - std::log(e));
    return std::exp(l);
}

}  // namespace rng

}  // namespace fracnb

#endif
