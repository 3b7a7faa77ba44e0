#pragma once

// Seed-reproducible random variate generation. Every distribution used by the
// simulator is implemented here with exact methods (inversion or direct
// bit-twiddling) so that a (seed, stream, call sequence) triple produces the
// same variates on every platform. Standard-library distributions are
// deliberately not used: their algorithms are implementation-defined.

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace fearsim {

// splitmix64, used only for state expansion when keying streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Purpose tags for the named streams. A replication owns one logical stream
// per purpose; most purposes are additionally keyed by day (or by individual
// id for disease schedules) so that paired runs which differ only in the
// testing policy consume identical disease randomness day by day.
enum class Stream : std::uint64_t {
    infection_count = 1,   // daily binomial draw of new epidemic infections
    infection_assign = 2,  // which susceptibles get infected (keyed by day)
    disease_schedule = 3,  // symptom type, outcome, lags (keyed by individual)
    confounding_count = 4, // daily rounded-normal confounding draw
    confounding_assign = 5,
    confounding_schedule = 6,
    test_selection = 7,    // random subsets for mild/asymptomatic testing
    test_outcome = 8,      // false-negative draws
};

// xoshiro256** (Blackman & Vigna, public domain reference implementation).
class Xoshiro256 {
  public:
    using result_type = std::uint64_t;

    Xoshiro256() : Xoshiro256(0, Stream::infection_count, 0) {}

    // State derived from (seed, purpose, key) via splitmix64. Distinct
    // triples give streams that are independent for simulation purposes.
    Xoshiro256(std::uint64_t seed, Stream purpose, std::uint64_t key) {
        std::uint64_t h = seed;
        h = splitmix64_next(h) ^ (static_cast<std::uint64_t>(purpose) * 0xD6E8FEB86659FD93ULL);
        h = splitmix64_next(h) ^ (key * 0xCA5A826395121157ULL);
        for (auto& word : state_) word = splitmix64_next(h);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type(0); }

    result_type operator()() {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<std::uint64_t, 4> state_;
};

using RngStream = Xoshiro256;

inline RngStream make_stream(std::uint64_t seed, Stream purpose, std::uint64_t key = 0) {
    return RngStream(seed, purpose, key);
}

// Uniform double in [0, 1), 53 bits of precision.
inline double uniform01(RngStream& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Unbiased uniform integer in [0, n). Rejection sampling.
inline std::uint64_t uniform_below(RngStream& rng, std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_below: n must be positive");
    const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline bool bernoulli(RngStream& rng, double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("bernoulli: p outside [0,1]");
    return uniform01(rng) < p;
}

namespace detail {

// CDF inversion for Binomial(n, p) with p <= 1/2 and n small enough that
// (1-p)^n does not underflow. Consumes exactly one uniform.
inline std::int64_t binomial_inversion(RngStream& rng, std::int64_t n, double p) {
    const double q = 1.0 - p;
    const double ratio = p / q;
    double pmf = std::exp(static_cast<double>(n) * std::log1p(-p));
    double cdf = pmf;
    const double u = uniform01(rng);
    std::int64_t k = 0;
    while (u > cdf && k < n) {
        pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
        cdf += pmf;
        ++k;
        // Guard against the tail where accumulated pmf has fully decayed.
        if (pmf <= 0.0) break;
    }
    return k;
}

} // namespace detail

// Exact Binomial(n, p) sample. Large n is split into independent chunks so
// the starting pmf of each inversion stays within double range; the sum of
// independent binomials with common p is binomial.
inline std::int64_t binomial(RngStream& rng, std::int64_t n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p outside [0,1]");
    if (n == 0 || p == 0.0) return 0;
    if (p == 1.0) return n;
    if (p > 0.5) return n - binomial(rng, n, 1.0 - p);

    const double log_q = std::log1p(-p); // < 0
    const auto max_chunk = static_cast<std::int64_t>(std::floor(-700.0 / log_q));
    std::int64_t total = 0;
    std::int64_t remaining = n;
    while (remaining > 0) {
        const std::int64_t chunk = std::min(remaining, std::max<std::int64_t>(max_chunk, 1));
        total += detail::binomial_inversion(rng, chunk, p);
        remaining -= chunk;
    }
    return total;
}

// Exact Poisson(mean) by CDF inversion, chunked additively for large means
// (Poisson(a+b) = Poisson(a) + Poisson(b)). Means in the model are a few
// days, so the direct branch is the common path.
inline std::int64_t poisson(RngStream& rng, double mean) {
    if (!(mean >= 0.0)) throw std::invalid_argument("poisson: mean must be >= 0");
    if (mean == 0.0) return 0;
    std::int64_t total = 0;
    double remaining = mean;
    while (remaining > 100.0) {
        // peel off a fixed chunk
        double pmf = std::exp(-100.0);
        double cdf = pmf;
        const double u = uniform01(rng);
        std::int64_t k = 0;
        while (u > cdf) {
            ++k;
            pmf *= 100.0 / static_cast<double>(k);
            cdf += pmf;
            if (pmf <= 0.0) break;
        }
        total += k;
        remaining -= 100.0;
    }
    double pmf = std::exp(-remaining);
    double cdf = pmf;
    const double u = uniform01(rng);
    std::int64_t k = 0;
    while (u > cdf) {
        ++k;
        pmf *= remaining / static_cast<double>(k);
        cdf += pmf;
        if (pmf <= 0.0) break;
    }
    return total + k;
}

// Poisson(mean_minus_one) + 1; the incubation-period draw, always >= 1 day.
inline std::int64_t shifted_poisson(RngStream& rng, double mean_minus_one) {
    return 1 + poisson(rng, mean_minus_one);
}

// Geometric on {1, 2, ...} with success probability p: number of daily
// trials until the first success. Inversion with a single uniform.
inline std::int64_t geometric(RngStream& rng, double p) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("geometric: p outside (0,1]");
    if (p == 1.0) return 1;
    const double u = uniform01(rng);
    const double k = std::floor(std::log1p(-u) / std::log1p(-p));
    return 1 + static_cast<std::int64_t>(k);
}

// Standard normal via Box-Muller (one value per call; two uniforms consumed).
inline double standard_normal(RngStream& rng) {
    const double u1 = 1.0 - uniform01(rng); // (0, 1], keeps log finite
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Normal draw rounded to the nearest integer and clamped below at zero.
// Negative draws are ~10 sigma events at the calibrations of interest.
inline std::int64_t rounded_normal(RngStream& rng, double mean, double sd) {
    if (!(sd >= 0.0)) throw std::invalid_argument("rounded_normal: sd must be >= 0");
    const double draw = mean + sd * standard_normal(rng);
    const auto rounded = static_cast<std::int64_t>(std::llround(draw));
    return rounded < 0 ? 0 : rounded;
}

// Uniformly random k-subset of {0, ..., n-1}. Partial Fisher-Yates on an
// index vector; order of the result is deterministic but not meaningful.
inline std::vector<std::int64_t> sample_without_replacement(RngStream& rng, std::int64_t n,
                                                            std::int64_t k) {
    if (k < 0 || k > n) throw std::invalid_argument("sample_without_replacement: need 0 <= k <= n");
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
    std::vector<std::int64_t> out;
    out.reserve(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        const std::uint64_t j = i + uniform_below(rng, static_cast<std::uint64_t>(n - i));
        std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
        out.push_back(idx[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace fearsim
