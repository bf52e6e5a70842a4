#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tsb {

// Identifies one logical random stream. Streams derived from distinct keys are
// statistically independent for simulation purposes; the same key always
// reproduces the same sequence.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t run_index = 0;
    std::string purpose_tag;  // e.g. "env", "policy"
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace detail

// xoshiro256++ generator seeded through SplitMix64 from a StreamKey.
// State is single-owner mutable; copy a stream only to fork a reproducible
// replay, never to share between threads.
class RandomStream {
  public:
    explicit RandomStream(const StreamKey& key) {
        std::uint64_t s = key.master_seed;
        detail::splitmix64(s);
        s ^= detail::rotl(key.run_index, 17) + 0x632be59bd9b4e019ULL;
        detail::splitmix64(s);
        s ^= detail::fnv1a(key.purpose_tag);
        bool all_zero = true;
        for (auto& word : state_) {
            word = detail::splitmix64(s);
            all_zero = all_zero && word == 0;
        }
        if (all_zero) state_[0] = 0x9e3779b97f4a7c15ULL;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result =
            detail::rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0,1) with 53 random mantissa bits.
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    int bernoulli(double p) {
        if (!(p >= 0.0 && p <= 1.0))
            throw std::domain_error("bernoulli: p must lie in [0,1]");
        return uniform() < p ? 1 : 0;
    }

    // Beta(alpha,beta) with positive integer shapes, via two Gamma draws.
    double beta(std::int64_t alpha, std::int64_t beta_shape) {
        if (alpha <= 0 || beta_shape <= 0)
            throw std::domain_error("beta: shapes must be positive integers");
        const double x = gamma_int(alpha);
        const double y = gamma_int(beta_shape);
        return x / (x + y);
    }

    // Exponential(1) draw; uses a (0,1] uniform so the log never sees zero.
    double exponential() {
        const double u =
            static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        return -std::log(u);
    }

    // Standard normal via the Marsaglia polar method; the spare deviate is
    // cached in the stream state.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    // Gamma(shape,1) for integer shape >= 1. Small shapes sum exponentials
    // (exact); larger shapes use the Marsaglia-Tsang squeeze (exact rejection).
    double gamma_int(std::int64_t shape) {
        if (shape <= 0)
            throw std::domain_error("gamma_int: shape must be >= 1");
        if (shape <= kGammaSumCutoff) {
            // -log of a product of (0,1] uniforms; a chunk of 16 draws cannot
            // underflow (each factor >= 2^-53).
            double acc = 0.0;
            double prod = 1.0;
            int in_chunk = 0;
            for (std::int64_t i = 0; i < shape; ++i) {
                prod *= static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
                if (++in_chunk == 16) {
                    acc -= std::log(prod);
                    prod = 1.0;
                    in_chunk = 0;
                }
            }
            if (in_chunk > 0) acc -= std::log(prod);
            return acc;
        }
        const double d = static_cast<double>(shape) - 1.0 / 3.0;
        const double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            const double x2 = x * x;
            if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
            if (u > 0.0 &&
                std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
                return d * v;
            if (u == 0.0) return d * v;
        }
    }

    // Crossover measured on the target machine: the k-exponentials path beats
    // the squeeze only for small k.
    static constexpr std::int64_t kGammaSumCutoff = 8;

  private:
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline RandomStream derive_stream(const StreamKey& key) {
    return RandomStream(key);
}

}  // namespace tsb
