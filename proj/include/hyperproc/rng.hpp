#ifndef HYPERPROC_RNG_HPP
#define HYPERPROC_RNG_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

namespace hyperproc {

// Philox 4x32-10 counter-based generator (Salmon et al., SC'11).
// Stateless block function: 128-bit counter + 64-bit key -> 128 random bits.
// Verified against the reference known-answer vectors in the test suite.
struct Philox4x32 {
    static constexpr uint32_t kMult0 = 0xD2511F53u;
    static constexpr uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr uint32_t kWeyl1 = 0xBB67AE85u;

    static std::array<uint32_t, 4> block(std::array<uint32_t, 4> ctr,
                                         std::array<uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            if (round > 0) {
                key[0] += kWeyl0;
                key[1] += kWeyl1;
            }
            const uint64_t p0 = static_cast<uint64_t>(kMult0) * ctr[0];
            const uint64_t p1 = static_cast<uint64_t>(kMult1) * ctr[2];
            ctr = {static_cast<uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
                   static_cast<uint32_t>(p1),
                   static_cast<uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
                   static_cast<uint32_t>(p0)};
        }
        return ctr;
    }
};

// One reproducible random stream, identified by (master_seed, stream_id).
// Streams with distinct ids are statistically independent, so trial i of a
// Monte Carlo run can use RngStream(seed, i) and produce the same numbers
// whether trials execute serially or in parallel.
class RngStream {
public:
    RngStream(uint64_t master_seed, uint64_t stream_id)
        : key_{static_cast<uint32_t>(master_seed),
               static_cast<uint32_t>(master_seed >> 32)},
          hi_{static_cast<uint32_t>(stream_id),
              static_cast<uint32_t>(stream_id >> 32)} {}

    uint64_t next_u64() {
        if (buffer_pos_ >= 2) refill();
        const uint64_t lo = buffer_[2 * buffer_pos_];
        const uint64_t hi = buffer_[2 * buffer_pos_ + 1];
        ++buffer_pos_;
        return lo | (hi << 32);
    }

    // Uniform on [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Uniform integer in [0, n), n >= 1. Rejection on a bitmask keeps the
    // draw exact and platform-independent.
    uint64_t next_below(uint64_t n) {
        if (n <= 1) return 0;
        const uint64_t mask = mask_for(n - 1);
        uint64_t v;
        do {
            v = next_u64() & mask;
        } while (v >= n);
        return v;
    }

    // Exponential with the given rate; strictly positive.
    double next_exponential(double rate) {
        double u;
        do {
            u = next_double();
        } while (u <= 0.0);
        return -std::log(u) / rate;
    }

    // Poisson(mean). Sequential inversion below 10, Hormann's PTRS
    // transformed rejection above; both exact.
    long long next_poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        if (mean < 10.0) return poisson_inversion(mean);
        return poisson_ptrs(mean);
    }

    // Binomial(n, p) by inversion; large n*p handled by halving n and
    // summing two independent binomial draws, which is distribution-exact.
    long long next_binomial(long long n, double p) {
        if (n <= 0 || p <= 0.0) return 0;
        if (p >= 1.0) return n;
        if (p > 0.5) return n - next_binomial(n, 1.0 - p);
        long long total = 0;
        while (static_cast<double>(n) * p > 64.0) {
            const long long half = n / 2;
            total += binomial_inv(half, p);
            n -= half;
        }
        return total + binomial_inv(n, p);
    }

    // Uniform k-subset of {0,..,n-1}, sorted ascending. Sparse partial
    // Fisher-Yates: O(k) time/space, rejection-free.
    std::vector<int> next_subset(int n, int k) {
        scratch_map_.clear();
        std::vector<int> out(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            const int j = i + static_cast<int>(next_below(static_cast<uint64_t>(n - i)));
            const int vi = lookup(i), vj = lookup(j);
            out[static_cast<size_t>(i)] = vj;
            scratch_map_[j] = vi;
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    // Index draw from a cumulative weight table (last entry = total mass).
    int next_from_cdf(const std::vector<double>& cdf) {
        const double u = next_double() * cdf.back();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const auto idx = static_cast<size_t>(it - cdf.begin());
        return static_cast<int>(idx < cdf.size() ? idx : cdf.size() - 1);
    }

private:
    std::array<uint32_t, 2> key_;
    std::array<uint32_t, 2> hi_;
    uint64_t counter_ = 0;
    std::array<uint32_t, 4> buffer_{};
    int buffer_pos_ = 2;
    std::unordered_map<int, int> scratch_map_;

    void refill() {
        buffer_ = Philox4x32::block({static_cast<uint32_t>(counter_),
                                     static_cast<uint32_t>(counter_ >> 32),
                                     hi_[0], hi_[1]},
                                    key_);
        ++counter_;
        buffer_pos_ = 0;
    }

    static uint64_t mask_for(uint64_t v) {
        uint64_t m = v;
        m |= m >> 1;
        m |= m >> 2;
        m |= m >> 4;
        m |= m >> 8;
        m |= m >> 16;
        m |= m >> 32;
        return m;
    }

    int lookup(int i) const {
        const auto it = scratch_map_.find(i);
        return it == scratch_map_.end() ? i : it->second;
    }

    long long poisson_inversion(double mean) {
        const double target = next_double();
        double p = std::exp(-mean);
        double cum = p;
        long long k = 0;
        while (cum < target && k < 2000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

    long long poisson_ptrs(double mean) {
        const double slam = std::sqrt(mean);
        const double loglam = std::log(mean);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double vr = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = next_double() - 0.5;
            const double v = next_double();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
            if (us >= 0.07 && v <= vr) return static_cast<long long>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us)) continue;
            const double lhs = std::log(v) + std::log(inv_alpha) -
                               std::log(a / (us * us) + b);
            const double rhs = kf * loglam - mean - std::lgamma(kf + 1.0);
            if (lhs <= rhs) return static_cast<long long>(kf);
        }
    }

    long long binomial_inv(long long n, double p) {
        if (n <= 0) return 0;
        const double q = 1.0 - p;
        const double s = p / q;
        const double target = next_double();
        double prob = std::pow(q, static_cast<double>(n));
        double cum = prob;
        long long k = 0;
        while (cum < target && k < n) {
            ++k;
            prob *= s * static_cast<double>(n - k + 1) / static_cast<double>(k);
            cum += prob;
        }
        return k;
    }
};

} // namespace hyperproc

#endif
