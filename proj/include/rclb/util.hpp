#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <thread>
#include <vector>

#include "rclb/errors.hpp"

namespace rclb {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

inline i64 checked_mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw bounds_error("64-bit multiply overflow");
    return r;
}

inline i64 checked_add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw bounds_error("64-bit add overflow");
    return r;
}

inline i64 ipow_checked(i64 base, int e) {
    i64 r = 1;
    while (e-- > 0) r = checked_mul(r, base);
    return r;
}

inline i64 isqrt(i64 n) {
    if (n < 0) throw domain_error("isqrt of negative");
    i64 r = static_cast<i64>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

inline i64 gcd64(i64 a, i64 b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

// x*a + y*b = g = gcd(a,b), g >= 0 for a,b >= 0.
inline i64 ext_gcd(i64 a, i64 b, i64& x, i64& y) {
    if (b == 0) {
        x = a >= 0 ? 1 : -1;
        y = 0;
        return a >= 0 ? a : -a;
    }
    i64 x1, y1;
    i64 g = ext_gcd(b, a % b, x1, y1);
    x = y1;
    y = x1 - (a / b) * y1;
    return g;
}

// Inverse of a modulo m > 1; requires gcd(a, m) = 1.
inline i64 mod_inverse(i64 a, i64 m) {
    i64 x, y;
    a %= m;
    if (a < 0) a += m;
    i64 g = ext_gcd(a, m, x, y);
    if (g != 1) throw domain_error("mod_inverse: arguments not coprime");
    x %= m;
    if (x < 0) x += m;
    return x;
}

// Splittable deterministic PRNG (splitmix64); used by seeded property tests
// and sampling, never by anything that affects report output.
struct SplitMix64 {
    u64 state;
    explicit SplitMix64(u64 seed) : state(seed) {}
    u64 next() {
        u64 z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    u64 below(u64 n) { return next() % n; }
};

// Runs fn(block_index, lo, hi) over [begin, end) split into fixed-size blocks.
// Block boundaries do not depend on the worker count, and callers merge the
// per-block results in block order, so outputs are worker-count independent.
template <class Fn>
void parallel_blocks(i64 begin, i64 end, i64 block_size, int workers, Fn&& fn) {
    if (begin >= end) return;
    if (block_size <= 0) throw config_error("block size must be positive");
    const i64 nblocks = (end - begin + block_size - 1) / block_size;
    if (workers <= 1 || nblocks == 1) {
        for (i64 b = 0; b < nblocks; ++b) {
            i64 lo = begin + b * block_size;
            i64 hi = std::min(end, lo + block_size);
            fn(static_cast<std::size_t>(b), lo, hi);
        }
        return;
    }
    std::atomic<i64> next{0};
    auto work = [&]() {
        for (;;) {
            i64 b = next.fetch_add(1);
            if (b >= nblocks) break;
            i64 lo = begin + b * block_size;
            i64 hi = std::min(end, lo + block_size);
            fn(static_cast<std::size_t>(b), lo, hi);
        }
    };
    std::vector<std::thread> pool;
    int n = std::min<i64>(workers, nblocks);
    pool.reserve(n);
    for (int t = 0; t < n; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
}

} // namespace rclb
