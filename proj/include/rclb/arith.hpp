#pragma once

// Exact integer substrate: segmented prime sieve, 64-bit factorization,
// radicals, and streaming enumeration of squarefree integers subject to a
// predicate on their prime factors.

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

struct PrimePower {
    i64 prime;
    int exponent;
    bool operator==(const PrimePower&) const = default;
};

struct Factorization {
    i64 value = 1; // |n|
    std::vector<PrimePower> factors; // primes strictly increasing

    i64 radical() const {
        i64 r = 1;
        for (auto& f : factors) r = checked_mul(r, f.prime);
        return r;
    }
    int omega() const { return static_cast<int>(factors.size()); }
    bool squarefree() const {
        for (auto& f : factors)
            if (f.exponent > 1) return false;
        return true;
    }
};

namespace detail {

inline u64 mulmod_u64(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

inline u64 powmod_u64(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

} // namespace detail

// Deterministic Miller-Rabin for the full 64-bit range.
inline bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        u64 x = detail::powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = detail::mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

// Bitset over odd integers <= limit. Cache file layout: "RCLB", version 0x01,
// little-endian 64-bit limit, then the raw odd-index bitset words.
class PrimeTable {
public:
    static constexpr i64 kMaxLimit = i64{1} << 40;
    static constexpr i64 kSegment = i64{1} << 20;

    explicit PrimeTable(i64 limit) : limit_(limit) {
        if (limit < 2 || limit > kMaxLimit) throw bounds_error("sieve limit out of range [2, 2^40]");
        sieve();
    }

    i64 limit() const { return limit_; }

    bool is_prime(i64 n) const {
        if (n < 2 || n > limit_) return false;
        if (n == 2) return true;
        if (n % 2 == 0) return false;
        return bit(n);
    }

    template <class Fn>
    void for_each_prime(Fn&& fn) const {
        if (limit_ >= 2) fn(i64{2});
        for (i64 n = 3; n <= limit_; n += 2)
            if (bit(n)) fn(n);
    }

    std::vector<i64> primes() const {
        std::vector<i64> out;
        out.reserve(static_cast<std::size_t>(limit_ > 16 ? limit_ / (std::log(double(limit_)) - 1.1) : 8));
        for_each_prime([&](i64 p) { out.push_back(p); });
        return out;
    }

    i64 count() const {
        i64 c = 0;
        for_each_prime([&](i64) { ++c; });
        return c;
    }

    void save(const std::string& path) const {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw io_error("cannot write prime cache: " + path);
        out.write("RCLB", 4);
        const char version = 0x01;
        out.write(&version, 1);
        unsigned char lim[8];
        for (int i = 0; i < 8; ++i) lim[i] = static_cast<unsigned char>((static_cast<u64>(limit_) >> (8 * i)) & 0xff);
        out.write(reinterpret_cast<const char*>(lim), 8);
        out.write(reinterpret_cast<const char*>(bits_.data()),
                  static_cast<std::streamsize>(bits_.size() * sizeof(u64)));
        if (!out) throw io_error("short write to prime cache: " + path);
    }

    static PrimeTable load(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw io_error("cannot open prime cache: " + path);
        char magic[4];
        in.read(magic, 4);
        if (!in || std::memcmp(magic, "RCLB", 4) != 0) throw io_error("bad prime cache magic");
        char version = 0;
        in.read(&version, 1);
        if (!in || version != 0x01) throw io_error("unsupported prime cache version");
        unsigned char lim[8];
        in.read(reinterpret_cast<char*>(lim), 8);
        if (!in) throw io_error("truncated prime cache header");
        u64 limit = 0;
        for (int i = 0; i < 8; ++i) limit |= static_cast<u64>(lim[i]) << (8 * i);
        if (limit < 2 || limit > static_cast<u64>(kMaxLimit)) throw io_error("prime cache limit out of range");
        PrimeTable t(private_tag{}, static_cast<i64>(limit));
        in.read(reinterpret_cast<char*>(t.bits_.data()),
                static_cast<std::streamsize>(t.bits_.size() * sizeof(u64)));
        if (!in) throw io_error("truncated prime cache body");
        return t;
    }

    // Loads <dir>/primes_<limit>.rclb when present, otherwise sieves and caches.
    static PrimeTable load_or_sieve(i64 limit, const std::string& cache_dir) {
        if (cache_dir.empty()) return PrimeTable(limit);
        std::filesystem::create_directories(cache_dir);
        std::string path = cache_dir + "/primes_" + std::to_string(limit) + ".rclb";
        if (std::filesystem::exists(path)) {
            PrimeTable t = load(path);
            if (t.limit() == limit) return t;
        }
        PrimeTable t(limit);
        t.save(path);
        return t;
    }

private:
    struct private_tag {};
    PrimeTable(private_tag, i64 limit) : limit_(limit) { bits_.assign(words(limit), 0); }

    static std::size_t words(i64 limit) { return static_cast<std::size_t>(limit / 2 / 64 + 1); }

    bool bit(i64 odd_n) const {
        u64 idx = static_cast<u64>(odd_n >> 1);
        return (bits_[idx >> 6] >> (idx & 63)) & 1;
    }
    void set_bit(i64 odd_n) {
        u64 idx = static_cast<u64>(odd_n >> 1);
        bits_[idx >> 6] |= u64{1} << (idx & 63);
    }

    void sieve() {
        bits_.assign(words(limit_), 0);
        // odd base primes up to sqrt(limit)
        i64 root = isqrt(limit_);
        std::vector<char> base(static_cast<std::size_t>(root + 1), 1);
        std::vector<i64> base_primes;
        for (i64 p = 3; p <= root; p += 2) {
            if (!base[static_cast<std::size_t>(p)]) continue;
            base_primes.push_back(p);
            for (i64 q = p * p; q <= root; q += 2 * p) base[static_cast<std::size_t>(q)] = 0;
        }
        std::vector<char> seg(static_cast<std::size_t>(kSegment), 0);
        for (i64 lo = 3; lo <= limit_; lo += 2 * kSegment) {
            i64 hi = std::min(limit_, lo + 2 * kSegment - 2); // odd numbers lo..hi
            std::size_t len = static_cast<std::size_t>((hi - lo) / 2 + 1);
            std::fill(seg.begin(), seg.begin() + len, 1);
            for (i64 p : base_primes) {
                if (p * p > hi) break;
                i64 start = std::max(p * p, ((lo + p - 1) / p) * p);
                if (start % 2 == 0) start += p;
                for (i64 q = start; q <= hi; q += 2 * p) seg[static_cast<std::size_t>((q - lo) / 2)] = 0;
            }
            for (std::size_t i = 0; i < len; ++i)
                if (seg[i]) set_bit(lo + 2 * static_cast<i64>(i));
        }
    }

    i64 limit_;
    std::vector<u64> bits_;
};

inline PrimeTable sieve_primes(i64 limit) { return PrimeTable(limit); }

namespace detail {

// Pollard-Brent rho; n must be odd composite and not a prime power shortcut.
inline u64 pollard_brent(u64 n, SplitMix64& rng) {
    if (n % 2 == 0) return 2;
    while (true) {
        u64 y = rng.below(n - 2) + 1, c = rng.below(n - 2) + 1, m = 128;
        u64 g = 1, r = 1, q = 1, x = 0, ys = 0;
        while (g == 1) {
            x = y;
            for (u64 i = 0; i < r; ++i) y = (mulmod_u64(y, y, n) + c) % n;
            for (u64 k = 0; k < r && g == 1; k += m) {
                ys = y;
                u64 lim = std::min(m, r - k);
                for (u64 i = 0; i < lim; ++i) {
                    y = (mulmod_u64(y, y, n) + c) % n;
                    u64 diff = x > y ? x - y : y - x;
                    q = mulmod_u64(q, diff, n);
                }
                g = std::gcd(q, n);
            }
            r <<= 1;
        }
        if (g == n) {
            g = 1;
            do {
                ys = (mulmod_u64(ys, ys, n) + c) % n;
                u64 diff = x > ys ? x - ys : ys - x;
                g = std::gcd(diff, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void factor_u64(u64 n, std::vector<u64>& out, SplitMix64& rng) {
    if (n == 1) return;
    if (is_prime_u64(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_brent(n, rng);
    factor_u64(d, out, rng);
    factor_u64(n / d, out, rng);
}

} // namespace detail

// Canonical factorization of |n|. Trial division by small primes, then
// Miller-Rabin plus Brent rho for the leftover cofactor.
inline Factorization factorize(i64 n) {
    if (n == 0) throw domain_error("factorize(0)");
    u64 m = n < 0 ? static_cast<u64>(-(n + 1)) + 1 : static_cast<u64>(n);
    Factorization f;
    f.value = static_cast<i64>(m);
    auto strip = [&](u64 p) {
        if (m % p) return;
        int e = 0;
        while (m % p == 0) m /= p, ++e;
        f.factors.push_back({static_cast<i64>(p), e});
    };
    strip(2);
    strip(3);
    for (u64 p = 5; p * p <= m && p < 100000; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (m > 1) {
        std::vector<u64> rest;
        SplitMix64 rng(0x5eedULL ^ m);
        detail::factor_u64(m, rest, rng);
        std::sort(rest.begin(), rest.end());
        for (std::size_t i = 0; i < rest.size();) {
            std::size_t j = i;
            while (j < rest.size() && rest[j] == rest[i]) ++j;
            f.factors.push_back({static_cast<i64>(rest[i]), static_cast<int>(j - i)});
            i = j;
        }
    }
    return f;
}

// rad(|n|) and omega(|n|).
inline std::pair<i64, int> radical_omega(i64 n) {
    Factorization f = factorize(n);
    return {f.radical(), f.omega()};
}

// Yields (n, factorization) for every squarefree n <= limit all of whose
// prime factors satisfy prime_pred, in ascending order. n = 1 is emitted
// first (empty factor list). Block-sieved; single-threaded, callers
// parallelize over ranges themselves if needed.
template <class Pred, class Sink>
void squarefree_stream(i64 limit, Pred&& prime_pred, Sink&& sink) {
    if (limit < 1) throw domain_error("squarefree_stream: limit must be >= 1");
    {
        Factorization one;
        sink(i64{1}, one);
    }
    if (limit == 1) return;
    const i64 root = isqrt(limit);
    std::vector<i64> primes = PrimeTable(std::max<i64>(root, 2)).primes();
    const i64 block = i64{1} << 17;
    std::vector<i64> rem(static_cast<std::size_t>(block));
    std::vector<char> sqf(static_cast<std::size_t>(block));
    std::vector<std::vector<i64>> fac(static_cast<std::size_t>(block));
    for (i64 lo = 2; lo <= limit; lo += block) {
        i64 hi = std::min(limit + 1, lo + block);
        std::size_t len = static_cast<std::size_t>(hi - lo);
        for (std::size_t i = 0; i < len; ++i) {
            rem[i] = lo + static_cast<i64>(i);
            sqf[i] = 1;
            fac[i].clear();
        }
        for (i64 p : primes) {
            if (p * p >= hi) break;
            for (i64 q = ((lo + p - 1) / p) * p; q < hi; q += p) {
                std::size_t i = static_cast<std::size_t>(q - lo);
                if (!sqf[i]) continue;
                int e = 0;
                while (rem[i] % p == 0) rem[i] /= p, ++e;
                if (e > 1) {
                    sqf[i] = 0;
                    continue;
                }
                fac[i].push_back(p);
            }
        }
        for (std::size_t i = 0; i < len; ++i) {
            if (!sqf[i]) continue;
            if (rem[i] > 1) fac[i].push_back(rem[i]);
            bool ok = true;
            for (i64 p : fac[i])
                if (!prime_pred(p)) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
            Factorization f;
            f.value = lo + static_cast<i64>(i);
            for (i64 p : fac[i]) f.factors.push_back({p, 1});
            sink(f.value, f);
        }
    }
}

} // namespace rclb
