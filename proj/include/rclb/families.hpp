#pragma once

// Field families ordered by the product of ramified primes: quadratic,
// cyclic cubic, Klein-four and A4-sextic over a fixed Galois cubic base,
// with exactly-gamma subfamily bucketing and moment/probability aggregates
// on a geometric grid.

#include <optional>
#include <string>
#include <vector>

#include "rclb/abelian.hpp"
#include "rclb/arith.hpp"
#include "rclb/dirichlet.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

enum class Family { Quadratic, CyclicCubic, KleinFour, A4Sextic };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::Quadratic: return "quadratic";
        case Family::CyclicCubic: return "cyclic-cubic";
        case Family::KleinFour: return "klein-four";
        case Family::A4Sextic: return "a4-sextic";
    }
    return "?";
}

inline Family family_from_name(const std::string& s) {
    if (s == "quadratic" || s == "c2") return Family::Quadratic;
    if (s == "cyclic-cubic" || s == "c3") return Family::CyclicCubic;
    if (s == "klein-four" || s == "c2xc2" || s == "v4") return Family::KleinFour;
    if (s == "a4-sextic" || s == "a4") return Family::A4Sextic;
    throw config_error("unknown family: " + s);
}

// One enumerated extension. For the A4 family the counting value is the
// square of the product of marked split primes; elsewhere it is the product
// of the ramified support.
struct FieldRecord {
    Family family;
    std::vector<i64> support; // sorted ramified primes
    i64 counting_value = 1;   // C
    int gamma_marked = 0;
    std::optional<int> rank2; // exact 2-rank where available
    i64 weight = 1;
    i64 disc = 0; // fundamental discriminant for quadratic records
};

// beta = sum over nontrivial g of 1/phi(order(g)), over base Q.
inline Rational growth_log_exponent(const FiniteAbelianGroup& g) {
    if (g.order() > 64) throw bounds_error("growth_log_exponent: |G| capped at 64");
    auto phi = [](i64 n) {
        i64 v = n;
        for (const auto& pp : factorize(n).factors) v = v / pp.prime * (pp.prime - 1);
        return v;
    };
    const auto& ds = g.invariant_factors();
    std::vector<i64> idx(ds.size(), 0);
    Rational beta(0);
    for (;;) {
        i64 order = 1;
        for (std::size_t i = 0; i < ds.size(); ++i) {
            i64 coord_order = ds[i] / gcd64(ds[i], idx[i]);
            order = order / gcd64(order, coord_order) * coord_order;
        }
        if (order > 1) beta += Rational(1, phi(order));
        std::size_t i = 0;
        while (i < ds.size() && ++idx[i] == ds[i]) idx[i++] = 0;
        if (i == ds.size()) break;
    }
    return beta;
}

// ---------------------------------------------------------------------------
// Quadratic family

// All quadratic fields with C = rad(|disc|) < limit, streamed by odd
// squarefree core m. Imaginary records carry the exact genus 2-rank.
template <class Sink>
void enumerate_quadratic(i64 limit, Sink&& sink) {
    if (limit < 1) throw domain_error("enumerate_quadratic: limit must be >= 1");
    if (limit > 100000000) throw bounds_error("enumerate_quadratic: limit capped at 10^8");
    squarefree_stream(limit, [](i64 p) { return p != 2; }, [&](i64 m, const Factorization& f) {
        int om = f.omega();
        std::vector<i64> support;
        for (const auto& pp : f.factors) support.push_back(pp.prime);
        if (m > 1 && m < limit) {
            FieldRecord rec;
            rec.family = Family::Quadratic;
            rec.support = support;
            rec.counting_value = m;
            rec.gamma_marked = om;
            rec.disc = (m % 4 == 1) ? m : -m;
            if (rec.disc < 0) rec.rank2 = om - 1;
            sink(rec);
        }
        if (2 * m < limit) {
            std::vector<i64> esupport{2};
            esupport.insert(esupport.end(), support.begin(), support.end());
            std::vector<i64> discs = (m % 4 == 1) ? std::vector<i64>{-4 * m, 8 * m, -8 * m}
                                                  : std::vector<i64>{4 * m, 8 * m, -8 * m};
            for (i64 d : discs) {
                FieldRecord rec;
                rec.family = Family::Quadratic;
                rec.support = esupport;
                rec.counting_value = 2 * m;
                rec.gamma_marked = om;
                rec.disc = d;
                if (d < 0) rec.rank2 = om;
                sink(rec);
            }
        }
    });
}

// ---------------------------------------------------------------------------
// Grids and aggregate sweeps

inline std::vector<i64> geometric_grid(i64 x_min, i64 x_max, int per_decade = 4) {
    if (x_min < 10 || x_max <= x_min) throw config_error("grid range invalid");
    if (per_decade < 1) throw config_error("grid needs at least one point per decade");
    std::vector<i64> grid;
    for (int j = 0;; ++j) {
        double v = std::pow(10.0, static_cast<double>(j) / per_decade);
        if (v > static_cast<double>(x_max) * 1.0000001) break;
        i64 x = static_cast<i64>(std::llround(v));
        if (x >= x_min && (grid.empty() || x != grid.back())) grid.push_back(x);
    }
    if (grid.empty() || grid.back() != x_max) grid.push_back(x_max);
    if (grid.size() < 3) throw config_error("grid needs at least 3 points");
    return grid;
}

struct FamilyTotals {
    Family family = Family::Quadratic;
    std::vector<i64> grid;
    std::vector<i64> n;                     // N(X) per grid point
    std::vector<std::vector<i64>> gamma_n;  // [gamma][grid point]
    // imaginary-quadratic extras (empty for other families)
    std::vector<i64> n_imag;
    std::vector<i64> moment_num;            // sum of 2^{rk2}
    std::vector<std::vector<i64>> rank_le;  // [r][grid point]

    int gamma_max() const { return static_cast<int>(gamma_n.size()) - 1; }
};

namespace fam_detail {

struct Buckets {
    std::vector<i64> n, n_imag, moment;
    std::vector<std::vector<i64>> gamma_n, rank_le;
    Buckets(std::size_t g, int gamma_max, int r_max)
        : n(g, 0), n_imag(g, 0), moment(g, 0), gamma_n(static_cast<std::size_t>(gamma_max) + 1, std::vector<i64>(g, 0)),
          rank_le(static_cast<std::size_t>(r_max) + 1, std::vector<i64>(g, 0)) {}
    void add(Buckets& o) {
        for (std::size_t i = 0; i < n.size(); ++i) {
            n[i] += o.n[i];
            n_imag[i] += o.n_imag[i];
            moment[i] += o.moment[i];
        }
        for (std::size_t g = 0; g < gamma_n.size(); ++g)
            for (std::size_t i = 0; i < n.size(); ++i) gamma_n[g][i] += o.gamma_n[g][i];
        for (std::size_t r = 0; r < rank_le.size(); ++r)
            for (std::size_t i = 0; i < n.size(); ++i) rank_le[r][i] += o.rank_le[r][i];
    }
};

inline std::size_t bucket_index(const std::vector<i64>& grid, i64 c) {
    return static_cast<std::size_t>(std::upper_bound(grid.begin(), grid.end(), c) - grid.begin());
}

// Per-block multiplicative sieve over [lo, hi): calls
// fn(n, omega, marked, squarefree, admissible) for every n.
template <class ClassifyPrime, class Fn>
void omega_sweep_block(i64 lo, i64 hi, const std::vector<i64>& primes, ClassifyPrime&& classify, Fn&& fn) {
    std::size_t len = static_cast<std::size_t>(hi - lo);
    std::vector<i64> rem(len);
    std::vector<std::uint8_t> omega(len, 0), marked(len, 0);
    std::vector<char> sqf(len, 1), adm(len, 1);
    for (std::size_t i = 0; i < len; ++i) rem[i] = lo + static_cast<i64>(i);
    for (i64 p : primes) {
        if (p * p >= hi) break;
        int cls = classify(p); // bit 0: admissible, bit 1: marked
        for (i64 q = ((lo + p - 1) / p) * p; q < hi; q += p) {
            std::size_t i = static_cast<std::size_t>(q - lo);
            if (!sqf[i]) continue;
            int e = 0;
            while (rem[i] % p == 0) rem[i] /= p, ++e;
            if (e > 1) {
                sqf[i] = 0;
                continue;
            }
            ++omega[i];
            if (!(cls & 1)) adm[i] = 0;
            if (cls & 2) ++marked[i];
        }
    }
    for (std::size_t i = 0; i < len; ++i) {
        if (rem[i] > 1 && sqf[i]) {
            int cls = classify(rem[i]);
            ++omega[i];
            if (!(cls & 1)) adm[i] = 0;
            if (cls & 2) ++marked[i];
        }
        fn(lo + static_cast<i64>(i), static_cast<int>(omega[i]), static_cast<int>(marked[i]), sqf[i] != 0,
           adm[i] != 0);
    }
}

} // namespace fam_detail

struct SweepOptions {
    int gamma_max = 6;
    int r_max = 4;
    i64 modulus = 0;         // ray-class modulus for gamma marking; 0 = family default
    bool tame_only = true;
    bool omega_marks = true; // whether the configured omega condition holds for tame inertia
    int workers = 1;
    std::string cache_dir;   // prime table cache location; empty = sieve fresh
};

namespace fam_detail {

inline std::vector<i64> sweep_primes(i64 limit, const SweepOptions& opt) {
    i64 bound = std::max<i64>(isqrt(limit) + 1, 3);
    if (opt.cache_dir.empty()) return PrimeTable(bound).primes();
    return PrimeTable::load_or_sieve(bound, opt.cache_dir).primes();
}

} // namespace fam_detail

// Quadratic family aggregates over the grid: counts, per-gamma counts, and
// exact imaginary moment/rank data from genus theory.
inline FamilyTotals quadratic_family_stats(const std::vector<i64>& grid, SweepOptions opt = {}) {
    const i64 limit = grid.back();
    if (limit > 100000000) throw bounds_error("quadratic sweep capped at 10^8");
    i64 modulus = opt.modulus ? opt.modulus : 2;
    std::vector<i64> primes = fam_detail::sweep_primes(limit, opt);
    const std::size_t gpts = grid.size();
    const i64 block = i64{1} << 19;
    std::size_t nblocks = static_cast<std::size_t>((limit + block - 1) / block);
    std::vector<fam_detail::Buckets> parts(nblocks, fam_detail::Buckets(gpts + 1, opt.gamma_max, opt.r_max));

    parallel_blocks(1, limit, block, opt.workers, [&](std::size_t bi, i64 lo, i64 hi) {
        auto& B = parts[bi];
        auto classify = [&](i64 p) {
            int cls = p == 2 ? 0 : 1;
            if (opt.omega_marks && p != 2 && p % modulus == 1 % modulus) cls |= 2;
            return cls;
        };
        fam_detail::omega_sweep_block(lo, hi, primes, classify, [&](i64 m, int om, int marked, bool sqf, bool adm) {
            if (!sqf || !adm || m % 2 == 0) return; // odd squarefree cores only
            auto deposit = [&](i64 c, int gamma, bool imaginary, int rk2, i64 count) {
                std::size_t idx = fam_detail::bucket_index(grid, c);
                if (idx >= gpts + 1) return;
                B.n[idx] += count;
                if (gamma <= opt.gamma_max) B.gamma_n[static_cast<std::size_t>(gamma)][idx] += count;
                if (imaginary) {
                    B.n_imag[idx] += count;
                    B.moment[idx] += count * (i64{1} << rk2);
                    for (int r = rk2; r <= opt.r_max; ++r) B.rank_le[static_cast<std::size_t>(r)][idx] += count;
                }
            };
            if (m > 1 && m < limit) {
                bool imaginary = (m % 4 == 3);
                deposit(m, marked, imaginary, om - 1, 1);
            }
            if (!opt.tame_only && 2 * m < limit) {
                int n_imag = (m % 4 == 1 || m == 1) ? 2 : 1;
                deposit(2 * m, marked, false, 0, 3 - n_imag);
                deposit(2 * m, marked, true, om, n_imag);
            }
        });
    });

    FamilyTotals out;
    out.family = Family::Quadratic;
    out.grid = grid;
    fam_detail::Buckets total(gpts + 1, opt.gamma_max, opt.r_max);
    for (auto& p : parts) total.add(p);
    auto prefix = [&](const std::vector<i64>& raw) {
        std::vector<i64> acc(gpts, 0);
        i64 run = 0;
        for (std::size_t i = 0; i < gpts; ++i) {
            run += raw[i];
            acc[i] = run;
        }
        return acc;
    };
    out.n = prefix(total.n);
    out.n_imag = prefix(total.n_imag);
    out.moment_num = prefix(total.moment);
    for (auto& g : total.gamma_n) out.gamma_n.push_back(prefix(g));
    for (auto& r : total.rank_le) out.rank_le.push_back(prefix(r));
    return out;
}

// Abelian family aggregates: number of G-extensions with each exact tame
// support, bucketed by gamma. C2 counts fundamental-discriminant fields
// (including the 2-adic shapes unless tame_only), C3 counts 2^{|S|-1} per
// admissible support, C2^2 counts (3^k - 3 2^k + 3)/6.
inline FamilyTotals count_abelian(Family family, const std::vector<i64>& grid, SweepOptions opt = {}) {
    if (family == Family::Quadratic) {
        return quadratic_family_stats(grid, opt);
    }
    if (family != Family::CyclicCubic && family != Family::KleinFour)
        throw domain_error("count_abelian supports quadratic, cyclic-cubic and klein-four");
    if (!opt.tame_only) throw config_error("wild enumeration is not supported for this family");
    const i64 limit = grid.back();
    if (limit > 100000000) throw bounds_error("family sweep capped at 10^8");
    i64 modulus = opt.modulus ? opt.modulus : (family == Family::CyclicCubic ? 3 : 4);
    std::vector<i64> primes = fam_detail::sweep_primes(limit, opt);
    const std::size_t gpts = grid.size();
    const i64 block = i64{1} << 19;
    std::size_t nblocks = static_cast<std::size_t>((limit + block - 1) / block);
    std::vector<fam_detail::Buckets> parts(nblocks, fam_detail::Buckets(gpts + 1, opt.gamma_max, 0));

    std::vector<i64> weight_table(20, 0);
    for (int k = 1; k < 20; ++k) {
        if (family == Family::CyclicCubic) {
            weight_table[static_cast<std::size_t>(k)] = i64{1} << (k - 1);
        } else {
            // fields per exact tame support: surjections (3^k - 3) / |Aut| = 6,
            // equivalently full-support 2-dimensional subspaces of F2^S
            weight_table[static_cast<std::size_t>(k)] = (ipow_checked(3, k) - 3) / 6;
        }
    }

    parallel_blocks(2, limit, block, opt.workers, [&](std::size_t bi, i64 lo, i64 hi) {
        auto& B = parts[bi];
        auto classify = [&](i64 p) {
            bool admissible = family == Family::CyclicCubic ? (p % 3 == 1) : (p != 2);
            int cls = admissible ? 1 : 0;
            if (admissible && opt.omega_marks && p % modulus == 1 % modulus) cls |= 2;
            return cls;
        };
        fam_detail::omega_sweep_block(lo, hi, primes, classify, [&](i64 n, int om, int marked, bool sqf, bool adm) {
            if (!sqf || !adm || om == 0 || n >= limit) return;
            i64 w = om < 20 ? weight_table[static_cast<std::size_t>(om)] : 0;
            if (w == 0) return;
            std::size_t idx = fam_detail::bucket_index(grid, n);
            if (idx >= gpts + 1) return;
            B.n[idx] += w;
            if (marked <= opt.gamma_max) B.gamma_n[static_cast<std::size_t>(marked)][idx] += w;
        });
    });

    FamilyTotals out;
    out.family = family;
    out.grid = grid;
    fam_detail::Buckets total(gpts + 1, opt.gamma_max, 0);
    for (auto& p : parts) total.add(p);
    auto prefix = [&](const std::vector<i64>& raw) {
        std::vector<i64> acc(gpts, 0);
        i64 run = 0;
        for (std::size_t i = 0; i < gpts; ++i) {
            run += raw[i];
            acc[i] = run;
        }
        return acc;
    };
    out.n = prefix(total.n);
    for (auto& g : total.gamma_n) out.gamma_n.push_back(prefix(g));
    return out;
}

// ---------------------------------------------------------------------------
// A4 family over a fixed Galois cubic base

struct CubicBase {
    i64 conductor = 7;
    std::vector<i64> split_residues; // the index-3 subgroup T of (Z/f)*
    bool class_number_one = true;
};

// Supported conductors 7, 9, 13 (class number one, built-in). T is the
// subgroup of cubes.
inline CubicBase cubic_base(i64 f) {
    bool shape_ok = (f == 9) || (is_prime_u64(static_cast<u64>(f)) && f % 3 == 1);
    if (!shape_ok) throw domain_error("no cyclic cubic field of conductor " + std::to_string(f));
    if (f != 7 && f != 9 && f != 13) throw domain_error("supported cubic conductors are 7, 9, 13");
    CubicBase base;
    base.conductor = f;
    std::vector<char> seen(static_cast<std::size_t>(f), 0);
    for (i64 x = 1; x < f; ++x) {
        if (gcd64(x, f) != 1) continue;
        i64 cube = (x * x % f) * x % f;
        if (!seen[static_cast<std::size_t>(cube)]) {
            seen[static_cast<std::size_t>(cube)] = 1;
            base.split_residues.push_back(cube);
        }
    }
    std::sort(base.split_residues.begin(), base.split_residues.end());
    base.class_number_one = true;
    return base;
}

enum class PrimeClass { Split, Nonsplit, Ramified };

inline PrimeClass classify_prime(const CubicBase& base, i64 p) {
    if (!is_prime_u64(static_cast<u64>(p))) throw domain_error("classify_prime: p must be prime");
    if (base.conductor % p == 0) return PrimeClass::Ramified;
    i64 r = p % base.conductor;
    return std::binary_search(base.split_residues.begin(), base.split_residues.end(), r) ? PrimeClass::Split
                                                                                         : PrimeClass::Nonsplit;
}

// Weighted A4-record counts: squarefree split-only n > 1 with n^2 < X,
// weight 3^{omega(n)}, gamma = omega(n) (all primes principal, class number
// one base).
inline FamilyTotals count_a4(const CubicBase& base, const std::vector<i64>& grid, SweepOptions opt = {}) {
    if (!base.class_number_one) throw config_error("gamma bucketing needs a class-number-one base");
    const i64 x_max = grid.back();
    if (x_max > i64{1000000000000}) throw bounds_error("a4 sweep capped at 10^12");
    const i64 n_limit = isqrt(x_max - 1); // n^2 < X, strict
    const std::size_t gpts = grid.size();
    fam_detail::Buckets total(gpts + 1, opt.gamma_max, 0);
    if (n_limit >= 2) {
        std::vector<i64> primes = fam_detail::sweep_primes(n_limit, opt);
        const i64 block = i64{1} << 19;
        std::size_t nblocks = static_cast<std::size_t>((n_limit + block) / block);
        std::vector<fam_detail::Buckets> parts(nblocks, fam_detail::Buckets(gpts + 1, opt.gamma_max, 0));
        parallel_blocks(2, n_limit + 1, block, opt.workers, [&](std::size_t bi, i64 lo, i64 hi) {
            auto& B = parts[bi];
            auto classify = [&](i64 p) {
                bool split = p != 2 && p != 3 && classify_prime(base, p) == PrimeClass::Split;
                return split ? 3 : 0; // split primes are admissible and marked
            };
            fam_detail::omega_sweep_block(lo, hi, primes, classify, [&](i64 n, int om, int, bool sqf, bool adm) {
                if (!sqf || !adm || om == 0) return;
                i64 w = ipow_checked(3, om);
                std::size_t idx = fam_detail::bucket_index(grid, n * n);
                if (idx >= gpts + 1) return;
                B.n[idx] += w;
                int gamma = opt.omega_marks ? om : 0;
                if (gamma <= opt.gamma_max) B.gamma_n[static_cast<std::size_t>(gamma)][idx] += w;
            });
        });
        for (auto& p : parts) total.add(p);
    }
    FamilyTotals out;
    out.family = Family::A4Sextic;
    out.grid = grid;
    auto prefix = [&](const std::vector<i64>& raw) {
        std::vector<i64> acc(gpts, 0);
        i64 run = 0;
        for (std::size_t i = 0; i < gpts; ++i) {
            run += raw[i];
            acc[i] = run;
        }
        return acc;
    };
    out.n = prefix(total.n);
    for (auto& g : total.gamma_n) out.gamma_n.push_back(prefix(g));
    return out;
}

// Small-scale A4 record stream (tests and the CLI at modest limits).
template <class Sink>
void enumerate_a4(const CubicBase& base, i64 x_max, Sink&& sink) {
    i64 n_limit = isqrt(x_max - 1);
    if (n_limit < 2) return;
    squarefree_stream(n_limit, [&](i64 p) {
        return p != 2 && p != 3 && classify_prime(base, p) == PrimeClass::Split;
    }, [&](i64 n, const Factorization& f) {
        if (n == 1) return; // trivial character excluded
        FieldRecord rec;
        rec.family = Family::A4Sextic;
        for (const auto& pp : f.factors) rec.support.push_back(pp.prime);
        rec.counting_value = n * n;
        rec.gamma_marked = f.omega();
        rec.weight = ipow_checked(3, f.omega());
        sink(rec);
    });
}

// ---------------------------------------------------------------------------
// Subfamily ratios

struct RatioSequence {
    std::vector<i64> grid;
    std::vector<double> ratios;
    bool decreasing_last_three_decades = false;
};

// N_gamma(X)/N(X) over the grid plus a monotone-trend verdict at the decade
// points spanning the last three decades.
inline RatioSequence subfamily_ratios(const FamilyTotals& totals, int gamma) {
    if (gamma < 0 || gamma > totals.gamma_max()) throw domain_error("gamma outside the tabulated range");
    RatioSequence rs;
    rs.grid = totals.grid;
    for (std::size_t i = 0; i < totals.grid.size(); ++i) {
        if (totals.n[i] == 0) throw domain_error("empty family at grid point");
        rs.ratios.push_back(static_cast<double>(totals.gamma_n[static_cast<std::size_t>(gamma)][i]) /
                            static_cast<double>(totals.n[i]));
    }
    // decade points: X_max / 10^k for k = 3..0
    std::vector<double> decade_vals;
    for (int k = 3; k >= 0; --k) {
        i64 target = totals.grid.back();
        for (int t = 0; t < k; ++t) target /= 10;
        std::size_t best = totals.grid.size() - 1;
        i64 best_diff = -1;
        for (std::size_t i = 0; i < totals.grid.size(); ++i) {
            i64 diff = totals.grid[i] > target ? totals.grid[i] - target : target - totals.grid[i];
            if (best_diff < 0 || diff < best_diff) {
                best_diff = diff;
                best = i;
            }
        }
        decade_vals.push_back(rs.ratios[best]);
    }
    rs.decreasing_last_three_decades = true;
    for (std::size_t i = 1; i < decade_vals.size(); ++i)
        if (!(decade_vals[i] < decade_vals[i - 1])) rs.decreasing_last_three_decades = false;
    return rs;
}

} // namespace rclb
