#pragma once

// Explicit class-group rank lower bounds from ramification profiles: the
// invariant ideal quotient group, the degree constant c in both its sharp
// and coarse forms, and the absolute/relative bounds built from them.

#include <string>
#include <vector>

#include "rclb/abelian.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

struct RamifiedEntry {
    i64 prime_label;          // norm of the base prime (informational)
    i64 e;                    // gcd of ramification indices above it
    bool class_trivial = true; // whether the prime is principal in the base
};

// Signature and degree data of the Galois closure, plus the base class rank.
struct ClosureContext {
    int r1 = 0;
    int r2 = 0;
    i64 group_order = 1;
    int rk_p_cl_base = 0;
    i64 degree = 1; // [N:Q]

    void validate() const {
        if (r1 < 0 || r2 < 0 || rk_p_cl_base < 0) throw structure_error("negative signature or rank");
        if (degree < 1 || group_order < 1) throw structure_error("degree and group order must be positive");
        if (r1 + 2 * static_cast<i64>(r2) != degree) throw structure_error("r1 + 2 r2 must equal the closure degree");
    }
};

struct RamificationProfile {
    std::vector<RamifiedEntry> entries;
    ClosureContext context;
};

// Profile of an imaginary quadratic field: every ramified prime has e = 2
// and Q has trivial class group.
inline RamificationProfile quadratic_profile(const std::vector<i64>& ramified_primes, bool imaginary) {
    RamificationProfile p;
    for (i64 q : ramified_primes) p.entries.push_back({q, 2, true});
    p.context = imaginary ? ClosureContext{0, 1, 2, 0, 2} : ClosureContext{2, 0, 2, 0, 2};
    return p;
}

// prod Z/e(p)Z over the profile entries; unramified entries (e = 1) vanish.
inline FiniteAbelianGroup invariant_quotient(const RamificationProfile& profile) {
    std::vector<i64> orders;
    for (const auto& en : profile.entries) {
        if (en.e < 1) throw domain_error("ramification index must be >= 1");
        orders.push_back(en.e);
    }
    return from_cyclic_list(orders);
}

// #{entries : p^l | e}.
inline int count_divisible(const RamificationProfile& profile, i64 p, int l) {
    if (!is_prime_u64(static_cast<u64>(p))) throw domain_error("count_divisible: p must be prime");
    if (l < 1) throw domain_error("count_divisible: l must be >= 1");
    i64 q = ipow_checked(p, l);
    int n = 0;
    for (const auto& en : profile.entries)
        if (en.e % q == 0) ++n;
    return n;
}

struct DegreeConstant {
    i64 sharp;  // rk_p Cl_K + (r1 + r2) |G|, signature-aware
    i64 coarse; // rk_p Cl_K + [N:Q]^2, degree-only
};

inline DegreeConstant constant_c(const RamificationProfile& profile) {
    profile.context.validate();
    const auto& ctx = profile.context;
    i64 sharp = ctx.rk_p_cl_base + checked_mul(ctx.r1 + ctx.r2, ctx.group_order);
    i64 coarse = ctx.rk_p_cl_base + checked_mul(ctx.degree, ctx.degree);
    return {sharp, coarse};
}

// count_divisible - sharp c; negative values are returned as-is so callers
// can see where the bound is vacuous.
inline i64 rank_lower_bound(const RamificationProfile& profile, i64 p, int l) {
    return static_cast<i64>(count_divisible(profile, p, l)) - constant_c(profile).sharp;
}

// Relative variant: only class-trivial entries count.
inline i64 relative_rank_lower_bound(const RamificationProfile& profile, i64 p, int l) {
    if (!is_prime_u64(static_cast<u64>(p))) throw domain_error("p must be prime");
    if (l < 1) throw domain_error("l must be >= 1");
    i64 q = ipow_checked(p, l);
    i64 n = 0;
    for (const auto& en : profile.entries)
        if (en.class_trivial && en.e % q == 0) ++n;
    return n - constant_c(profile).sharp;
}

} // namespace rclb
