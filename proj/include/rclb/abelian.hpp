#pragma once

// Finite abelian groups in invariant-factor form: exact p-rank, the subgroup
// k*A, and Hom counting. Groups are canonical value objects, so structural
// equality is operator==.

#include <sstream>
#include <string>
#include <vector>

#include "rclb/arith.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

class FiniteAbelianGroup {
public:
    FiniteAbelianGroup() = default;

    // factors must already form a divisibility chain d1 | d2 | ... with di >= 2.
    static FiniteAbelianGroup from_invariant_factors(std::vector<i64> factors) {
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i] < 2) throw domain_error("invariant factor < 2");
            if (i > 0 && factors[i] % factors[i - 1] != 0)
                throw structure_error("invariant factors must form a divisibility chain");
        }
        FiniteAbelianGroup g;
        g.factors_ = std::move(factors);
        return g;
    }

    const std::vector<i64>& invariant_factors() const { return factors_; }
    bool trivial() const { return factors_.empty(); }

    i64 order() const {
        i64 o = 1;
        for (i64 d : factors_) o = checked_mul(o, d);
        return o;
    }

    // "C2 x C2 x C12"; the trivial group prints as "1".
    std::string to_string() const {
        if (factors_.empty()) return "1";
        std::ostringstream os;
        for (std::size_t i = 0; i < factors_.size(); ++i) {
            if (i) os << " x ";
            os << 'C' << factors_[i];
        }
        return os.str();
    }

    bool operator==(const FiniteAbelianGroup&) const = default;

private:
    std::vector<i64> factors_; // d1 | d2 | ... | dk, each >= 2
};

namespace detail {

// Smith normal form diagonal of a small integer matrix (Euclidean pivoting).
// Destroys m. Entries stay modest for our inputs; overflow checked anyway.
inline std::vector<i64> smith_diagonal(std::vector<std::vector<i64>> m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    std::vector<i64> diag;
    std::size_t t = 0;
    while (t < rows && t < cols) {
        // find nonzero pivot
        std::size_t pr = t, pc = t;
        bool found = false;
        for (std::size_t i = t; i < rows && !found; ++i)
            for (std::size_t j = t; j < cols && !found; ++j)
                if (m[i][j] != 0) {
                    pr = i;
                    pc = j;
                    found = true;
                }
        if (!found) break;
        std::swap(m[t], m[pr]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][t], m[i][pc]);
        // clear row and column t by Euclidean steps
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = t + 1; i < rows; ++i) {
                while (m[i][t] != 0) {
                    i64 q = m[t][t] == 0 ? 0 : m[i][t] / m[t][t];
                    for (std::size_t j = t; j < cols; ++j) m[i][j] = checked_add(m[i][j], -checked_mul(q, m[t][j]));
                    if (m[i][t] != 0) {
                        std::swap(m[i], m[t]);
                        dirty = true;
                    }
                }
            }
            for (std::size_t j = t + 1; j < cols; ++j) {
                while (m[t][j] != 0) {
                    i64 q = m[t][t] == 0 ? 0 : m[t][j] / m[t][t];
                    for (std::size_t i = t; i < rows; ++i) m[i][j] = checked_add(m[i][j], -checked_mul(q, m[i][t]));
                    if (m[t][j] != 0) {
                        for (std::size_t i = t; i < rows; ++i) std::swap(m[i][j], m[i][t]);
                        dirty = true;
                    }
                }
            }
        }
        // divisibility fix-up: pivot must divide the rest of the block
        for (std::size_t i = t + 1; i < rows; ++i) {
            for (std::size_t j = t + 1; j < cols; ++j) {
                if (m[i][j] % m[t][t] != 0) {
                    for (std::size_t jj = t; jj < cols; ++jj) m[t][jj] = checked_add(m[t][jj], m[i][jj]);
                    // restart elimination on this pivot
                    i = rows;
                    j = cols;
                    dirty = true;
                }
            }
        }
        if (dirty) continue; // re-clear row/column t after the fix-up
        diag.push_back(m[t][t] < 0 ? -m[t][t] : m[t][t]);
        ++t;
    }
    return diag;
}

} // namespace detail

// Invariant-factor form of prod Z/orders_i, via Smith reduction of the
// diagonal relation matrix. Orders equal to 1 are dropped.
inline FiniteAbelianGroup from_cyclic_list(const std::vector<i64>& orders) {
    std::vector<i64> eff;
    for (i64 d : orders) {
        if (d < 1) throw domain_error("cyclic order must be >= 1");
        if (d > 1) eff.push_back(d);
    }
    if (eff.empty()) return FiniteAbelianGroup{};
    std::vector<std::vector<i64>> rel(eff.size(), std::vector<i64>(eff.size(), 0));
    for (std::size_t i = 0; i < eff.size(); ++i) rel[i][i] = eff[i];
    std::vector<i64> diag = detail::smith_diagonal(std::move(rel));
    std::vector<i64> factors;
    for (i64 d : diag)
        if (d > 1) factors.push_back(d);
    std::sort(factors.begin(), factors.end());
    return FiniteAbelianGroup::from_invariant_factors(std::move(factors));
}

// rk_p A = number of invariant factors divisible by p.
inline int rank_p(const FiniteAbelianGroup& a, i64 p) {
    if (!is_prime_u64(static_cast<u64>(p))) throw domain_error("rank_p: p must be prime");
    int r = 0;
    for (i64 d : a.invariant_factors())
        if (d % p == 0) ++r;
    return r;
}

// The subgroup k*A, invariant factors d_i / gcd(d_i, k).
inline FiniteAbelianGroup power_subgroup(const FiniteAbelianGroup& a, i64 k) {
    if (k < 1) throw domain_error("power_subgroup: k must be >= 1");
    std::vector<i64> orders;
    for (i64 d : a.invariant_factors()) orders.push_back(d / gcd64(d, k));
    return from_cyclic_list(orders);
}

struct HomCount {
    u64 value = 1;
    bool saturated = false; // true when the product overflowed 64 bits
};

// |Hom(A, B)| = prod gcd(d_i(A), d_j(B)).
inline HomCount hom_count(const FiniteAbelianGroup& a, const FiniteAbelianGroup& b) {
    HomCount h;
    for (i64 da : a.invariant_factors()) {
        for (i64 db : b.invariant_factors()) {
            u64 g = static_cast<u64>(gcd64(da, db));
            u64 next;
            if (__builtin_mul_overflow(h.value, g, &next)) {
                h.saturated = true;
                h.value = ~u64{0};
                return h;
            }
            h.value = next;
        }
    }
    return h;
}

} // namespace rclb
