#pragma once

// Permutation groups of degree <= 16 with dense element enumeration:
// orbit-gcd ramification invariants, tame splitting types via double cosets,
// GF(2) group modules with brute-force cochain cohomology, and equivariant
// Hom counting.

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rclb/arith.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

struct Perm {
    static constexpr int kMaxDegree = 16;
    int degree = 0;
    std::array<std::uint8_t, kMaxDegree> img{}; // 0-indexed images

    static Perm identity(int degree) {
        check_degree(degree);
        Perm p;
        p.degree = degree;
        for (int i = 0; i < degree; ++i) p.img[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
        return p;
    }

    // Cycles use 1-indexed points, e.g. {{3,4},{5,6}} for (34)(56).
    static Perm from_cycles(int degree, const std::vector<std::vector<int>>& cycles) {
        Perm p = identity(degree);
        for (const auto& cyc : cycles) {
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                int from = cyc[i], to = cyc[(i + 1) % cyc.size()];
                if (from < 1 || from > degree || to < 1 || to > degree)
                    throw domain_error("cycle point out of range");
                p.img[static_cast<std::size_t>(from - 1)] = static_cast<std::uint8_t>(to - 1);
            }
        }
        if (!p.valid()) throw domain_error("cycles do not define a bijection");
        return p;
    }

    bool valid() const {
        std::uint32_t seen = 0;
        for (int i = 0; i < degree; ++i) {
            int v = img[static_cast<std::size_t>(i)];
            if (v < 0 || v >= degree || (seen >> v) & 1) return false;
            seen |= 1u << v;
        }
        return true;
    }

    int apply(int point_1indexed) const { return img[static_cast<std::size_t>(point_1indexed - 1)] + 1; }

    // (p * q)(x) = p(q(x)); q acts first.
    Perm operator*(const Perm& q) const {
        Perm r;
        r.degree = degree;
        for (int i = 0; i < degree; ++i) r.img[static_cast<std::size_t>(i)] = img[q.img[static_cast<std::size_t>(i)]];
        return r;
    }

    Perm inverse() const {
        Perm r;
        r.degree = degree;
        for (int i = 0; i < degree; ++i) r.img[img[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
        return r;
    }

    Perm pow(i64 e) const {
        Perm base = e < 0 ? inverse() : *this;
        if (e < 0) e = -e;
        Perm r = identity(degree);
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    bool is_identity() const {
        for (int i = 0; i < degree; ++i)
            if (img[static_cast<std::size_t>(i)] != i) return false;
        return true;
    }

    int order() const {
        Perm p = *this;
        int n = 1;
        while (!p.is_identity()) {
            p = p * *this;
            ++n;
        }
        return n;
    }

    std::vector<int> cycle_lengths() const {
        std::vector<int> out;
        std::uint32_t seen = 0;
        for (int i = 0; i < degree; ++i) {
            if ((seen >> i) & 1) continue;
            int len = 0, j = i;
            do {
                seen |= 1u << j;
                j = img[static_cast<std::size_t>(j)];
                ++len;
            } while (j != i);
            out.push_back(len);
        }
        return out;
    }

    std::string to_string() const {
        std::ostringstream os;
        std::uint32_t seen = 0;
        bool any = false;
        for (int i = 0; i < degree; ++i) {
            if ((seen >> i) & 1 || img[static_cast<std::size_t>(i)] == i) {
                seen |= 1u << i;
                continue;
            }
            os << '(';
            int j = i;
            bool first = true;
            do {
                if (!first) os << ' ';
                os << (j + 1);
                first = false;
                seen |= 1u << j;
                j = img[static_cast<std::size_t>(j)];
            } while (j != i);
            os << ')';
            any = true;
        }
        if (!any) return "()";
        return os.str();
    }

    auto operator<=>(const Perm&) const = default;

private:
    static void check_degree(int degree) {
        if (degree < 1 || degree > kMaxDegree) throw bounds_error("permutation degree out of range [1,16]");
    }
};

// gcd of the cycle lengths of g (fixed points contribute 1).
inline i64 orbit_gcd(const Perm& g) {
    i64 e = 0;
    for (int len : g.cycle_lengths()) e = std::gcd(e, static_cast<i64>(len));
    return e;
}

class PermGroup {
public:
    static constexpr std::size_t kMaxOrder = 10000;

    static PermGroup closure(int degree, std::vector<Perm> generators) {
        for (const auto& g : generators)
            if (g.degree != degree) throw domain_error("generator degree mismatch");
        PermGroup grp;
        grp.degree_ = degree;
        grp.generators_ = generators;
        std::vector<Perm> elems{Perm::identity(degree)};
        std::vector<Perm> work = elems;
        auto known = [&](const Perm& p) { return std::binary_search(elems.begin(), elems.end(), p); };
        while (!work.empty()) {
            std::vector<Perm> fresh;
            for (const auto& x : work) {
                for (const auto& g : generators) {
                    Perm y = x * g;
                    if (!known(y) && !std::binary_search(fresh.begin(), fresh.end(), y)) {
                        fresh.insert(std::lower_bound(fresh.begin(), fresh.end(), y), y);
                    }
                }
            }
            if (fresh.empty()) break;
            std::vector<Perm> merged;
            std::merge(elems.begin(), elems.end(), fresh.begin(), fresh.end(), std::back_inserter(merged));
            elems = std::move(merged);
            if (elems.size() > kMaxOrder) throw bounds_error("group order exceeds 10^4");
            work = std::move(fresh);
        }
        grp.elements_ = std::move(elems);
        return grp;
    }

    int degree() const { return degree_; }
    std::size_t order() const { return elements_.size(); }
    const std::vector<Perm>& elements() const { return elements_; }
    const std::vector<Perm>& generators() const { return generators_; }
    Perm identity() const { return Perm::identity(degree_); }

    bool contains(const Perm& p) const {
        return p.degree == degree_ && std::binary_search(elements_.begin(), elements_.end(), p);
    }

    bool contains_group(const PermGroup& h) const {
        if (h.degree_ != degree_) return false;
        for (const auto& x : h.elements_)
            if (!contains(x)) return false;
        return true;
    }

    bool normalizes(const PermGroup& sub) const {
        for (const auto& g : elements_) {
            Perm gi = g.inverse();
            for (const auto& x : sub.elements_)
                if (!sub.contains(g * x * gi)) return false;
        }
        return true;
    }

    bool is_cyclic() const {
        for (const auto& g : elements_)
            if (static_cast<std::size_t>(g.order()) == elements_.size()) return true;
        return false;
    }

    bool transitive() const {
        std::uint32_t orbit = 1; // point 1
        bool grew = true;
        while (grew) {
            grew = false;
            for (int i = 0; i < degree_; ++i) {
                if (!((orbit >> i) & 1)) continue;
                for (const auto& g : generators_) {
                    int j = g.img[static_cast<std::size_t>(i)];
                    if (!((orbit >> j) & 1)) {
                        orbit |= 1u << j;
                        grew = true;
                    }
                }
            }
        }
        return orbit == (1u << degree_) - 1;
    }

    PermGroup stabilizer(int point_1indexed) const {
        std::vector<Perm> fixed;
        for (const auto& g : elements_)
            if (g.apply(point_1indexed) == point_1indexed) fixed.push_back(g);
        return closure(degree_, fixed);
    }

    PermGroup subgroup_generated(std::vector<Perm> gens) const {
        PermGroup h = closure(degree_, std::move(gens));
        if (!contains_group(h)) throw structure_error("generators do not lie in the group");
        return h;
    }

private:
    int degree_ = 1;
    std::vector<Perm> generators_;
    std::vector<Perm> elements_; // sorted
};

// The order-12 transitive copy of A4 in S6 generated by (34)(56) and
// (135)(246); the stabilizer of 1 is cyclic of order 2.
inline PermGroup a4_on_six_points() {
    Perm a = Perm::from_cycles(6, {{3, 4}, {5, 6}});
    Perm c = Perm::from_cycles(6, {{1, 3, 5}, {2, 4, 6}});
    return PermGroup::closure(6, {a, c});
}

// {g in G : p^l divides orbit_gcd(g)}; checked closed under conjugation and
// powering by exponents coprime to the element order.
inline std::vector<Perm> divisible_orbit_set(const PermGroup& g, i64 p, int l) {
    if (!is_prime_u64(static_cast<u64>(p))) throw domain_error("divisible_orbit_set: p must be prime");
    if (l < 1) throw domain_error("divisible_orbit_set: l must be >= 1");
    i64 q = ipow_checked(p, l);
    std::vector<Perm> out;
    for (const auto& x : g.elements())
        if (orbit_gcd(x) % q == 0) out.push_back(x);
    auto in_out = [&](const Perm& x) { return std::binary_search(out.begin(), out.end(), x); };
    for (const auto& x : out) {
        int n = x.order();
        for (int k = 1; k < n; ++k)
            if (std::gcd(k, n) == 1 && !in_out(x.pow(k)))
                throw internal_error("orbit-gcd set not closed under invertible powering");
        for (const auto& h : g.elements())
            if (!in_out(h * x * h.inverse())) throw internal_error("orbit-gcd set not closed under conjugation");
    }
    return out;
}

// Local ramification data: inertia normal in decomposition, both inside G;
// tame inertia must be cyclic.
struct RamificationLocal {
    PermGroup group;
    PermGroup decomposition;
    PermGroup inertia;

    RamificationLocal(PermGroup g, PermGroup d, PermGroup i)
        : group(std::move(g)), decomposition(std::move(d)), inertia(std::move(i)) {
        if (!group.contains_group(decomposition) || !decomposition.contains_group(inertia))
            throw structure_error("need inertia <= decomposition <= group");
        if (!decomposition.normalizes(inertia)) throw structure_error("inertia must be normal in decomposition");
        if (!inertia.is_cyclic()) throw structure_error("tame inertia must be cyclic");
    }
};

struct SplittingType {
    std::vector<std::pair<i64, i64>> ef; // (e, f) per double coset
    i64 e_gcd = 0;                       // gcd of the e values

    // compact notation, f^e per factor, e = 1 printed as bare f
    std::string to_string() const {
        auto sorted = ef;
        std::sort(sorted.begin(), sorted.end(),
                  [](auto& l, auto& r) { return l.first != r.first ? l.first < r.first : l.second > r.second; });
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < sorted.size(); ++i) {
            if (i) os << ' ';
            os << sorted[i].second;
            if (sorted[i].first != 1) os << '^' << sorted[i].first;
        }
        os << ')';
        return os.str();
    }
};

// One (e, f) pair per double coset D g H: e = [I : I cap gHg^-1],
// f = |DgH| / (|H| e). The fundamental identity sum e*f = [G:H] is asserted.
inline SplittingType splitting_type(const RamificationLocal& local, const PermGroup& h) {
    const PermGroup& g = local.group;
    if (!g.contains_group(h)) throw structure_error("H must be a subgroup of G");
    const auto& elems = g.elements();
    std::vector<char> covered(elems.size(), 0);
    auto index_of = [&](const Perm& p) {
        return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), p) - elems.begin());
    };
    SplittingType result;
    i64 ef_total = 0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (covered[i]) continue;
        // double coset of elems[i]
        std::vector<std::size_t> coset;
        std::vector<std::size_t> work{i};
        covered[i] = 1;
        while (!work.empty()) {
            std::size_t cur = work.back();
            work.pop_back();
            coset.push_back(cur);
            for (const auto& d : local.decomposition.elements()) {
                std::size_t j = index_of(d * elems[cur]);
                if (!covered[j]) {
                    covered[j] = 1;
                    work.push_back(j);
                }
            }
            for (const auto& x : h.elements()) {
                std::size_t j = index_of(elems[cur] * x);
                if (!covered[j]) {
                    covered[j] = 1;
                    work.push_back(j);
                }
            }
        }
        const Perm& rep = elems[i];
        Perm rep_inv = rep.inverse();
        i64 stab = 0; // |I cap g H g^-1|
        for (const auto& x : local.inertia.elements())
            if (h.contains(rep_inv * x * rep)) ++stab;
        i64 e = static_cast<i64>(local.inertia.order()) / stab;
        i64 f = static_cast<i64>(coset.size()) / (static_cast<i64>(h.order()) * e);
        if (f * static_cast<i64>(h.order()) * e != static_cast<i64>(coset.size()))
            throw internal_error("double coset size not divisible by |H|*e");
        result.ef.emplace_back(e, f);
        result.e_gcd = std::gcd(result.e_gcd, e);
        ef_total += e * f;
    }
    i64 index = static_cast<i64>(g.order() / h.order());
    if (ef_total != index) throw internal_error("sum e*f != [G:H]");
    return result;
}

// ---------------------------------------------------------------------------
// GF(2) modules and cohomology

struct SmallMat {
    int n = 0;
    std::array<std::uint8_t, 8> row{}; // row i as bitmask over columns

    static SmallMat identity(int n) {
        SmallMat m;
        m.n = n;
        for (int i = 0; i < n; ++i) m.row[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(1u << i);
        return m;
    }
    SmallMat operator*(const SmallMat& o) const {
        SmallMat r;
        r.n = n;
        for (int i = 0; i < n; ++i) {
            std::uint8_t acc = 0;
            std::uint8_t bits = row[static_cast<std::size_t>(i)];
            for (int k = 0; k < n; ++k)
                if ((bits >> k) & 1) acc ^= o.row[static_cast<std::size_t>(k)];
            r.row[static_cast<std::size_t>(i)] = acc;
        }
        return r;
    }
    std::uint8_t apply(std::uint8_t v) const {
        std::uint8_t out = 0;
        for (int i = 0; i < n; ++i)
            if (__builtin_popcount(static_cast<unsigned>(row[static_cast<std::size_t>(i)] & v)) & 1)
                out |= static_cast<std::uint8_t>(1u << i);
        return out;
    }
    bool operator==(const SmallMat&) const = default;
};

// A GF(2)[G]-module: one invertible matrix per group generator, extended to
// the whole element set with a consistency check of the group relations.
class F2GModule {
public:
    F2GModule(const PermGroup& g, int dim, std::vector<SmallMat> gen_action) : dim_(dim) {
        if (dim < 1 || dim > 8) throw bounds_error("module dimension out of range [1,8]");
        if (gen_action.size() != g.generators().size()) throw domain_error("one matrix per generator required");
        for (auto& m : gen_action)
            if (m.n != dim) throw domain_error("matrix dimension mismatch");
        const auto& elems = g.elements();
        action_.assign(elems.size(), SmallMat{});
        std::vector<char> known(elems.size(), 0);
        auto index_of = [&](const Perm& p) {
            return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), p) - elems.begin());
        };
        std::size_t id = index_of(g.identity());
        action_[id] = SmallMat::identity(dim);
        known[id] = 1;
        std::vector<std::size_t> work{id};
        while (!work.empty()) {
            std::size_t cur = work.back();
            work.pop_back();
            for (std::size_t gi = 0; gi < gen_action.size(); ++gi) {
                std::size_t nxt = index_of(elems[cur] * g.generators()[gi]);
                SmallMat m = action_[cur] * gen_action[gi];
                if (!known[nxt]) {
                    action_[nxt] = m;
                    known[nxt] = 1;
                    work.push_back(nxt);
                } else if (!(action_[nxt] == m)) {
                    throw structure_error("generator matrices violate the group relations");
                }
            }
        }
        // full homomorphism check over the element set
        for (std::size_t i = 0; i < elems.size(); ++i)
            for (std::size_t j = 0; j < elems.size(); ++j)
                if (!(action_[index_of(elems[i] * elems[j])] == action_[i] * action_[j]))
                    throw structure_error("generator matrices violate the group relations");
    }

    int dim() const { return dim_; }
    const SmallMat& action(std::size_t element_index) const { return action_[element_index]; }

private:
    int dim_;
    std::vector<SmallMat> action_; // aligned with group.elements()
};

struct CohomologyDims {
    int cocycles = 0;
    int coboundaries = 0;
    int h = 0;
};

namespace detail {

// Rank of a set of GF(2) vectors given as word arrays.
inline int f2_rank(std::vector<std::vector<u64>> rows) {
    std::vector<std::vector<u64>> pivots;
    std::vector<std::size_t> pivot_pos;
    int rank = 0;
    for (auto& r : rows) {
        for (std::size_t k = 0; k < pivots.size(); ++k) {
            std::size_t pos = pivot_pos[k];
            if ((r[pos >> 6] >> (pos & 63)) & 1)
                for (std::size_t w = 0; w < r.size(); ++w) r[w] ^= pivots[k][w];
        }
        std::size_t pos = r.size() * 64;
        for (std::size_t w = 0; w < r.size() && pos == r.size() * 64; ++w)
            if (r[w]) pos = w * 64 + static_cast<std::size_t>(__builtin_ctzll(r[w]));
        if (pos == r.size() * 64) continue;
        pivots.push_back(std::move(r));
        pivot_pos.push_back(pos);
        ++rank;
    }
    return rank;
}

} // namespace detail

// Cochain linear algebra for degrees 0..2: dimensions over GF(2) of
// cocycles, coboundaries and their quotient. Cochains are set functions
// G^degree -> M with the standard coboundary operator.
inline CohomologyDims cohomology_dim(const PermGroup& g, const F2GModule& mod, int degree) {
    if (degree < 0 || degree > 2) throw domain_error("cohomology degree must be 0, 1 or 2");
    if (g.order() > 24) throw bounds_error("cohomology: group order capped at 24");
    const std::size_t n = g.order();
    const int m = mod.dim();
    const auto& elems = g.elements();
    auto index_of = [&](const Perm& p) {
        return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), p) - elems.begin());
    };
    std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) mul[i][j] = index_of(elems[i] * elems[j]);

    auto dim_c = [&](int deg) {
        std::size_t tuples = 1;
        for (int k = 0; k < deg; ++k) tuples *= n;
        return tuples * static_cast<std::size_t>(m);
    };

    // Image vectors of the coboundary d^deg applied to each basis cochain.
    auto coboundary_rank = [&](int deg) -> int {
        std::size_t in_dim = dim_c(deg);
        std::size_t out_dim = dim_c(deg + 1);
        std::size_t words = (out_dim + 63) / 64;
        std::vector<std::vector<u64>> images;
        images.reserve(in_dim);
        auto set_bit = [&](std::vector<u64>& v, std::size_t tuple_idx, int coord) {
            std::size_t pos = tuple_idx * static_cast<std::size_t>(m) + static_cast<std::size_t>(coord);
            v[pos >> 6] ^= u64{1} << (pos & 63);
        };
        auto add_vec = [&](std::vector<u64>& v, std::size_t tuple_idx, std::uint8_t val) {
            for (int c = 0; c < m; ++c)
                if ((val >> c) & 1) set_bit(v, tuple_idx, c);
        };
        if (deg == 0) {
            // (d m0)(g) = g*m0 - m0
            for (int c = 0; c < m; ++c) {
                std::vector<u64> v(words, 0);
                std::uint8_t basis = static_cast<std::uint8_t>(1u << c);
                for (std::size_t gi = 0; gi < n; ++gi) {
                    std::uint8_t val = mod.action(gi).apply(basis) ^ basis;
                    add_vec(v, gi, val);
                }
                images.push_back(std::move(v));
            }
        } else if (deg == 1) {
            // (d phi)(g,h) = g*phi(h) - phi(gh) + phi(g)
            for (std::size_t a = 0; a < n; ++a) {
                for (int c = 0; c < m; ++c) {
                    std::vector<u64> v(words, 0);
                    std::uint8_t basis = static_cast<std::uint8_t>(1u << c);
                    for (std::size_t gi = 0; gi < n; ++gi) {
                        for (std::size_t hi = 0; hi < n; ++hi) {
                            std::uint8_t val = 0;
                            if (hi == a) val ^= mod.action(gi).apply(basis);
                            if (mul[gi][hi] == a) val ^= basis;
                            if (gi == a) val ^= basis;
                            if (val) add_vec(v, gi * n + hi, val);
                        }
                    }
                    images.push_back(std::move(v));
                }
            }
        } else {
            // (d psi)(g,h,k) = g*psi(h,k) - psi(gh,k) + psi(g,hk) - psi(g,h)
            for (std::size_t a = 0; a < n; ++a) {
                for (std::size_t b = 0; b < n; ++b) {
                    for (int c = 0; c < m; ++c) {
                        std::vector<u64> v(words, 0);
                        std::uint8_t basis = static_cast<std::uint8_t>(1u << c);
                        for (std::size_t gi = 0; gi < n; ++gi) {
                            for (std::size_t hi = 0; hi < n; ++hi) {
                                for (std::size_t ki = 0; ki < n; ++ki) {
                                    std::uint8_t val = 0;
                                    if (hi == a && ki == b) val ^= mod.action(gi).apply(basis);
                                    if (mul[gi][hi] == a && ki == b) val ^= basis;
                                    if (gi == a && mul[hi][ki] == b) val ^= basis;
                                    if (gi == a && hi == b) val ^= basis;
                                    if (val) add_vec(v, (gi * n + hi) * n + ki, val);
                                }
                            }
                        }
                        images.push_back(std::move(v));
                    }
                }
            }
        }
        return detail::f2_rank(std::move(images));
    };

    CohomologyDims out;
    int rank_d = coboundary_rank(degree);
    out.cocycles = static_cast<int>(dim_c(degree)) - rank_d;
    out.coboundaries = degree == 0 ? 0 : coboundary_rank(degree - 1);
    out.h = out.cocycles - out.coboundaries;
    return out;
}

// Dimension over GF(2) of the space of G-equivariant linear maps M -> N,
// via the intertwining system T rho_M(g) = rho_N(g) T on the generators.
inline int equivariant_hom_dim(const F2GModule& m, const F2GModule& n, const PermGroup& g) {
    const int dm = m.dim(), dn = n.dim();
    const int unknowns = dm * dn; // T[i][j], i < dn, j < dm
    std::vector<std::vector<u64>> rows;
    const auto& elems = g.elements();
    auto index_in_group = [&](const Perm& p) {
        return static_cast<std::size_t>(std::lower_bound(elems.begin(), elems.end(), p) - elems.begin());
    };
    for (const auto& gen : g.generators()) {
        std::size_t gi = index_in_group(gen);
        const SmallMat& rm = m.action(gi);
        const SmallMat& rn = n.action(gi);
        for (int i = 0; i < dn; ++i) {
            for (int j = 0; j < dm; ++j) {
                std::vector<u64> row(1, 0);
                // sum_k T[i][k] rm[k][j]  xor  sum_k rn[i][k] T[k][j] = 0
                for (int k = 0; k < dm; ++k)
                    if ((rm.row[static_cast<std::size_t>(k)] >> j) & 1) row[0] ^= u64{1} << (i * dm + k);
                for (int k = 0; k < dn; ++k)
                    if ((rn.row[static_cast<std::size_t>(i)] >> k) & 1) row[0] ^= u64{1} << (k * dm + j);
                if (row[0]) rows.push_back(std::move(row));
            }
        }
    }
    return unknowns - detail::f2_rank(std::move(rows));
}

// 2^dim, saturating at the top of the 64-bit range.
inline u64 equivariant_hom_count(const F2GModule& m, const F2GModule& n, const PermGroup& g) {
    int d = equivariant_hom_dim(m, n, g);
    if (d >= 64) return ~u64{0};
    return u64{1} << d;
}

} // namespace rclb
