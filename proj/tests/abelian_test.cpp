#include <doctest.h>

#include "oracles.hpp"
#include "rclb/abelian.hpp"
#include "rclb/util.hpp"

using namespace rclb;

namespace {

// order statistics implied by invariant factors, for oracle comparison
std::map<i64, i64> stats_of(const FiniteAbelianGroup& g) {
    return oracle::order_statistics(g.invariant_factors());
}

} // namespace

TEST_CASE("from_cyclic_list canonical forms") {
    CHECK(from_cyclic_list({2, 4, 6}).invariant_factors() == std::vector<i64>{2, 2, 12});
    CHECK(from_cyclic_list({1, 1}).trivial());
    CHECK(from_cyclic_list({5}).invariant_factors() == std::vector<i64>{5});
    // oracle: the 48-element product has the same order statistics
    CHECK(stats_of(from_cyclic_list({2, 4, 6})) == oracle::order_statistics({2, 4, 6}));
}

TEST_CASE("from_cyclic_list against enumeration oracle on random lists") {
    SplitMix64 rng(12345);
    for (int it = 0; it < 200; ++it) {
        std::vector<i64> orders;
        int k = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < k; ++i) orders.push_back(1 + static_cast<i64>(rng.below(12)));
        FiniteAbelianGroup g = from_cyclic_list(orders);
        CHECK(stats_of(g) == oracle::order_statistics(orders));
        // canonical: divisibility chain
        const auto& f = g.invariant_factors();
        for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i] % f[i - 1] == 0);
    }
}

TEST_CASE("rank_p") {
    FiniteAbelianGroup g = from_cyclic_list({2, 2, 12});
    CHECK(rank_p(g, 2) == 3);
    CHECK(rank_p(g, 3) == 1);
    CHECK(rank_p(FiniteAbelianGroup{}, 5) == 0);
    CHECK_THROWS_AS(rank_p(g, 4), domain_error);
}

TEST_CASE("power_subgroup") {
    CHECK(power_subgroup(from_cyclic_list({8}), 2).invariant_factors() == std::vector<i64>{4});
    FiniteAbelianGroup g28 = power_subgroup(from_cyclic_list({2, 8}), 2);
    CHECK(g28.invariant_factors() == std::vector<i64>{4});
    CHECK(rank_p(g28, 2) == 1);
    FiniteAbelianGroup g = power_subgroup(from_cyclic_list({2, 2, 12}), 4);
    CHECK(g.invariant_factors() == std::vector<i64>{3});
    // oracle: image of multiplication by 4 on the 48-element group
    CHECK(stats_of(g) == oracle::power_subgroup_statistics({2, 2, 12}, 4));
    CHECK_THROWS_AS(power_subgroup(g, 0), domain_error);
}

TEST_CASE("hom_count") {
    CHECK(hom_count(from_cyclic_list({6, 4}), from_cyclic_list({2})).value == 4);
    CHECK(hom_count(FiniteAbelianGroup{}, from_cyclic_list({12, 24})).value == 1);
    HomCount h = hom_count(from_cyclic_list({2, 2, 12}), from_cyclic_list({2, 2}));
    CHECK(h.value == 64);
    CHECK(!h.saturated);
    // brute-force oracle
    CHECK(oracle::hom_count({2, 2, 12}, {2, 2}) == 64);
    // saturating flag on huge products
    FiniteAbelianGroup big = from_cyclic_list(std::vector<i64>(16, 1 << 30));
    CHECK(hom_count(big, big).saturated);
}

TEST_CASE("rank identities on random lists") {
    SplitMix64 rng(777);
    for (int it = 0; it < 300; ++it) {
        std::vector<i64> orders;
        int k = static_cast<int>(rng.below(5));
        for (int i = 0; i < k; ++i) orders.push_back(1 + static_cast<i64>(rng.below(30)));
        FiniteAbelianGroup g = from_cyclic_list(orders);
        for (i64 p : {2, 3, 5}) {
            int direct = 0;
            for (i64 d : orders)
                if (d % p == 0) ++direct;
            CHECK(rank_p(g, p) == direct);
            // rank_p(power_subgroup(A, p^{l-1}), p) = #{d : p^l | d}
            for (int l = 1; l <= 3; ++l) {
                i64 pl1 = 1;
                for (int t = 0; t < l - 1; ++t) pl1 *= p;
                int high = 0;
                for (i64 d : orders)
                    if (d % (pl1 * p) == 0) ++high;
                CHECK(rank_p(power_subgroup(g, pl1), p) == high);
            }
            // hom_count(A, C_p) = p^{rank_p A}
            HomCount h = hom_count(g, from_cyclic_list({p}));
            u64 expect = 1;
            for (int i = 0; i < rank_p(g, p); ++i) expect *= static_cast<u64>(p);
            CHECK(h.value == expect);
        }
    }
}

TEST_CASE("subgroup and quotient rank monotonicity") {
    // B = k*A is a subgroup of A and A/B has invariant factors gcd(d_i, k)
    SplitMix64 rng(424242);
    for (int it = 0; it < 200; ++it) {
        std::vector<i64> orders;
        int k = 1 + static_cast<int>(rng.below(4));
        for (int i = 0; i < k; ++i) orders.push_back(2 + static_cast<i64>(rng.below(20)));
        i64 mult = 1 + static_cast<i64>(rng.below(12));
        FiniteAbelianGroup a = from_cyclic_list(orders);
        FiniteAbelianGroup b = power_subgroup(a, mult);
        std::vector<i64> quot_orders;
        for (i64 d : orders) quot_orders.push_back(gcd64(d, mult));
        FiniteAbelianGroup q = from_cyclic_list(quot_orders);
        for (i64 p : {2, 3, 5, 7}) {
            CHECK(rank_p(b, p) <= rank_p(a, p));
            CHECK(rank_p(a, p) <= rank_p(b, p) + rank_p(q, p));
        }
    }
}

TEST_CASE("group rendering") {
    CHECK(from_cyclic_list({2, 4, 6}).to_string() == "C2 x C2 x C12");
    CHECK(FiniteAbelianGroup{}.to_string() == "1");
}
