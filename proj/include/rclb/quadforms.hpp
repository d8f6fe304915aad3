#pragma once

// Class groups of imaginary quadratic fields as the ground-truth oracle:
// reduced binary quadratic forms, classical Gauss composition with a
// united-forms step, genus-theory 2-rank, and fundamental-discriminant
// enumeration.

#include <vector>

#include "rclb/abelian.hpp"
#include "rclb/arith.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

inline bool is_fundamental_discriminant(i64 d) {
    if (d == 0 || d == 1) return false;
    auto squarefree = [](i64 n) {
        if (n < 0) n = -n;
        return factorize(n).squarefree();
    };
    i64 r = ((d % 4) + 4) % 4;
    if (r == 1) return squarefree(d);
    if (r == 0) {
        i64 m = d / 4;
        i64 rm = ((m % 4) + 4) % 4;
        return (rm == 2 || rm == 3) && squarefree(m);
    }
    return false;
}

struct QuadDisc {
    i64 d;
    explicit QuadDisc(i64 disc) : d(disc) {
        if (!is_fundamental_discriminant(disc)) throw domain_error("not a fundamental discriminant");
    }
    bool imaginary() const { return d < 0; }
};

// All fundamental discriminants with |d| <= limit and the requested sign,
// ascending |d|.
template <class Sink>
void fundamental_discriminants(i64 limit, bool negative, Sink&& sink) {
    if (limit < 3) throw domain_error("fundamental_discriminants: limit must be >= 3");
    // squarefree flags for 1..limit via a square sieve
    std::vector<char> sqf(static_cast<std::size_t>(limit + 1), 1);
    for (i64 q = 2; q * q <= limit; ++q)
        for (i64 n = q * q; n <= limit; n += q * q) sqf[static_cast<std::size_t>(n)] = 0;
    for (i64 a = 3; a <= limit; ++a) {
        i64 d = negative ? -a : a;
        i64 r = ((d % 4) + 4) % 4;
        bool fundamental = false;
        if (r == 1) {
            fundamental = sqf[static_cast<std::size_t>(a)];
        } else if (r == 0) {
            i64 m = d / 4;
            i64 rm = ((m % 4) + 4) % 4;
            fundamental = (rm == 2 || rm == 3) && sqf[static_cast<std::size_t>(a / 4)];
        }
        if (fundamental) sink(QuadDisc(d));
    }
}

// Positive definite integral form a x^2 + b x y + c y^2 of discriminant d < 0.
struct QForm {
    i64 a, b, c;
    auto operator<=>(const QForm&) const = default;
    i64 discriminant() const { return b * b - 4 * a * c; }
};

namespace qf_detail {

inline QForm reduce(i128 A, i128 B, i128 C) {
    for (;;) {
        // normalize: B in (-A, A]
        if (B > A || B <= -A) {
            i128 twoA = 2 * A;
            i128 r = B % twoA;
            if (r < 0) r += twoA;
            if (r > A) r -= twoA;
            C = C - (B - r) / twoA * ((B + r) / 2);
            B = r;
        }
        if (A > C) {
            i128 t = A;
            A = C;
            C = t;
            B = -B;
            continue;
        }
        if (A == C && B < 0) B = -B;
        break;
    }
    QForm f{static_cast<i64>(A), static_cast<i64>(B), static_cast<i64>(C)};
    if (i128(f.a) != A || i128(f.b) != B || i128(f.c) != C) throw bounds_error("reduced form exceeds 64 bits");
    return f;
}

// Equivalent form whose leading coefficient is coprime to m, by representing
// a value coprime to m at a primitive point and completing to SL2(Z).
inline QForm coprime_representative(const QForm& f, i64 m) {
    if (gcd64(f.a, m) == 1) return f;
    i64 x = 1, y = 0, mod = 1;
    for (const auto& pp : factorize(m).factors) {
        i64 p = pp.prime;
        i64 xp, yp;
        if (f.a % p != 0) {
            xp = 1, yp = 0;
        } else if (f.c % p != 0) {
            xp = 0, yp = 1;
        } else {
            xp = 1, yp = 1; // f(1,1) = a+b+c = b mod p, nonzero for primitive f
        }
        // CRT merge (x,y) mod mod with (xp,yp) mod p
        i64 inv = mod_inverse(mod % p, p);
        i64 tx = ((xp - x) % p + p) % p;
        i64 ty = ((yp - y) % p + p) % p;
        x = x + mod * ((tx * inv) % p);
        y = y + mod * ((ty * inv) % p);
        mod *= p;
    }
    i64 g = gcd64(x, y);
    if (g > 1) x /= g, y /= g;
    i64 u, v;
    ext_gcd(x, y, u, v); // x*u + y*v = 1
    // transform matrix (x, -v; y, u), det = x*u + y*v = 1
    i128 ax = f.a, bx = f.b, cx = f.c;
    i128 p1 = x, q1 = -v, p2 = y, q2 = u;
    i128 na = ax * p1 * p1 + bx * p1 * p2 + cx * p2 * p2;
    i128 nb = 2 * ax * p1 * q1 + bx * (p1 * q2 + p2 * q1) + 2 * cx * p2 * q2;
    i128 nc = ax * q1 * q1 + bx * q1 * q2 + cx * q2 * q2;
    QForm out{static_cast<i64>(na), static_cast<i64>(nb), static_cast<i64>(nc)};
    if (i128(out.a) != na || i128(out.b) != nb || i128(out.c) != nc)
        throw bounds_error("form transform exceeds 64 bits");
    if (out.discriminant() != f.discriminant()) throw internal_error("transform changed discriminant");
    return out;
}

} // namespace qf_detail

// The class group of a fundamental discriminant d < 0, realised on reduced
// forms under composition.
class FormClassGroup {
public:
    explicit FormClassGroup(const QuadDisc& disc) : d_(disc.d) {
        if (d_ >= 0) throw domain_error("class_group needs an imaginary (negative) discriminant");
        if (d_ < -10000000) throw bounds_error("class_group: |d| capped at 10^7");
        enumerate_reduced();
    }

    i64 discriminant() const { return d_; }
    i64 class_number() const { return static_cast<i64>(forms_.size()); }
    const std::vector<QForm>& reduced_forms() const { return forms_; }

    QForm principal() const {
        i64 r = ((d_ % 4) + 4) % 4;
        if (r == 0) return {1, 0, -d_ / 4};
        return {1, 1, (1 - d_) / 4};
    }

    QForm compose(const QForm& f1, const QForm& f2) const {
        QForm g2 = qf_detail::coprime_representative(f2, f1.a);
        // B == b1 mod 2a1 and B == b2 mod 2a2 with gcd(a1, a2) = 1
        i64 a1 = f1.a, a2 = g2.a;
        i64 half_diff = static_cast<i64>((i128(g2.b) - f1.b) / 2 % a2);
        if (half_diff < 0) half_diff += a2;
        i64 t = static_cast<i64>(i128(half_diff) * mod_inverse(a1 % a2, a2) % a2);
        i128 B = i128(f1.b) + 2 * i128(a1) * t;
        i128 A = i128(a1) * a2;
        if ((B * B - d_) % (4 * A) != 0) throw internal_error("composition congruence failed");
        i128 C = (B * B - d_) / (4 * A);
        return qf_detail::reduce(A, B, C);
    }

    QForm inverse(const QForm& f) const { return qf_detail::reduce(f.a, -f.b, f.c); }

    QForm power(const QForm& f, i64 e) const {
        QForm base = e < 0 ? inverse(f) : f;
        if (e < 0) e = -e;
        QForm r = principal();
        while (e) {
            if (e & 1) r = compose(r, base);
            base = compose(base, base);
            e >>= 1;
        }
        return r;
    }

    // Invariant-factor structure from the Sylow decomposition: for each
    // p | h the p-power torsion counts pin the partition.
    FiniteAbelianGroup structure() const {
        i64 h = class_number();
        if (h == 1) return FiniteAbelianGroup{};
        std::vector<i64> primary_orders;
        for (const auto& pp : factorize(h).factors) {
            i64 p = pp.prime;
            int a = pp.exponent;
            i64 cofactor = h / ipow_checked(p, a);
            std::vector<QForm> sylow;
            for (const auto& f : forms_) sylow.push_back(power(f, cofactor));
            std::sort(sylow.begin(), sylow.end());
            sylow.erase(std::unique(sylow.begin(), sylow.end()), sylow.end());
            if (static_cast<i64>(sylow.size()) != ipow_checked(p, a))
                throw internal_error("Sylow subgroup has wrong order");
            // torsion profile: s_j = log_p #{x in S : x^{p^j} = 1}
            QForm id = principal();
            std::vector<int> s{0};
            while (s.back() < a) {
                i64 pj = ipow_checked(p, static_cast<int>(s.size()));
                i64 cnt = 0;
                for (const auto& f : sylow)
                    if (power(f, pj) == id) ++cnt;
                int sj = 0;
                while (ipow_checked(p, sj) < cnt) ++sj;
                if (ipow_checked(p, sj) != cnt) throw internal_error("torsion count not a p-power");
                s.push_back(sj);
            }
            // #{i : lambda_i >= j} = s_j - s_{j-1} pins the exponent partition
            std::vector<int> exponents;
            for (std::size_t j = 1; j < s.size(); ++j) {
                int mult_ge_j = s[j] - s[j - 1];
                while (static_cast<int>(exponents.size()) < mult_ge_j) exponents.push_back(0);
                for (int i = 0; i < mult_ge_j; ++i) exponents[static_cast<std::size_t>(i)]++;
            }
            for (int e : exponents) primary_orders.push_back(ipow_checked(p, e));
        }
        return from_cyclic_list(primary_orders);
    }

private:
    void enumerate_reduced() {
        for (i64 a = 1; 3 * a * a <= -d_; ++a) {
            i64 b0 = ((d_ % 2) + 2) % 2; // b == d mod 2
            for (i64 b = b0; b <= a; b += 2) {
                i128 num = i128(b) * b - d_;
                if (num % (4 * a) != 0) continue;
                i64 c = static_cast<i64>(num / (4 * a));
                if (c < a) continue;
                // |b| <= a <= c with b >= 0 when |b| = a or a = c
                forms_.push_back({a, b, c});
                if (b != 0 && b != a && a != c) forms_.push_back({a, -b, c});
            }
        }
        std::sort(forms_.begin(), forms_.end());
    }

    i64 d_;
    std::vector<QForm> forms_;
};

inline FiniteAbelianGroup class_group(const QuadDisc& d) { return FormClassGroup(d).structure(); }

// Genus theory: rk_2 Cl(d) = omega(|d|) - 1 for fundamental d < 0.
inline int genus_rank2(const QuadDisc& d) {
    if (d.d >= 0) throw domain_error("genus_rank2 needs a negative discriminant");
    return factorize(d.d).omega() - 1;
}

// rad(|d|), the product of ramified primes of the quadratic field.
inline i64 ramified_product(const QuadDisc& d) { return factorize(d.d).radical(); }

} // namespace rclb
