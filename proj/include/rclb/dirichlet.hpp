#pragma once

// Dirichlet-series numerics: restricted-prime Euler products expanded to
// coefficient series, exact-rational convolution identities, singularity
// exponent probing on a geometric ladder, and Tauberian prediction with
// inverse asymptotic fitting.

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rclb/arith.hpp"
#include "rclb/errors.hpp"
#include "rclb/util.hpp"

namespace rclb {

// Exact rational on 64 bits; inputs here are tiny, overflow is checked.
struct Rational {
    i64 num = 0;
    i64 den = 1;

    Rational() = default;
    Rational(i64 n) : num(n), den(1) {}
    Rational(i64 n, i64 d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw domain_error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i64 g = gcd64(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    static Rational from_i128(i128 n, i128 d) {
        if (d == 0) throw domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        i128 a = n < 0 ? -n : n, b = d;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr i128 lim = i128{1} << 62;
        if (n > lim || n < -lim || d > lim) throw bounds_error("rational overflow");
        Rational r;
        r.num = static_cast<i64>(n);
        r.den = static_cast<i64>(d);
        return r;
    }

    Rational operator+(const Rational& o) const {
        return from_i128(i128(num) * o.den + i128(o.num) * den, i128(den) * o.den);
    }
    Rational operator-(const Rational& o) const {
        return from_i128(i128(num) * o.den - i128(o.num) * den, i128(den) * o.den);
    }
    Rational operator*(const Rational& o) const { return from_i128(i128(num) * o.num, i128(den) * o.den); }
    Rational operator/(const Rational& o) const {
        if (o.num == 0) throw domain_error("rational division by zero");
        return from_i128(i128(num) * o.den, i128(den) * o.num);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    bool operator==(const Rational&) const = default;
    bool is_zero() const { return num == 0; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string to_string() const {
        std::ostringstream os;
        os << num;
        if (den != 1) os << '/' << den;
        return os.str();
    }
};

inline bool coeff_is_zero(const Rational& r) { return r.num == 0; }
inline bool coeff_is_zero(double x) { return x == 0.0; }

// Truncated Dirichlet coefficient sequence. The arithmetic mode is the
// template parameter: CoeffSeries<Rational> for exact identity tests,
// CoeffSeries<double> for asymptotics. Mixing modes is a type error.
template <class T>
struct CoeffSeries {
    static constexpr i64 kMaxN = 10000000;

    i64 n_max = 0;
    std::vector<T> coeff;          // indexed 1..n_max, [0] unused
    double abscissa = 1.0;         // declared abscissa of convergence

    explicit CoeffSeries(i64 n) : n_max(n), coeff(static_cast<std::size_t>(n) + 1, T(0)) {
        if (n < 1 || n > kMaxN) throw bounds_error("series truncation out of range [1, 10^7]");
    }

    T& at(i64 n) { return coeff[static_cast<std::size_t>(n)]; }
    const T& at(i64 n) const { return coeff[static_cast<std::size_t>(n)]; }

    static CoeffSeries one(i64 n) {
        CoeffSeries s(n);
        s.at(1) = T(1);
        return s;
    }
};

using RationalSeries = CoeffSeries<Rational>;
using RealSeries = CoeffSeries<double>;

// Dirichlet convolution, truncations must agree.
template <class T>
CoeffSeries<T> mul(const CoeffSeries<T>& a, const CoeffSeries<T>& b) {
    if (a.n_max != b.n_max) throw domain_error("convolution of series with different truncations");
    CoeffSeries<T> c(a.n_max);
    c.abscissa = std::max(a.abscissa, b.abscissa);
    for (i64 i = 1; i <= a.n_max; ++i) {
        if (coeff_is_zero(a.at(i))) continue;
        for (i64 j = 1; i * j <= a.n_max; ++j) {
            if (coeff_is_zero(b.at(j))) continue;
            c.at(i * j) += a.at(i) * b.at(j);
        }
    }
    return c;
}

// Local Euler factor num(t)/den(t) with t = p^{-s}; constant terms are 1 and
// degrees are at most 8.
struct LocalFactor {
    std::vector<i64> num{1};
    std::vector<i64> den{1};

    void validate() const {
        if (num.empty() || den.empty() || num[0] != 1 || den[0] != 1)
            throw domain_error("local factor must have constant term 1");
        if (num.size() > 9 || den.size() > 9) throw domain_error("local factor degree capped at 8");
    }

    // power series of num/den up to degree j_max
    std::vector<i64> series(int j_max) const {
        validate();
        std::vector<i64> s(static_cast<std::size_t>(j_max) + 1, 0);
        s[0] = 1;
        for (int j = 1; j <= j_max; ++j) {
            i64 v = j < static_cast<int>(num.size()) ? num[static_cast<std::size_t>(j)] : 0;
            for (int i = 1; i <= j && i < static_cast<int>(den.size()); ++i)
                v = checked_add(v, -checked_mul(den[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j - i)]));
            s[static_cast<std::size_t>(j)] = v;
        }
        return s;
    }

    double eval(double t) const {
        auto horner = [t](const std::vector<i64>& p) {
            double v = 0;
            for (std::size_t i = p.size(); i-- > 0;) v = v * t + static_cast<double>(p[i]);
            return v;
        };
        return horner(num) / horner(den);
    }
};

// Restricted-prime Euler product prod_{pred(p)} local(p) evaluated at
// t = p^{-substitution*s}.
struct EulerProductSpec {
    std::function<bool(i64)> prime_pred;
    std::function<LocalFactor(i64)> local;
    int substitution = 1;   // s -> substitution * s
    double sigma0 = 1.0;    // declared singular abscissa in s

    static EulerProductSpec zeta() {
        EulerProductSpec s;
        s.prime_pred = [](i64) { return true; };
        s.local = [](i64) { return LocalFactor{{1}, {1, -1}}; };
        return s;
    }
    static EulerProductSpec restricted_zeta(std::function<bool(i64)> pred) {
        EulerProductSpec s = zeta();
        s.prime_pred = std::move(pred);
        return s;
    }
};

// Multiplicative expansion of the Euler product into coefficients 1..n_max.
template <class T = double>
CoeffSeries<T> expand(const EulerProductSpec& spec, i64 n_max) {
    if (n_max < 1 || n_max > CoeffSeries<T>::kMaxN) throw bounds_error("expand: N out of range");
    CoeffSeries<T> out = CoeffSeries<T>::one(n_max);
    out.abscissa = spec.sigma0;
    const int k = spec.substitution;
    if (k < 1) throw domain_error("substitution must be >= 1");
    PrimeTable table(std::max<i64>(2, n_max));
    table.for_each_prime([&](i64 p) {
        if (!spec.prime_pred(p)) return;
        // largest j with p^(k j) <= n_max
        int j_max = 0;
        i128 q = 1;
        for (;;) {
            i128 next = q;
            bool ok = true;
            for (int t = 0; t < k; ++t) {
                next *= p;
                if (next > n_max) {
                    ok = false;
                    break;
                }
            }
            if (!ok) break;
            q = next;
            ++j_max;
        }
        if (j_max == 0) return;
        std::vector<i64> s = spec.local(p).series(j_max);
        std::vector<i64> powers(static_cast<std::size_t>(j_max) + 1, 1);
        for (int j = 1; j <= j_max; ++j)
            powers[static_cast<std::size_t>(j)] = powers[static_cast<std::size_t>(j - 1)] * ipow_checked(p, k);
        const i64 m_max = n_max / powers[1]; // sources with m * p^k <= n_max
        for (i64 m = 1; m <= m_max; ++m) {
            if (m % p == 0 || coeff_is_zero(out.at(m))) continue;
            for (int j = 1; j <= j_max; ++j) {
                i64 idx = m * powers[static_cast<std::size_t>(j)];
                if (idx > n_max) break;
                if (s[static_cast<std::size_t>(j)] == 0) continue;
                out.at(idx) += out.at(m) * T(s[static_cast<std::size_t>(j)]);
            }
        }
    });
    return out;
}

// ---------------------------------------------------------------------------
// Squarefree series with exactly gamma prime factors from a class

// Coefficients 1 on squarefree products of exactly `gamma` predicate primes.
// Built twice: by direct enumeration and by the convolution recurrence
//   gamma * l_gamma = l1 * l_{gamma-1} - sum_{j=2}^{gamma} (-1)^j l1(js) l_{gamma-j},
// in exact arithmetic; the two must agree coefficient for coefficient.
template <class Pred>
RationalSeries squarefree_class_series(Pred&& class_pred, int gamma, i64 n_max) {
    if (gamma < 0 || gamma > 8) throw domain_error("gamma out of range [0,8]");
    if (n_max < 1 || n_max > RationalSeries::kMaxN) throw bounds_error("series truncation out of range");

    std::vector<i64> primes;
    PrimeTable table(std::max<i64>(2, n_max));
    table.for_each_prime([&](i64 p) {
        if (class_pred(p)) primes.push_back(p);
    });

    // direct route
    RationalSeries direct(n_max);
    direct.abscissa = 1.0;
    std::function<void(std::size_t, i64, int)> dfs = [&](std::size_t start, i64 prod, int used) {
        if (used == gamma) {
            direct.at(prod) = Rational(1);
            return;
        }
        for (std::size_t i = start; i < primes.size(); ++i) {
            if (i128(prod) * primes[i] > n_max) break;
            dfs(i + 1, prod * primes[i], used + 1);
        }
    };
    dfs(0, 1, 0);

    // recurrence route
    auto l1_sub = [&](int j) {
        RationalSeries s(n_max);
        for (i64 p : primes) {
            i128 q = 1;
            bool fits = true;
            for (int t = 0; t < j; ++t) {
                q *= p;
                if (q > n_max) {
                    fits = false;
                    break;
                }
            }
            if (!fits) break;
            s.at(static_cast<i64>(q)) = Rational(1);
        }
        return s;
    };
    std::vector<RationalSeries> l;
    l.push_back(RationalSeries::one(n_max)); // l_0
    if (gamma >= 1) l.push_back(l1_sub(1));
    for (int g = 2; g <= gamma; ++g) {
        RationalSeries acc = mul(l[1], l[static_cast<std::size_t>(g - 1)]);
        for (int j = 2; j <= g; ++j) {
            RationalSeries term = mul(l1_sub(j), l[static_cast<std::size_t>(g - j)]);
            Rational sign((j % 2 == 0) ? -1 : 1);
            for (i64 n = 1; n <= n_max; ++n)
                if (!term.at(n).is_zero()) acc.at(n) += sign * term.at(n);
        }
        Rational inv_g(1, g);
        for (i64 n = 1; n <= n_max; ++n)
            if (!acc.at(n).is_zero()) acc.at(n) = acc.at(n) * inv_g;
        l.push_back(std::move(acc));
    }
    const RationalSeries& rec = l[static_cast<std::size_t>(gamma)];
    for (i64 n = 1; n <= n_max; ++n)
        if (!(rec.at(n) == direct.at(n)))
            throw internal_error("squarefree series: direct and recurrence routes disagree at n=" +
                                 std::to_string(n));
    return direct;
}

// ---------------------------------------------------------------------------
// Evaluation

// Exponential integral E1(x) for x > 0.
inline double expint_e1(double x) {
    if (x <= 0) throw domain_error("E1 needs a positive argument");
    if (x <= 1.0) {
        double sum = 0, term = 1;
        for (int k = 1; k <= 40; ++k) {
            term *= -x / k;
            sum += -term / k;
            if (std::abs(term) < 1e-18) break;
        }
        return -0.57721566490153286060651209008240243 - std::log(x) + sum;
    }
    // modified Lentz continued fraction
    double b = x + 1.0, c = 1e308, d = 1.0 / b, h = d;
    for (int i = 1; i <= 200; ++i) {
        double an = -static_cast<double>(i) * i;
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-15) break;
    }
    return h * std::exp(-x);
}

struct SeriesEval {
    double value = 0;
    double tail_bound = 0;
};

// Partial evaluation of a coefficient series at real sigma. The reported
// tail bound extrapolates the measured dyadic-block masses geometrically,
// which is an integral-comparison estimate for series of regular density.
inline SeriesEval evaluate(const RealSeries& s, double sigma) {
    if (sigma <= s.abscissa) throw domain_error("evaluation at or below the declared abscissa");
    SeriesEval out;
    double block_prev = 0, block_last = 0;
    for (i64 n = 1; n <= s.n_max; ++n) {
        if (s.at(n) == 0) continue;
        double term = s.at(n) * std::pow(static_cast<double>(n), -sigma);
        out.value += term;
        if (n > s.n_max / 2) block_last += std::abs(term);
        else if (n > s.n_max / 4) block_prev += std::abs(term);
    }
    double ratio = block_prev > 0 ? std::min(block_last / block_prev, 0.95) : 0.5;
    out.tail_bound = block_last * ratio / (1.0 - ratio);
    return out;
}

inline SeriesEval evaluate(const RationalSeries& s, double sigma) {
    RealSeries r(s.n_max);
    r.abscissa = s.abscissa;
    for (i64 n = 1; n <= s.n_max; ++n) r.at(n) = s.at(n).to_double();
    return evaluate(r, sigma);
}

struct SpecEval {
    double log_value = 0;      // log of the truncated product plus tail
    double tail_correction = 0;
    double prime_density = 0;  // measured share of predicate primes
};

// log of the Euler product at real sigma: exact local factors over primes
// p <= prime_limit, then an integral-comparison tail with the measured
// prime density of the class.
inline SpecEval evaluate_log(const EulerProductSpec& spec, double sigma, const PrimeTable& table) {
    SpecEval out;
    const int k = spec.substitution;
    i64 count_all = 0, count_class = 0;
    i64 rep_prime = 2;
    table.for_each_prime([&](i64 p) {
        ++count_all;
        if (!spec.prime_pred(p)) return;
        ++count_class;
        rep_prime = p;
        double t = std::pow(static_cast<double>(p), -static_cast<double>(k) * sigma);
        double f = spec.local(p).eval(t);
        if (!(f > 0)) throw domain_error("nonpositive local factor in log evaluation");
        out.log_value += std::log(f);
    });
    out.prime_density = count_all ? static_cast<double>(count_class) / static_cast<double>(count_all) : 0.0;
    if (count_class == 0) return out; // empty product: log 1 = 0

    // log-series of the local factor at a representative prime
    std::vector<i64> s = spec.local(rep_prime).series(8);
    std::vector<double> g(9, 0.0);
    for (int j = 1; j <= 8; ++j) {
        double v = static_cast<double>(s[static_cast<std::size_t>(j)]);
        for (int i = 1; i < j; ++i) v -= (static_cast<double>(i) / j) * g[static_cast<std::size_t>(i)] *
                                         static_cast<double>(s[static_cast<std::size_t>(j - i)]);
        g[static_cast<std::size_t>(j)] = v;
    }
    double logP = std::log(static_cast<double>(table.limit()));
    for (int j = 1; j <= 8; ++j) {
        if (g[static_cast<std::size_t>(j)] == 0.0) continue;
        double u = static_cast<double>(j) * k * sigma;
        if (u <= 1.0) throw domain_error("evaluation at or below the product's abscissa");
        out.tail_correction += g[static_cast<std::size_t>(j)] * out.prime_density * expint_e1((u - 1.0) * logP);
    }
    out.log_value += out.tail_correction;
    return out;
}

inline double evaluate(const EulerProductSpec& spec, double sigma, const PrimeTable& table) {
    return std::exp(evaluate_log(spec, sigma, table).log_value);
}

struct ProbeResult {
    double exponent = 0;        // least-squares slope, the singularity exponent
    double max_residual = 0;    // against the fitted line
    std::vector<double> epsilons;
    std::vector<double> log_values;
};

// Least-squares slope of log F(sigma0 + eps) against log(1/eps) on the
// geometric ladder eps_k = 0.1 * 2^{-k}, k = 1..12.
inline ProbeResult exponent_probe(const EulerProductSpec& spec, double sigma0, const PrimeTable& table,
                                  int ladder_points = 12) {
    if (ladder_points < 4) throw domain_error("ladder needs at least 4 points");
    ProbeResult r;
    std::vector<double> xs, ys;
    for (int k = 1; k <= ladder_points; ++k) {
        double eps = 0.1 * std::pow(2.0, -k);
        double y = evaluate_log(spec, sigma0 + eps, table).log_value;
        if (!std::isfinite(y)) throw fit_error("non-finite evaluation on the ladder");
        r.epsilons.push_back(eps);
        r.log_values.push_back(y);
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(y);
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw fit_error("degenerate ladder");
    r.exponent = (n * sxy - sx * sy) / denom;
    double intercept = (sy - r.exponent * sx) / n;
    double span = *std::max_element(ys.begin(), ys.end()) - *std::min_element(ys.begin(), ys.end());
    for (std::size_t i = 0; i < xs.size(); ++i)
        r.max_residual = std::max(r.max_residual, std::abs(ys[i] - (intercept + r.exponent * xs[i])));
    if (span > 0 && r.max_residual > 0.25 * span) {
        std::ostringstream os;
        os << "ladder fit did not converge: max residual " << r.max_residual << " over span " << span;
        throw fit_error(os.str());
    }
    return r;
}

// ---------------------------------------------------------------------------
// Tauberian prediction and inverse fitting

// Lanczos approximation, g = 7, 9 coefficients.
inline double gamma_function(double z) {
    static const double c[9] = {0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,      -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z < 0.5) {
        return M_PI / (std::sin(M_PI * z) * gamma_function(1.0 - z));
    }
    z -= 1.0;
    double x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + i);
    double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

// amplitude * x^{x_power} (log x)^{log_power} (log log x)^{loglog_power}
struct AsymptoticShape {
    double amplitude = 0;
    double x_power = 1;
    double log_power = 0;
    double loglog_power = 0;

    double eval(double x) const {
        return amplitude * std::pow(x, x_power) * std::pow(std::log(x), log_power) *
               std::pow(std::log(std::log(x)), loglog_power);
    }
};

// Partial-sum shape predicted for a series whose singularity is
// (s-1)^{-alpha0} log^{b0}(1/(s-1)) with regular part g0 at the pole.
inline AsymptoticShape tauberian_predict(double alpha0, int b0, double g0_at_1) {
    if (alpha0 < 0) throw domain_error("alpha0 must be >= 0");
    if (b0 < 0) throw domain_error("b0 must be >= 0");
    AsymptoticShape s;
    if (alpha0 == 0.0) {
        if (b0 == 0) throw domain_error("unsupported case alpha0 = 0, b0 = 0");
        s.amplitude = b0 * g0_at_1;
        s.log_power = -1;
        s.loglog_power = b0 - 1;
        return s;
    }
    s.amplitude = g0_at_1 / gamma_function(alpha0);
    s.log_power = alpha0 - 1;
    s.loglog_power = b0;
    return s;
}

struct FitModel {
    bool alpha_free = true;
    double alpha = 1;
    bool b_free = true;
    double b = 0;
    bool c_free = false;
    double c = 0;
};

struct FitResult {
    double amplitude = 0;
    double alpha = 0;
    double b = 0;
    double c = 0;
    double max_rel_residual = 0;
};

// Log-space least squares for a x^alpha (log x)^b (log log x)^c with the
// chosen exponents fixed or free.
inline FitResult asymptotic_fit(const std::vector<double>& xs, const std::vector<double>& sums, FitModel model) {
    if (xs.size() != sums.size()) throw domain_error("fit: mismatched sample arrays");
    if (xs.size() < 6) throw fit_error("fit needs at least 6 sample points");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (xs[i] <= std::exp(1.0) || sums[i] <= 0) throw domain_error("fit samples must have x > e and sum > 0");
        if (i && xs[i] <= xs[i - 1]) throw domain_error("fit samples must be ascending in x");
    }
    if (xs.back() / xs.front() < 100.0) throw fit_error("fit samples must span at least two decades");

    std::vector<std::vector<double>> cols;
    cols.push_back(std::vector<double>(xs.size(), 1.0));
    auto basis = [&](int which, double x) {
        switch (which) {
            case 0: return std::log(x);
            case 1: return std::log(std::log(x));
            default: return std::log(std::log(std::log(x)));
        }
    };
    std::vector<int> free_ids;
    if (model.alpha_free) free_ids.push_back(0);
    if (model.b_free) free_ids.push_back(1);
    if (model.c_free) free_ids.push_back(2);
    for (int id : free_ids) {
        std::vector<double> col;
        for (double x : xs) col.push_back(basis(id, x));
        cols.push_back(std::move(col));
    }
    std::vector<double> rhs;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double y = std::log(sums[i]);
        if (!model.alpha_free) y -= model.alpha * basis(0, xs[i]);
        if (!model.b_free) y -= model.b * basis(1, xs[i]);
        if (!model.c_free) y -= model.c * basis(2, xs[i]);
        rhs.push_back(y);
    }
    // normal equations
    std::size_t m = cols.size();
    std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            for (std::size_t t = 0; t < xs.size(); ++t) a[i][j] += cols[i][t] * cols[j][t];
        for (std::size_t t = 0; t < xs.size(); ++t) a[i][m] += cols[i][t] * rhs[t];
    }
    // Gaussian elimination with partial pivoting
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r2 = col + 1; r2 < m; ++r2)
            if (std::abs(a[r2][col]) > std::abs(a[piv][col])) piv = r2;
        std::swap(a[col], a[piv]);
        if (std::abs(a[col][col]) < 1e-9) throw fit_error("ill-conditioned fit design");
        for (std::size_t r2 = 0; r2 < m; ++r2) {
            if (r2 == col) continue;
            double f = a[r2][col] / a[col][col];
            for (std::size_t c2 = col; c2 <= m; ++c2) a[r2][c2] -= f * a[col][c2];
        }
    }
    std::vector<double> sol(m);
    for (std::size_t i = 0; i < m; ++i) sol[i] = a[i][m] / a[i][i];

    FitResult out;
    out.amplitude = std::exp(sol[0]);
    out.alpha = model.alpha;
    out.b = model.b;
    out.c = model.c;
    for (std::size_t i = 0; i < free_ids.size(); ++i) {
        double v = sol[i + 1];
        if (free_ids[i] == 0) out.alpha = v;
        else if (free_ids[i] == 1) out.b = v;
        else out.c = v;
    }
    for (std::size_t t = 0; t < xs.size(); ++t) {
        double fitted = out.amplitude * std::pow(xs[t], out.alpha) * std::pow(std::log(xs[t]), out.b) *
                        std::pow(std::log(std::log(xs[t])), out.c);
        out.max_rel_residual = std::max(out.max_rel_residual, std::abs(fitted - sums[t]) / sums[t]);
    }
    return out;
}

// Fit of y = a + k log x; returns (a, k, max |residual| / |y|).
struct LogLinearFit {
    double a = 0;
    double k = 0;
    double max_rel_residual = 0;
};

inline LogLinearFit log_linear_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 3) throw fit_error("log-linear fit needs >= 3 points");
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double x = std::log(xs[i]);
        sx += x;
        sy += ys[i];
        sxx += x * x;
        sxy += x * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-12) throw fit_error("degenerate log-linear design");
    LogLinearFit f;
    f.k = (n * sxy - sx * sy) / denom;
    f.a = (sy - f.k * sx) / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double fitted = f.a + f.k * std::log(xs[i]);
        f.max_rel_residual = std::max(f.max_rel_residual, std::abs(fitted - ys[i]) / std::abs(ys[i]));
    }
    return f;
}

} // namespace rclb
