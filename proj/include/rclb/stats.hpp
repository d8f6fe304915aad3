#pragma once

// Experiment runner: finite-X estimators for rank probabilities and moments,
// command orchestration over the other modules, and deterministic CSV/report
// emission. Limit claims are rendered as trend verdicts, never asserted
// limits.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "rclb/abelian.hpp"
#include "rclb/arith.hpp"
#include "rclb/bound.hpp"
#include "rclb/dirichlet.hpp"
#include "rclb/errors.hpp"
#include "rclb/families.hpp"
#include "rclb/permgroup.hpp"
#include "rclb/quadforms.hpp"
#include "rclb/util.hpp"

namespace rclb {

// Floats are printed at 12 significant digits everywhere.
inline std::string fmt12(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// ---------------------------------------------------------------------------
// Estimators

// #{records : C < X and rank <= r} / #{records : C < X}, weighted.
template <class RankFn>
double prob_estimate(const std::vector<FieldRecord>& records, RankFn&& rank_of, int r, i64 x) {
    i64 total = 0, hit = 0;
    for (const auto& rec : records) {
        if (rec.counting_value >= x) continue;
        total += rec.weight;
        if (rank_of(rec) <= r) hit += rec.weight;
    }
    if (total == 0) throw domain_error("prob_estimate: empty family below X");
    return static_cast<double>(hit) / static_cast<double>(total);
}

// Average of |Hom(Cl, target)| over records with C < X; target must be the
// trivial group or C2 (realised through the exact 2-rank).
inline double moment_estimate(const std::vector<FieldRecord>& records, const FiniteAbelianGroup& target, i64 x) {
    const auto& inv = target.invariant_factors();
    bool trivial_target = inv.empty();
    bool c2_target = inv.size() == 1 && inv[0] == 2;
    if (!trivial_target && !c2_target)
        throw config_error("moment_estimate supports the trivial target and C2");
    i64 total = 0;
    double sum = 0;
    for (const auto& rec : records) {
        if (rec.counting_value >= x) continue;
        if (trivial_target) {
            total += rec.weight;
            sum += static_cast<double>(rec.weight);
            continue;
        }
        if (!rec.rank2) throw config_error("moment_estimate needs exact rank data (imaginary quadratic subfamily)");
        total += rec.weight;
        sum += static_cast<double>(rec.weight) * std::pow(2.0, *rec.rank2);
    }
    if (total == 0) throw domain_error("moment_estimate: empty family below X");
    return sum / static_cast<double>(total);
}

// ---------------------------------------------------------------------------
// Configuration

struct ExperimentConfig {
    std::string command;
    std::string family = "quadratic";
    i64 limit = 10000000;
    int grid_decades = 4;
    int per_decade = 4;
    i64 p = 2;
    int l = 1;
    int r = 4;
    int gamma_max = 4;
    i64 conductor = 7;
    i64 disc = -4;
    std::string group = "C3";
    std::string module = "klein-twist";
    int degree = 2;
    std::string output; // output directory; empty = do not write
    std::string cache_dir;
    int workers = 1;
    i64 modulus = 0; // 0 = family default
    std::string omega_condition; // "q^l", empty = family default

    void validate() const {
        if (limit < 2) throw config_error("limit must be at least 2");
        if (workers < 1 || workers > 64) throw config_error("workers must be in [1, 64]");
        if (grid_decades < 1 || grid_decades > 12) throw config_error("grid decades must be in [1, 12]");
        if (per_decade < 1 || per_decade > 16) throw config_error("grid points per decade must be in [1, 16]");
        if (!is_prime_u64(static_cast<u64>(p))) throw config_error("p must be prime");
        if (l < 1 || r < -1 || gamma_max < 0) throw config_error("invalid p/l/r/gamma parameters");
    }

    std::vector<i64> grid() const {
        i64 x_min = limit;
        for (int k = 0; k < grid_decades && x_min > 100; ++k) x_min /= 10;
        return geometric_grid(std::max<i64>(x_min, 10), limit, per_decade);
    }

    SweepOptions sweep_options() const {
        SweepOptions opt;
        opt.gamma_max = gamma_max;
        opt.r_max = std::max(r, 0);
        opt.workers = workers;
        opt.modulus = modulus;
        opt.cache_dir = cache_dir;
        opt.tame_only = false;
        if (!omega_condition.empty()) {
            auto caret = omega_condition.find('^');
            i64 q = std::stoll(omega_condition.substr(0, caret));
            int ll = caret == std::string::npos ? 1 : std::stoi(omega_condition.substr(caret + 1));
            i64 inertia_order = family_from_name(family) == Family::CyclicCubic ? 3 : 2;
            i64 ql = ipow_checked(q, ll);
            opt.omega_marks = inertia_order % ql == 0;
        }
        return opt;
    }
};

struct RunResult {
    std::vector<std::pair<std::string, std::string>> files; // name -> content
    std::string summary;
};

// ---------------------------------------------------------------------------
// Commands

// Golden table of tame splitting types for the A4 sextic chain.
inline std::string table1_csv() {
    PermGroup g = a4_on_six_points();
    Perm a = Perm::from_cycles(6, {{3, 4}, {5, 6}});     // image of (12)(34)
    Perm b = Perm::from_cycles(6, {{1, 2}, {5, 6}});     // image of (13)(24)
    Perm c = Perm::from_cycles(6, {{1, 3, 5}, {2, 4, 6}}); // image of (123)
    PermGroup ca = g.subgroup_generated({a});
    PermGroup klein = g.subgroup_generated({a, b});
    PermGroup cc = g.subgroup_generated({c});
    PermGroup stab1 = g.stabilizer(1);
    PermGroup triv = g.subgroup_generated({});
    struct Row {
        std::string i_label, d_label;
        RamificationLocal local;
    };
    std::vector<Row> rows;
    rows.push_back({"<(12)(34)>", "<(12)(34)>", RamificationLocal(g, ca, ca)});
    rows.push_back({"<(12)(34)>", "<(12)(34) (13)(24)>", RamificationLocal(g, klein, ca)});
    rows.push_back({"<(123)>", "<(123)>", RamificationLocal(g, cc, cc)});
    std::ostringstream os;
    os << "inertia,decomposition,K3,K6,K12\n";
    for (const auto& row : rows) {
        os << row.i_label << ',' << row.d_label << ',' << splitting_type(row.local, klein).to_string() << ','
           << splitting_type(row.local, stab1).to_string() << ',' << splitting_type(row.local, triv).to_string()
           << '\n';
    }
    return os.str();
}

inline PermGroup named_group(const std::string& name) {
    if (name == "C2") return PermGroup::closure(2, {Perm::from_cycles(2, {{1, 2}})});
    if (name == "C3") return PermGroup::closure(3, {Perm::from_cycles(3, {{1, 2, 3}})});
    if (name == "C4") return PermGroup::closure(4, {Perm::from_cycles(4, {{1, 2, 3, 4}})});
    if (name == "A4") return a4_on_six_points();
    throw config_error("unknown group: " + name);
}

inline F2GModule named_module(const PermGroup& g, const std::string& name) {
    auto one_gen = [&](SmallMat m) { return F2GModule(g, m.n, {m}); };
    if (name == "trivial1") {
        std::vector<SmallMat> mats(g.generators().size(), SmallMat::identity(1));
        return F2GModule(g, 1, mats);
    }
    if (name == "trivial2") {
        std::vector<SmallMat> mats(g.generators().size(), SmallMat::identity(2));
        return F2GModule(g, 2, mats);
    }
    if (name == "klein-twist") {
        // order-3 action permuting the nonzero vectors of F2^2
        if (g.generators().size() != 1) throw config_error("klein-twist needs a cyclic group on one generator");
        SmallMat m;
        m.n = 2;
        m.row[0] = 0b10; // e1 -> e2
        m.row[1] = 0b11; // e2 -> e1 + e2
        return one_gen(m);
    }
    if (name == "perm3") {
        if (g.generators().size() != 1) throw config_error("perm3 needs a cyclic group on one generator");
        SmallMat m;
        m.n = 3;
        m.row[0] = 0b010;
        m.row[1] = 0b100;
        m.row[2] = 0b001;
        return one_gen(m);
    }
    if (name == "swap2") {
        if (g.generators().size() != 1) throw config_error("swap2 needs a cyclic group on one generator");
        SmallMat m;
        m.n = 2;
        m.row[0] = 0b10;
        m.row[1] = 0b01;
        return one_gen(m);
    }
    throw config_error("unknown module: " + name);
}

// Checks rank_lower_bound(profile(d), p, l) <= exact genus rank over every
// negative fundamental discriminant with |d| <= limit.
struct BoundCheckResult {
    i64 checked = 0;
    i64 violations = 0;
};

inline BoundCheckResult bound_check_imaginary(i64 limit, i64 p, int l, int workers = 1,
                                              const std::string& cache_dir = {}) {
    if (limit < 3 || limit > i64{10000000}) throw bounds_error("bound check limit must be in [3, 10^7]");
    SweepOptions sweep_opt;
    sweep_opt.cache_dir = cache_dir;
    std::vector<i64> primes = fam_detail::sweep_primes(limit, sweep_opt);
    const i64 block = i64{1} << 19;
    std::size_t nblocks = static_cast<std::size_t>((limit + block - 1) / block);
    std::vector<BoundCheckResult> parts(nblocks);
    parallel_blocks(1, limit + 1, block, workers, [&](std::size_t bi, i64 lo, i64 hi) {
        auto& part = parts[bi];
        fam_detail::omega_sweep_block(lo, hi, primes, [](i64) { return 1; },
                                      [&](i64 m, int om, int, bool sqf, bool) {
            if (!sqf || m % 2 == 0) return;
            // negative fundamental discriminants with odd core m
            auto check = [&](i64 abs_d, int omega_d) {
                if (abs_d > limit) return;
                int rank = omega_d - 1; // exact genus 2-rank
                RamificationProfile profile;
                profile.entries.assign(static_cast<std::size_t>(omega_d), RamifiedEntry{0, 2, true});
                profile.context = ClosureContext{0, 1, 2, 0, 2};
                ++part.checked;
                if (rank_lower_bound(profile, p, l) > rank) ++part.violations;
            };
            if (m % 4 == 3 && m >= 3) check(m, om);
            if (m % 4 == 1) check(4 * m, om + 1);
            check(8 * m, om + 1);
        });
    });
    BoundCheckResult total;
    for (auto& part : parts) {
        total.checked += part.checked;
        total.violations += part.violations;
    }
    return total;
}

namespace stats_detail {

inline std::string totals_csv(const FamilyTotals& t, bool with_sqrt_ratio) {
    std::ostringstream os;
    os << "family,X,N";
    if (with_sqrt_ratio) os << ",N_over_sqrtX";
    for (int g = 0; g <= t.gamma_max(); ++g) os << ",gamma" << g;
    os << '\n';
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        os << family_name(t.family) << ',' << t.grid[i] << ',' << t.n[i];
        if (with_sqrt_ratio)
            os << ',' << fmt12(static_cast<double>(t.n[i]) / std::sqrt(static_cast<double>(t.grid[i])));
        for (int g = 0; g <= t.gamma_max(); ++g) os << ',' << t.gamma_n[static_cast<std::size_t>(g)][i];
        os << '\n';
    }
    return os.str();
}

inline std::string fit_csv(const std::string& model, const FitResult& fit, i64 x_min, i64 x_max) {
    std::ostringstream os;
    os << "model,amplitude,alpha,b,c,max_rel_residual,x_min,x_max\n";
    os << model << ',' << fmt12(fit.amplitude) << ',' << fmt12(fit.alpha) << ',' << fmt12(fit.b) << ','
       << fmt12(fit.c) << ',' << fmt12(fit.max_rel_residual) << ',' << x_min << ',' << x_max << '\n';
    return os.str();
}

inline std::vector<double> grid_doubles(const std::vector<i64>& grid) {
    std::vector<double> xs;
    for (i64 x : grid) xs.push_back(static_cast<double>(x));
    return xs;
}

inline std::vector<double> counts_doubles(const std::vector<i64>& n) {
    std::vector<double> ys;
    for (i64 v : n) ys.push_back(static_cast<double>(v));
    return ys;
}

} // namespace stats_detail

inline RunResult run_command(const ExperimentConfig& cfg) {
    cfg.validate();
    RunResult out;
    std::ostringstream sum;

    if (cfg.command == "table1") {
        std::string csv = table1_csv();
        out.files.emplace_back("table1.csv", csv);
        sum << "table1: 3 rows\n" << csv;
    } else if (cfg.command == "cohom") {
        PermGroup g = named_group(cfg.group);
        F2GModule m = named_module(g, cfg.module);
        CohomologyDims dims = cohomology_dim(g, m, cfg.degree);
        std::ostringstream os;
        os << "group=" << cfg.group << " module=" << cfg.module << " degree=" << cfg.degree << '\n';
        os << "dim Z = " << dims.cocycles << '\n';
        os << "dim B = " << dims.coboundaries << '\n';
        os << "dim H = " << dims.h << '\n';
        out.files.emplace_back("cohom.txt", os.str());
        sum << os.str();
    } else if (cfg.command == "quad-enum") {
        if (cfg.limit > 100000) throw bounds_error("quad-enum writes per-field rows; limit capped at 10^5");
        std::vector<FieldRecord> recs;
        enumerate_quadratic(cfg.limit, [&](const FieldRecord& r) { recs.push_back(r); });
        std::sort(recs.begin(), recs.end(), [](const FieldRecord& a, const FieldRecord& b) {
            if (a.counting_value != b.counting_value) return a.counting_value < b.counting_value;
            i64 aa = a.disc < 0 ? -a.disc : a.disc, bb = b.disc < 0 ? -b.disc : b.disc;
            if (aa != bb) return aa < bb;
            return a.disc < b.disc;
        });
        std::ostringstream os;
        os << "d,disc,C,omega,rk2,h,group\n";
        for (const auto& rec : recs) {
            i64 core = (((rec.disc % 4) + 4) % 4 == 1) ? rec.disc : rec.disc / 4;
            os << core << ',' << rec.disc << ',' << rec.counting_value << ',' << rec.support.size() << ',';
            if (rec.rank2) os << *rec.rank2;
            os << ',';
            if (rec.disc < 0) {
                FormClassGroup grp{QuadDisc(rec.disc)};
                os << grp.class_number() << ',' << grp.structure().to_string();
            } else {
                os << ',';
            }
            os << '\n';
        }
        out.files.emplace_back("quad_enum.csv", os.str());
        sum << "quad-enum: " << recs.size() << " fields with C < " << cfg.limit << '\n';
    } else if (cfg.command == "class-group") {
        QuadDisc d(cfg.disc);
        FormClassGroup grp(d);
        FiniteAbelianGroup structure = grp.structure();
        std::ostringstream os;
        os << "disc,h,group,rk2\n";
        os << cfg.disc << ',' << grp.class_number() << ',' << structure.to_string() << ',' << rank_p(structure, 2)
           << '\n';
        out.files.emplace_back("class_group.csv", os.str());
        sum << "Cl(" << cfg.disc << ") = " << structure.to_string() << " (h = " << grp.class_number() << ")\n";
    } else if (cfg.command == "bound-check") {
        BoundCheckResult r = bound_check_imaginary(cfg.limit, cfg.p, cfg.l, cfg.workers, cfg.cache_dir);
        std::ostringstream os;
        os << "checked " << r.checked << " imaginary fundamental discriminants, |d| <= " << cfg.limit << '\n';
        os << "bound violations: " << r.violations << '\n';
        out.files.emplace_back("bound_check.txt", os.str());
        sum << os.str();
    } else if (cfg.command == "count-family") {
        Family fam = family_from_name(cfg.family);
        auto grid = cfg.grid();
        SweepOptions opt = cfg.sweep_options();
        if (fam != Family::Quadratic) opt.tame_only = true;
        FamilyTotals totals = fam == Family::A4Sextic ? count_a4(cubic_base(cfg.conductor), grid, opt)
                                                      : count_abelian(fam, grid, opt);
        FitModel model;
        std::string model_name;
        if (fam == Family::Quadratic) {
            model_name = "a*x^alpha*(log x)^b";
        } else {
            model.alpha_free = false;
            model.alpha = fam == Family::A4Sextic ? 0.5 : 1.0;
            model_name = "a*x^" + fmt12(model.alpha) + "*(log x)^b";
        }
        FitResult fit = asymptotic_fit(stats_detail::grid_doubles(grid), stats_detail::counts_doubles(totals.n),
                                       model);
        out.files.emplace_back("family_" + family_name(fam) + ".csv", stats_detail::totals_csv(totals, false));
        out.files.emplace_back("family_" + family_name(fam) + "_fit.csv",
                               stats_detail::fit_csv(model_name, fit, grid.front(), grid.back()));
        sum << family_name(fam) << ": N(" << grid.back() << ") = " << totals.n.back() << ", fitted alpha = "
            << fmt12(fit.alpha) << ", b = " << fmt12(fit.b) << '\n';
    } else if (cfg.command == "a4-count") {
        auto grid = cfg.grid();
        SweepOptions opt = cfg.sweep_options();
        FamilyTotals totals = count_a4(cubic_base(cfg.conductor), grid, opt);
        out.files.emplace_back("a4_count.csv", stats_detail::totals_csv(totals, true));
        sum << "a4-sextic conductor " << cfg.conductor << ": total " << totals.n.back() << " (C < " << grid.back()
            << ")\n";
    } else if (cfg.command == "fit") {
        ExperimentConfig sub = cfg;
        sub.command = "count-family";
        RunResult inner = run_command(sub);
        for (auto& f : inner.files)
            if (f.first.find("_fit") != std::string::npos) out.files.emplace_back(f);
        sum << inner.summary;
    } else if (cfg.command == "moments") {
        auto grid = cfg.grid();
        SweepOptions opt = cfg.sweep_options();
        FamilyTotals totals = quadratic_family_stats(grid, opt);
        std::ostringstream os;
        os << "X,N";
        for (int rr = 0; rr <= opt.r_max; ++rr) os << ",P_le_" << rr;
        os << ",E_c2";
        for (int g = 0; g <= totals.gamma_max(); ++g) os << ",gamma" << g;
        os << '\n';
        std::vector<double> moments;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            if (totals.n_imag[i] == 0) throw domain_error("empty imaginary family at grid point");
            os << grid[i] << ',' << totals.n_imag[i];
            for (int rr = 0; rr <= opt.r_max; ++rr) {
                double prob = static_cast<double>(totals.rank_le[static_cast<std::size_t>(rr)][i]) /
                              static_cast<double>(totals.n_imag[i]);
                if (prob < 0.0 || prob > 1.0) throw internal_error("probability estimate outside [0, 1]");
                os << ',' << fmt12(prob);
            }
            double moment = static_cast<double>(totals.moment_num[i]) / static_cast<double>(totals.n_imag[i]);
            if (moment < 1.0) throw internal_error("C2-moment estimate below 1");
            moments.push_back(moment);
            os << ',' << fmt12(moment);
            for (int g = 0; g <= totals.gamma_max(); ++g) os << ',' << totals.gamma_n[static_cast<std::size_t>(g)][i];
            os << '\n';
        }
        out.files.emplace_back("moments.csv", os.str());
        LogLinearFit fit = log_linear_fit(stats_detail::grid_doubles(grid), moments);
        std::ostringstream fos;
        fos << "model,a,k,max_rel_residual,x_min,x_max\n";
        fos << "a+k*log(x)," << fmt12(fit.a) << ',' << fmt12(fit.k) << ',' << fmt12(fit.max_rel_residual) << ','
            << grid.front() << ',' << grid.back() << '\n';
        out.files.emplace_back("moments_fit.csv", fos.str());
        bool increasing = true;
        for (std::size_t i = 1; i < moments.size(); ++i)
            if (moments[i] + 1e-12 < moments[i - 1]) increasing = false;
        std::ostringstream vos;
        vos << "moment trend: " << (increasing ? "increasing" : "NOT increasing") << '\n';
        vos << "moment fit slope k = " << fmt12(fit.k) << " (positive: " << (fit.k > 0 ? "yes" : "no") << ")\n";
        vos << "moment fit max relative residual = " << fmt12(fit.max_rel_residual) << '\n';
        out.files.emplace_back("moments_verdict.txt", vos.str());
        sum << vos.str();
    } else if (cfg.command == "hypothesis") {
        Family fam = family_from_name(cfg.family);
        auto grid = cfg.grid();
        SweepOptions opt = cfg.sweep_options();
        if (fam == Family::CyclicCubic || fam == Family::KleinFour) opt.tame_only = true;
        FamilyTotals totals = fam == Family::A4Sextic ? count_a4(cubic_base(cfg.conductor), grid, opt)
                                                      : count_abelian(fam, grid, opt);
        std::ostringstream os, vos;
        os << "family,gamma,X,N_gamma,N,ratio\n";
        for (int g = 0; g <= std::min(cfg.gamma_max, totals.gamma_max()); ++g) {
            RatioSequence rs = subfamily_ratios(totals, g);
            for (std::size_t i = 0; i < grid.size(); ++i)
                os << family_name(fam) << ',' << g << ',' << grid[i] << ','
                   << totals.gamma_n[static_cast<std::size_t>(g)][i] << ',' << totals.n[i] << ','
                   << fmt12(rs.ratios[i]) << '\n';
            vos << "gamma=" << g << ": decreasing over last three decades: "
                << (rs.decreasing_last_three_decades ? "yes" : "no") << '\n';
        }
        out.files.emplace_back("hypothesis.csv", os.str());
        out.files.emplace_back("hypothesis_verdict.txt", vos.str());
        sum << vos.str();
    } else {
        throw config_error("unknown command: " + cfg.command);
    }

    out.summary = sum.str();
    if (!cfg.output.empty()) {
        std::filesystem::create_directories(cfg.output);
        for (const auto& [name, content] : out.files) {
            std::ofstream f(cfg.output + "/" + name, std::ios::binary);
            if (!f) throw io_error("cannot write " + cfg.output + "/" + name);
            f << content;
        }
    }
    return out;
}

} // namespace rclb
