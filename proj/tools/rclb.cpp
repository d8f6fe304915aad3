// Command-line runner for the class-group statistics experiments.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rclb/stats.hpp"

namespace {

void apply_json_config(rclb::ExperimentConfig& cfg, const std::string& path, const std::set<std::string>& explicit_flags) {
    std::ifstream in(path);
    if (!in) throw rclb::config_error("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw rclb::config_error(std::string("bad config JSON: ") + e.what());
    }
    auto want = [&](const char* key) { return j.contains(key) && !explicit_flags.count(key); };
    if (want("family")) cfg.family = j["family"].get<std::string>();
    if (want("limit")) cfg.limit = j["limit"].get<rclb::i64>();
    if (want("base_conductor")) cfg.conductor = j["base_conductor"].get<rclb::i64>();
    if (want("gamma_max")) cfg.gamma_max = j["gamma_max"].get<int>();
    if (want("modulus")) cfg.modulus = j["modulus"].get<rclb::i64>();
    if (want("omega_condition")) cfg.omega_condition = j["omega_condition"].get<std::string>();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"class-group rank bounds and field-counting statistics"};
    app.require_subcommand(1);

    rclb::ExperimentConfig cfg;
    std::string config_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--limit", cfg.limit, "counting bound X");
        sub->add_option("--grid-decades", cfg.grid_decades, "decades spanned by the X grid");
        sub->add_option("--per-decade", cfg.per_decade, "grid points per decade");
        sub->add_option("--conductor", cfg.conductor, "cubic base conductor (7, 9 or 13)");
        sub->add_option("--gamma-max", cfg.gamma_max, "largest tabulated gamma");
        sub->add_option("--p", cfg.p, "rational prime p");
        sub->add_option("--l", cfg.l, "power index l");
        sub->add_option("--r", cfg.r, "largest rank r in probability columns");
        sub->add_option("--family", cfg.family, "family: quadratic|cyclic-cubic|klein-four|a4-sextic");
        sub->add_option("--modulus", cfg.modulus, "ray-class modulus for gamma marking");
        sub->add_option("--omega-condition", cfg.omega_condition, "omega condition, e.g. 2^1");
        sub->add_option("--output", cfg.output, "output directory for CSV reports");
        sub->add_option("--cache-dir", cfg.cache_dir, "prime table cache directory");
        sub->add_option("--workers", cfg.workers, "worker threads");
        sub->add_option("--config", config_path, "JSON config file");
        return sub;
    };

    add_common(app.add_subcommand("table1", "tame splitting types of the sextic chain"));
    auto* cohom = add_common(app.add_subcommand("cohom", "cochain cohomology dimensions"));
    cohom->add_option("--group", cfg.group, "group: C2|C3|C4|A4");
    cohom->add_option("--module", cfg.module, "module: trivial1|trivial2|klein-twist|perm3|swap2");
    cohom->add_option("--degree", cfg.degree, "cochain degree 0..2");
    add_common(app.add_subcommand("quad-enum", "per-field quadratic enumeration"));
    auto* cg = add_common(app.add_subcommand("class-group", "imaginary quadratic class group"));
    cg->add_option("--d", cfg.disc, "fundamental discriminant d < 0");
    add_common(app.add_subcommand("bound-check", "rank bound soundness sweep"));
    add_common(app.add_subcommand("count-family", "family counts with fitted exponents"));
    add_common(app.add_subcommand("a4-count", "A4-sextic counts over a cubic base"));
    add_common(app.add_subcommand("fit", "fitted growth exponents only"));
    add_common(app.add_subcommand("moments", "rank probabilities and C2-moment estimates"));
    add_common(app.add_subcommand("hypothesis", "subfamily ratio decay verdicts"));

    CLI11_PARSE(app, argc, argv);

    try {
        CLI::App* sub = app.get_subcommands().front();
        cfg.command = sub->get_name();
        if (!config_path.empty()) {
            std::set<std::string> explicit_flags;
            for (const auto* opt : sub->get_options())
                if (opt->count() > 0) {
                    std::string name = opt->get_name();
                    if (name.rfind("--", 0) == 0) name = name.substr(2);
                    if (name == "conductor") name = "base_conductor";
                    if (name == "omega-condition") name = "omega_condition";
                    if (name == "gamma-max") name = "gamma_max";
                    explicit_flags.insert(name);
                }
            apply_json_config(cfg, config_path, explicit_flags);
        }
        rclb::RunResult result = rclb::run_command(cfg);
        std::cout << result.summary;
        if (!cfg.output.empty())
            for (const auto& [name, content] : result.files) std::cout << "wrote " << cfg.output << '/' << name << '\n';
        return 0;
    } catch (const rclb::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return rclb::exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
