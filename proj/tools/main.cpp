// contagion: CDS pricing under two-firm default contagion with attenuating
// intensity jumps. Subcommands: price, curves, simulate, validate, sweep.
//
// Exit codes: 0 success / all validation rows pass, 1 validation failure,
// 2 configuration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "contagion/contagion.hpp"

namespace {

using contagion::RunConfig;

struct FlagOverrides {
    std::optional<double> b0, c0, b, c;
    std::optional<double> gb1, gc1, gb2, gc2;
    std::optional<double> maturity, interval, settlement_lag, rate;
    std::optional<std::uint64_t> paths, seed;
    std::optional<std::uint32_t> stream;
    std::optional<int> threads;
    std::optional<double> abs_tol, rel_tol, tail_eps;
    std::optional<int> max_subdiv;
    std::optional<std::string> out, format;
    std::string accrual = "summed";
};

void add_common_flags(CLI::App* cmd, std::string& config_path, FlagOverrides& f) {
    cmd->add_option("--config", config_path, "JSON configuration file");
    cmd->add_option("--b0", f.b0, "base intensity of the protection seller B");
    cmd->add_option("--c0", f.c0, "base intensity of the reference entity C");
    cmd->add_option("--b", f.b, "competitor attenuation rate of B");
    cmd->add_option("--c", f.c, "competitor attenuation rate of C");
    cmd->add_option("--maturity", f.maturity, "contract maturity T (years)");
    cmd->add_option("--interval", f.interval, "payment interval (years)");
    cmd->add_option("--settlement-lag", f.settlement_lag, "settlement period (years)");
    cmd->add_option("--rate", f.rate, "flat discount rate");
    cmd->add_option("--paths", f.paths, "Monte Carlo path count");
    cmd->add_option("--seed", f.seed, "Monte Carlo seed");
    cmd->add_option("--stream", f.stream, "Monte Carlo substream id");
    cmd->add_option("--threads", f.threads, "worker threads (0 = auto; never changes results)");
    cmd->add_option("--abs-tol", f.abs_tol, "quadrature absolute tolerance");
    cmd->add_option("--rel-tol", f.rel_tol, "quadrature relative tolerance");
    cmd->add_option("--tail-eps", f.tail_eps, "quadrature tail truncation epsilon");
    cmd->add_option("--max-subdiv", f.max_subdiv, "quadrature subdivision budget");
    cmd->add_option("--out", f.out, "output path ('-' = stdout)");
    cmd->add_option("--format", f.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--accrual", f.accrual,
                    "accrual factor mode for pricing (other commands report both)")
        ->check(CLI::IsMember({"summed", "paper"}));
}

RunConfig resolve_config(const std::string& config_path, const FlagOverrides& f) {
    RunConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw std::invalid_argument("cannot open config file: " + config_path);
        nlohmann::json j;
        in >> j;
        cfg = contagion::parse_config(j);
    }
    if (f.b0) cfg.sym.base_b = *f.b0;
    if (f.c0) cfg.sym.base_c = *f.c0;
    if (f.b) cfg.sym.atten_b = *f.b;
    if (f.c) cfg.sym.atten_c = *f.c;
    if (f.gb1 || f.gc1 || f.gb2 || f.gc2) {
        cfg.symmetric = false;
        cfg.general = {f.b0.value_or(cfg.general.base_b), f.c0.value_or(cfg.general.base_c),
                       f.gb1.value_or(0.0), f.gc1.value_or(0.0), f.gb2.value_or(0.0),
                       f.gc2.value_or(0.0)};
    }
    if (f.maturity) cfg.maturity = *f.maturity;
    if (f.interval) cfg.interval = *f.interval;
    if (f.settlement_lag) cfg.settlement_lag = *f.settlement_lag;
    if (f.rate) cfg.rate = *f.rate;
    if (f.paths) cfg.mc.paths = *f.paths;
    if (f.seed) cfg.mc.seed = *f.seed;
    if (f.stream) cfg.mc.stream = *f.stream;
    if (f.threads) cfg.mc.threads = *f.threads;
    if (f.abs_tol) cfg.quad.abs_tol = *f.abs_tol;
    if (f.rel_tol) cfg.quad.rel_tol = *f.rel_tol;
    if (f.tail_eps) cfg.quad.tail_epsilon = *f.tail_eps;
    if (f.max_subdiv) cfg.quad.max_subdivisions = *f.max_subdiv;
    if (f.out) cfg.output.path = *f.out;
    if (f.format) cfg.output.format = *f.format;
    contagion::check_config(cfg);
    return cfg;
}

void write_output(const RunConfig& cfg, const std::string& payload) {
    if (cfg.output.path == "-") {
        std::cout << payload;
        return;
    }
    std::ofstream out(cfg.output.path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output path: " + cfg.output.path);
    out << payload;
}

nlohmann::ordered_json inputs_json(const RunConfig& cfg) {
    return {{"b0", cfg.sym.base_b},           {"c0", cfg.sym.base_c},
            {"b", cfg.sym.atten_b},           {"c", cfg.sym.atten_c},
            {"maturity", cfg.maturity},       {"interval", cfg.interval},
            {"settlement_lag", cfg.settlement_lag}, {"rate", cfg.rate}};
}

contagion::AccrualMode parse_mode(const std::string& s) {
    return s == "paper" ? contagion::AccrualMode::Condensed
                        : contagion::AccrualMode::SummedPerPeriod;
}

int cmd_price(const RunConfig& cfg, const std::string& accrual, bool annualized) {
    const auto params = cfg.symmetric_params();
    const auto sched = cfg.schedule();
    const auto mode = parse_mode(accrual);
    const auto selected = contagion::swap_premium(params, sched, mode);
    const auto summed = contagion::swap_premium(params, sched,
                                               contagion::AccrualMode::SummedPerPeriod);
    const auto condensed =
        contagion::swap_premium(params, sched, contagion::AccrualMode::Condensed);

    std::string payload;
    if (cfg.output.format == "json") {
        nlohmann::ordered_json j = {{"inputs", inputs_json(cfg)},
                                    {"beta", selected.beta},
                                    {"annuity", selected.annuity},
                                    {"protection", selected.protection},
                                    {"accrual_summed", selected.accrual_summed},
                                    {"accrual_condensed", selected.accrual_condensed},
                                    {"premium_summed", summed.premium},
                                    {"premium_condensed", condensed.premium},
                                    {"mode", contagion::to_string(mode)},
                                    {"premium", selected.premium}};
        if (annualized) j["premium_annualized"] = contagion::annualized_premium(selected, sched);
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "b0,c0,b,c,maturity,interval,settlement_lag,rate,beta,annuity,protection,"
               "accrual_summed,accrual_condensed,premium_summed,premium_condensed,mode,premium";
        if (annualized) out << ",premium_annualized";
        out << '\n';
        using contagion::format_full;
        out << format_full(params.base_b) << ',' << format_full(params.base_c) << ','
            << format_full(params.atten_b) << ',' << format_full(params.atten_c) << ','
            << format_full(sched.maturity) << ',' << format_full(sched.interval) << ','
            << format_full(sched.settlement_lag) << ',' << format_full(sched.rate) << ','
            << format_full(selected.beta) << ',' << format_full(selected.annuity) << ','
            << format_full(selected.protection) << ',' << format_full(selected.accrual_summed)
            << ',' << format_full(selected.accrual_condensed) << ','
            << format_full(summed.premium) << ',' << format_full(condensed.premium) << ','
            << contagion::to_string(mode) << ',' << format_full(selected.premium);
        if (annualized) out << ',' << format_full(contagion::annualized_premium(selected, sched));
        out << '\n';
        payload = out.str();
    }
    write_output(cfg, payload);
    if (cfg.output.path != "-") {
        std::cout << "premium (" << contagion::to_string(mode)
                  << " accrual): " << contagion::format_human(selected.premium) << "  [wrote "
                  << cfg.output.path << "]\n";
    }
    return 0;
}

int cmd_curves(const RunConfig& cfg, const contagion::GridSpec& grid) {
    const auto params = cfg.symmetric_params();
    const auto rows = contagion::curve_table(params, grid);
    const std::string payload = cfg.output.format == "json"
                                    ? contagion::to_json(rows).dump(2) + "\n"
                                    : contagion::curves_csv(rows);
    write_output(cfg, payload);
    if (cfg.output.path != "-")
        std::cout << rows.size() << " grid rows  [wrote " << cfg.output.path << "]\n";
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    const auto params = cfg.general_params();
    contagion::require_valid(params);
    const auto sched = cfg.schedule();
    const contagion::RandomSource src{cfg.mc.seed, cfg.mc.stream};
    const auto est =
        contagion::estimate_pricing(params, sched, cfg.mc.paths, src, cfg.mc.threads);

    std::string payload;
    if (cfg.output.format == "json") {
        nlohmann::ordered_json j = {{"paths", cfg.mc.paths},
                                    {"seed", cfg.mc.seed},
                                    {"stream", cfg.mc.stream},
                                    {"annuity", contagion::to_json(est.annuity)},
                                    {"protection", contagion::to_json(est.protection)},
                                    {"accrual", contagion::to_json(est.accrual)},
                                    {"premium", contagion::to_json(est.premium)}};
        payload = j.dump(2) + "\n";
    } else {
        std::ostringstream out;
        out << "name,mean,stderr,n,ci_low,ci_high\n";
        auto row = [&](const char* name, const contagion::Estimate& e) {
            out << name << ',' << contagion::format_full(e.mean) << ','
                << contagion::format_full(e.std_error) << ',' << e.n << ','
                << contagion::format_full(e.ci_low) << ',' << contagion::format_full(e.ci_high)
                << '\n';
        };
        row("annuity", est.annuity);
        row("protection", est.protection);
        row("accrual", est.accrual);
        row("premium", est.premium);
        payload = out.str();
    }
    write_output(cfg, payload);
    if (cfg.output.path != "-")
        std::cout << "premium estimate: " << contagion::format_human(est.premium.mean) << " +/- "
                  << contagion::format_human(est.premium.std_error) << "  [wrote "
                  << cfg.output.path << "]\n";
    return 0;
}

int cmd_validate(const RunConfig& cfg) {
    const auto params = cfg.symmetric_params();
    const auto sched = cfg.schedule();
    const contagion::RandomSource src{cfg.mc.seed, cfg.mc.stream};
    const auto report = contagion::run_validation(params, sched, cfg.mc.paths, src, cfg.quad,
                                                  {}, cfg.mc.threads);
    const std::string payload = cfg.output.format == "json"
                                    ? contagion::to_json(report).dump(2) + "\n"
                                    : contagion::validation_csv(report);
    write_output(cfg, payload);
    if (cfg.output.path != "-") {
        int checked = 0, passed = 0;
        for (const auto& r : report.rows) {
            if (!r.checked) continue;
            ++checked;
            if (r.pass) ++passed;
        }
        std::cout << "validation: " << passed << "/" << checked << " checks passed; "
                  << "accrual ratio " << contagion::format_human(report.accrual_ratio)
                  << " vs (1-e^-beta*T) "
                  << contagion::format_human(report.accrual_ratio_reference) << "  [wrote "
                  << cfg.output.path << "]\n";
    }
    return report.all_pass ? 0 : 1;
}

int cmd_sweep(const RunConfig& cfg, const contagion::SweepSpec& spec) {
    const auto params = cfg.symmetric_params();
    const auto sched = cfg.schedule();
    const auto rows = contagion::sweep_table(params, sched, spec);
    const std::string payload = cfg.output.format == "json"
                                    ? contagion::to_json(spec.parameter, rows).dump(2) + "\n"
                                    : contagion::sweep_csv(spec.parameter, rows);
    write_output(cfg, payload);
    if (cfg.output.path != "-")
        std::cout << rows.size() << " sweep rows  [wrote " << cfg.output.path << "]\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CDS pricing under two-firm default contagion with attenuating jumps"};
    app.require_subcommand(0, 1);

    bool print_schema = false;
    app.add_flag("--print-schema", print_schema, "print the config JSON schema and exit");

    std::string config_path;
    FlagOverrides flags;

    auto* price = app.add_subcommand("price", "closed-form premium breakdown");
    bool annualized = false;
    add_common_flags(price, config_path, flags);
    price->add_flag("--annualized", annualized, "also report premium / interval");

    auto* curves = app.add_subcommand("curves", "survival/density tables on a time grid");
    contagion::GridSpec grid;
    add_common_flags(curves, config_path, flags);
    curves->add_option("--tmin", grid.t_min, "grid start (years)");
    curves->add_option("--tmax", grid.t_max, "grid end (years)");
    curves->add_option("--steps", grid.steps, "points per axis");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo leg and premium estimates");
    add_common_flags(simulate, config_path, flags);
    simulate->add_option("--b1", flags.gb1, "general jump of B (enables general parameters)");
    simulate->add_option("--c1", flags.gc1, "general jump of C");
    simulate->add_option("--b2", flags.gb2, "general attenuation of B");
    simulate->add_option("--c2", flags.gc2, "general attenuation of C");

    auto* validate = app.add_subcommand("validate", "closed form vs quadrature vs Monte Carlo");
    add_common_flags(validate, config_path, flags);

    auto* sweep = app.add_subcommand("sweep", "premium and legs along one parameter");
    contagion::SweepSpec spec;
    add_common_flags(sweep, config_path, flags);
    sweep->add_option("--param", spec.parameter, "one of b0,c0,b,c,r,T,dT,delta")->required();
    sweep->add_option("--from", spec.from, "start value")->required();
    sweep->add_option("--to", spec.to, "end value");
    sweep->add_option("--steps", spec.steps, "number of values");

    CLI11_PARSE(app, argc, argv);

    if (print_schema) {
        std::cout << contagion::config_schema() << "\n";
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return 0;
    }

    try {
        const RunConfig cfg = resolve_config(config_path, flags);
        if (price->parsed()) return cmd_price(cfg, flags.accrual, annualized);
        if (curves->parsed()) return cmd_curves(cfg, grid);
        if (simulate->parsed()) return cmd_simulate(cfg);
        if (validate->parsed()) return cmd_validate(cfg);
        if (sweep->parsed()) {
            if (sweep->count("--to") == 0) spec.to = spec.from;
            return cmd_sweep(cfg, spec);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
