#pragma once

// Machine-readable output: CSV with fixed column orders and JSON mirroring
// the struct field names. Machine numbers carry 17 significant digits
// (round-trip exact for doubles); human tables print 6.

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <json.hpp>

#include "contagion/mc.hpp"
#include "contagion/pricing.hpp"
#include "contagion/tables.hpp"
#include "contagion/validation.hpp"

namespace contagion {

inline std::string format_full(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string format_human(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace detail {

inline nlohmann::ordered_json json_number(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const Estimate& e) {
    return {{"mean", detail::json_number(e.mean)},
            {"stderr", detail::json_number(e.std_error)},
            {"n", e.n},
            {"ci_low", detail::json_number(e.ci_low)},
            {"ci_high", detail::json_number(e.ci_high)}};
}

inline nlohmann::ordered_json to_json(const PricingBreakdown& b) {
    return {{"beta", b.beta},
            {"annuity", b.annuity},
            {"protection", b.protection},
            {"accrual_summed", b.accrual_summed},
            {"accrual_condensed", b.accrual_condensed},
            {"premium", b.premium},
            {"mode", to_string(b.mode)}};
}

inline nlohmann::ordered_json to_json(const ValidationRow& r) {
    return {{"name", r.name},
            {"closed_form", detail::json_number(r.closed_form)},
            {"quadrature", detail::json_number(r.quadrature)},
            {"mc_mean", detail::json_number(r.mc_mean)},
            {"mc_stderr", detail::json_number(r.mc_stderr)},
            {"abs_diff_cf_quad", detail::json_number(r.abs_diff_cf_quad)},
            {"z_score_cf_mc", detail::json_number(r.z_score_cf_mc)},
            {"checked", r.checked},
            {"pass", r.pass}};
}

inline nlohmann::ordered_json to_json(const ValidationReport& rep) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.rows) rows.push_back(to_json(r));
    nlohmann::ordered_json bound_rows = nlohmann::ordered_json::array();
    for (const auto& r : rep.premium_bound_grid)
        bound_rows.push_back({{"b", r.atten_b},
                              {"delta", r.settlement_lag},
                              {"T", r.maturity},
                              {"premium_condensed", r.premium_condensed},
                              {"bound", r.bound},
                              {"holds", r.holds}});
    return {{"rows", rows},
            {"accrual_ratio", rep.accrual_ratio},
            {"accrual_ratio_reference", rep.accrual_ratio_reference},
            {"premium_summed", rep.premium_summed},
            {"premium_condensed", rep.premium_condensed},
            {"premium_bound_grid", bound_rows},
            {"all_pass", rep.all_pass}};
}

// ---- CSV renderers (column orders are part of the interface) ----

inline std::string validation_csv(const ValidationReport& rep) {
    std::ostringstream out;
    out << "name,closed_form,quadrature,mc_mean,mc_stderr,abs_diff_cf_quad,z_score_cf_mc,pass\n";
    auto cell = [](double v) { return format_full(v); };
    for (const auto& r : rep.rows) {
        out << r.name << ',' << cell(r.closed_form) << ',' << cell(r.quadrature) << ','
            << cell(r.mc_mean) << ',' << cell(r.mc_stderr) << ',' << cell(r.abs_diff_cf_quad)
            << ',' << cell(r.z_score_cf_mc) << ','
            << (!r.checked ? "info" : r.pass ? "pass" : "fail") << '\n';
    }
    for (const auto& r : rep.premium_bound_grid) {
        char name[96];
        std::snprintf(name, sizeof name, "premium_bound[b=%g;delta=%g;T=%g]", r.atten_b,
                      r.settlement_lag, r.maturity);
        // closed_form column holds the condensed premium, quadrature the bound
        out << name << ',' << cell(r.premium_condensed) << ',' << cell(r.bound) << ",,,,,"
            << (r.holds ? "info" : "info-violated") << '\n';
    }
    return out.str();
}

inline std::string curves_csv(const std::vector<CurveRow>& rows) {
    std::ostringstream out;
    out << "t1,t2,joint_survival,joint_density,marginal_b,marginal_c,"
           "increment_b,bound_b,increment_c,bound_c\n";
    for (const auto& r : rows) {
        out << format_full(r.t1) << ',' << format_full(r.t2) << ','
            << format_full(r.joint_survival) << ','
            << (r.joint_density ? format_full(*r.joint_density) : "") << ','
            << format_full(r.marginal_b) << ',' << format_full(r.marginal_c) << ','
            << format_full(r.increment_b) << ',' << format_full(r.bound_b) << ','
            << format_full(r.increment_c) << ',' << format_full(r.bound_c) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json to_json(const std::vector<CurveRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        nlohmann::ordered_json j = {{"t1", r.t1},
                                    {"t2", r.t2},
                                    {"joint_survival", r.joint_survival},
                                    {"joint_density", nullptr},
                                    {"marginal_b", r.marginal_b},
                                    {"marginal_c", r.marginal_c},
                                    {"increment_b", r.increment_b},
                                    {"bound_b", r.bound_b},
                                    {"increment_c", r.increment_c},
                                    {"bound_c", r.bound_c}};
        if (r.joint_density) j["joint_density"] = *r.joint_density;
        arr.push_back(j);
    }
    return arr;
}

inline std::string sweep_csv(const std::string& parameter, const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "parameter,value,premium_summed,premium_condensed,protection,annuity,"
           "accrual_summed,accrual_condensed\n";
    for (const auto& r : rows) {
        out << parameter << ',' << format_full(r.value) << ',' << format_full(r.premium_summed)
            << ',' << format_full(r.premium_condensed) << ',' << format_full(r.protection) << ','
            << format_full(r.annuity) << ',' << format_full(r.accrual_summed) << ','
            << format_full(r.accrual_condensed) << '\n';
    }
    return out.str();
}

inline nlohmann::ordered_json to_json(const std::string& parameter,
                                      const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rows)
        arr.push_back({{"parameter", parameter},
                       {"value", r.value},
                       {"premium_summed", r.premium_summed},
                       {"premium_condensed", r.premium_condensed},
                       {"protection", r.protection},
                       {"annuity", r.annuity},
                       {"accrual_summed", r.accrual_summed},
                       {"accrual_condensed", r.accrual_condensed}});
    return arr;
}

}  // namespace contagion
