#pragma once

// Tabular products behind the curves and sweep commands. All numbers come
// from the library calls tested elsewhere; nothing here computes.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "contagion/closed_form.hpp"
#include "contagion/pricing.hpp"

namespace contagion {

struct GridSpec {
    double t_min = 0.0;
    double t_max = 5.0;
    int steps = 11;  // points per axis
};

struct CurveRow {
    double t1;
    double t2;
    double joint_survival;
    std::optional<double> joint_density;  // empty on diagonal rows
    double marginal_b;
    double marginal_c;
    double increment_b;
    double bound_b;
    double increment_c;
    double bound_c;
};

inline std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace: steps must be >= 1");
    std::vector<double> out;
    out.reserve(steps);
    if (steps == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < steps; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / (steps - 1));
    return out;
}

inline std::vector<CurveRow> curve_table(const SymmetricCompetitorParams& p,
                                         const GridSpec& grid) {
    require_valid(p);
    if (grid.steps < 1) throw std::invalid_argument("curves: grid must have at least one point");
    if (grid.t_min < 0.0 || grid.t_max < grid.t_min)
        throw std::invalid_argument("curves: need 0 <= t_min <= t_max");
    const auto ts = linspace(grid.t_min, grid.t_max, grid.steps);
    std::vector<CurveRow> rows;
    rows.reserve(ts.size() * ts.size());
    for (double t1 : ts) {
        const auto inc_b = survival_increment_and_bound(p, Firm::B, t1);
        for (double t2 : ts) {
            const auto inc_c = survival_increment_and_bound(p, Firm::C, t2);
            CurveRow row;
            row.t1 = t1;
            row.t2 = t2;
            row.joint_survival = joint_survival(p, {t1, t2});
            const DensityValue f = joint_density(p, {t1, t2});
            row.joint_density = f.on_diagonal ? std::nullopt : std::optional<double>(f.value);
            row.marginal_b = marginal_survival(p, Firm::B, t1);
            row.marginal_c = marginal_survival(p, Firm::C, t2);
            row.increment_b = inc_b.increment;
            row.bound_b = inc_b.bound;
            row.increment_c = inc_c.increment;
            row.bound_c = inc_c.bound;
            rows.push_back(row);
        }
    }
    return rows;
}

struct SweepSpec {
    std::string parameter;  // one of b0, c0, b, c, r, T, dT, delta
    double from = 0.0;
    double to = 0.0;
    int steps = 1;
};

struct SweepRow {
    double value;
    double premium_summed;
    double premium_condensed;
    double protection;
    double annuity;
    double accrual_summed;
    double accrual_condensed;
};

inline std::vector<SweepRow> sweep_table(const SymmetricCompetitorParams& base_params,
                                         const SwapSchedule& base_sched, const SweepSpec& spec) {
    static const char* known[] = {"b0", "c0", "b", "c", "r", "T", "dT", "delta"};
    bool ok = false;
    for (const char* k : known) ok = ok || spec.parameter == k;
    if (!ok) throw std::invalid_argument("sweep: unknown parameter '" + spec.parameter + "'");
    if (spec.steps < 1) throw std::invalid_argument("sweep: steps must be >= 1");

    std::vector<SweepRow> rows;
    rows.reserve(spec.steps);
    for (double v : linspace(spec.from, spec.to, spec.steps)) {
        SymmetricCompetitorParams p = base_params;
        double maturity = base_sched.maturity;
        double interval = base_sched.interval;
        double lag = base_sched.settlement_lag;
        double rate = base_sched.rate;
        if (spec.parameter == "b0") p.base_b = v;
        else if (spec.parameter == "c0") p.base_c = v;
        else if (spec.parameter == "b") p.atten_b = v;
        else if (spec.parameter == "c") p.atten_c = v;
        else if (spec.parameter == "r") rate = v;
        else if (spec.parameter == "T") maturity = v;
        else if (spec.parameter == "dT") interval = v;
        else if (spec.parameter == "delta") lag = v;
        require_valid(p);
        const SwapSchedule s = build_schedule(maturity, interval, lag, rate);
        const PricingBreakdown summed = swap_premium(p, s, AccrualMode::SummedPerPeriod);
        const PricingBreakdown condensed = swap_premium(p, s, AccrualMode::Condensed);
        rows.push_back({v, summed.premium, condensed.premium, summed.protection, summed.annuity,
                        summed.accrual_summed, summed.accrual_condensed});
    }
    return rows;
}

}  // namespace contagion
