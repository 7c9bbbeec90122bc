#pragma once

// Deterministic integration oracle for the closed forms: adaptive
// Gauss-Kronrod (G7, K15) with panels refined worst-error-first, quadrant
// integrals of the joint density with certified tail truncation, the pricing
// legs as 1-D integrals (the inner lifetime integral has a closed
// antiderivative), and a mixed finite-difference check of the density.
//
// Integration regions are always split along the diagonal t1 = t2, where the
// density jumps; every panel then sees a smooth integrand and the Kronrod
// error estimate is honest.

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <vector>

#include "contagion/closed_form.hpp"
#include "contagion/pricing.hpp"

namespace contagion {

struct QuadConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    double tail_epsilon = 1e-12;   // admissible truncated tail mass
    int max_subdivisions = 100000;
};

inline void require_valid(const QuadConfig& c) {
    if (!(c.abs_tol > 0.0) || !(c.rel_tol > 0.0) || !(c.tail_epsilon > 0.0))
        throw std::invalid_argument("quad config: tolerances must be > 0");
    if (c.max_subdivisions < 100)
        throw std::invalid_argument("quad config: max_subdivisions must be >= 100");
}

/// Thrown when the subdivision budget runs out; carries the best estimate
/// and its error bound so callers can still inspect the result.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double estimate, double error_bound)
        : std::runtime_error(what), estimate_(estimate), error_bound_(error_bound) {}
    double estimate() const { return estimate_; }
    double error_bound() const { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

namespace detail {

// Kronrod 15-point nodes on [0, 1] by symmetry (xgk) with weights wgk; the
// embedded Gauss 7-point rule uses the odd-indexed nodes with weights wg.
inline constexpr double kGK15Nodes[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr double kGK15Weights[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr double kG7Weights[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <class F>
void gk15(const F& f, double a, double b, double& kronrod, double& err) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double dx = h * kGK15Nodes[j];
        const double fsum = j == 7 ? f(c) : f(c - dx) + f(c + dx);
        resk += kGK15Weights[j] * fsum;
        if (j % 2 == 1) resg += kG7Weights[j / 2] * fsum;
    }
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

template <class F>
double integrate_adaptive(const F& f, double a, double b, const QuadConfig& cfg) {
    if (!(b > a)) return 0.0;
    Panel root{a, b, 0.0, 0.0};
    gk15(f, a, b, root.value, root.err);
    std::priority_queue<Panel> panels;
    panels.push(root);
    double total = root.value, total_err = root.err;
    int splits = 0;
    while (total_err > std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total))) {
        if (++splits > cfg.max_subdivisions)
            throw QuadratureError("quadrature: subdivision budget exhausted", total, total_err);
        const Panel worst = panels.top();
        panels.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left{worst.a, mid, 0.0, 0.0}, right{mid, worst.b, 0.0, 0.0};
        gk15(f, left.a, left.b, left.value, left.err);
        gk15(f, right.a, right.b, right.value, right.err);
        total += left.value + right.value - worst.value;
        total_err += left.err + right.err - worst.err;
        panels.push(left);
        panels.push(right);
    }
    return total;
}

// Upper bound on the density mass outside [m,inf) x [k,inf):
// f <= base_b*base_c*(1 + K(t1+t2)) e^{-base_b t1 - base_c t2} with
// K = max(atten), which integrates to the expression below.
inline double density_tail_mass(const SymmetricCompetitorParams& p, double m, double k) {
    const double kk = std::max(p.atten_b, p.atten_c);
    return std::exp(-p.base_b * m - p.base_c * k) *
           (1.0 + kk * (m + k + 1.0 / p.base_b + 1.0 / p.base_c));
}

}  // namespace detail

/// Cutoff beyond which the density mass outside [t1,cut] x [t2,cut] is
/// certified below tail_epsilon.
inline double density_tail_cutoff(const SymmetricCompetitorParams& p, EvaluationPoint q,
                                  const QuadConfig& cfg) {
    const double step = 1.0 / std::min(p.base_b, p.base_c);  // one envelope e-folding
    double cut = std::max({q.t1, q.t2, 1.0});
    for (int i = 0; i < 100000; ++i) {
        if (detail::density_tail_mass(p, cut, q.t2) + detail::density_tail_mass(p, q.t1, cut) <
            cfg.tail_epsilon)
            return cut;
        cut += step;
    }
    throw std::runtime_error("density_tail_cutoff: cutoff search failed");
}

/// Integral of the joint density over the rectangle [u0,u1] x [v0,v1]
/// (first coordinate is the tau_B argument), split along the diagonal.
inline double integrate_density_rect(const SymmetricCompetitorParams& p, double u0, double u1,
                                     double v0, double v1, const QuadConfig& cfg) {
    require_valid(cfg);
    if (u0 < 0.0 || v0 < 0.0) throw std::invalid_argument("integrate_density_rect: negative region");
    if (!(u1 > u0) || !(v1 > v0)) return 0.0;

    // Budget: four outer passes at abs_tol/4 each would overshoot, so each
    // outer pass gets abs_tol/8 and the inner integrals get the remaining
    // half spread over the outer length (inner error integrates up).
    QuadConfig outer_cfg = cfg;
    outer_cfg.abs_tol = 0.125 * cfg.abs_tol;
    QuadConfig inner = cfg;
    inner.abs_tol = 0.5 * cfg.abs_tol / std::max(1.0, std::max(u1 - u0, v1 - v0));
    double total = 0.0;

    // Part with u < v: for each u, v runs from max(v0, u) to v1. The inner
    // lower limit kinks at u = v0, so the outer range splits there.
    const double u_hi = std::min(u1, v1);
    if (u_hi > u0) {
        auto outer = [&](double u) {
            const double lo = std::max(v0, u);
            if (lo >= v1) return 0.0;
            return detail::integrate_adaptive(
                [&](double v) { return detail::joint_density_t1_le_t2(p, u, v); }, lo, v1, inner);
        };
        const double split = std::clamp(v0, u0, u_hi);
        total += detail::integrate_adaptive(outer, u0, split, outer_cfg);
        total += detail::integrate_adaptive(outer, split, u_hi, outer_cfg);
    }

    // Part with u >= v: for each v, u runs from max(u0, v) to u1; outer range
    // splits at v = u0.
    const double v_hi = std::min(v1, u1);
    if (v_hi > v0) {
        auto outer = [&](double v) {
            const double lo = std::max(u0, v);
            if (lo >= u1) return 0.0;
            return detail::integrate_adaptive(
                [&](double u) { return detail::joint_density_t2_lt_t1(p, u, v); }, lo, u1, inner);
        };
        const double split = std::clamp(u0, v0, v_hi);
        total += detail::integrate_adaptive(outer, v0, split, outer_cfg);
        total += detail::integrate_adaptive(outer, split, v_hi, outer_cfg);
    }
    return total;
}

/// P(tau_B > t1, tau_C > t2) recovered by integrating the density over the
/// upper-right quadrant. Independent check on the closed-form surface.
inline double survival_from_density(const SymmetricCompetitorParams& p, EvaluationPoint q,
                                    const QuadConfig& cfg = {}) {
    require_valid(p);
    detail::require_point(q);
    const double cut = density_tail_cutoff(p, q, cfg);
    return integrate_density_rect(p, q.t1, cut, q.t2, cut, cfg);
}

/// Integral of the density over lifetimes t1 in [lower, inf) at fixed
/// reference default time t2, for lower >= t2 (closed antiderivative of the
/// linear-times-exponential integrand):
///   base_c * e^{-base_c t2} * e^{-base_b lower} * (1 + atten_b (lower - t2)).
inline double density_lifetime_tail(const SymmetricCompetitorParams& p, double t2, double lower) {
    if (lower < t2) throw std::invalid_argument("density_lifetime_tail: lower must be >= t2");
    return p.base_c * std::exp(-p.base_c * t2) * std::exp(-p.base_b * lower) *
           (1.0 + p.atten_b * (lower - t2));
}

struct LegIntegrals {
    double protection;
    std::vector<double> accrual_terms;  // one per payment period
};

/// Pricing legs by quadrature over the reference default time; the inner
/// lifetime integral is analytic (density_lifetime_tail), reducing each leg
/// to a 1-D integral.
inline LegIntegrals leg_integrals(const SymmetricCompetitorParams& p, const SwapSchedule& s,
                                  const QuadConfig& cfg = {}) {
    require_valid(p);
    require_valid(cfg);
    LegIntegrals out;
    out.protection = detail::integrate_adaptive(
        [&](double t2) {
            return std::exp(-s.rate * (t2 + s.settlement_lag)) *
                   density_lifetime_tail(p, t2, t2 + s.settlement_lag);
        },
        0.0, s.maturity, cfg);
    out.accrual_terms.reserve(s.n_payments);
    for (int i = 1; i <= s.n_payments; ++i) {
        const double t_prev = (i - 1) * s.interval;
        const double t_cur = s.payment_dates[i - 1];
        out.accrual_terms.push_back(detail::integrate_adaptive(
            [&](double t2) {
                return std::exp(-s.rate * t2) * ((t2 - t_prev) / s.interval) *
                       density_lifetime_tail(p, t2, t2);
            },
            t_prev, t_cur, cfg));
    }
    return out;
}

/// Central four-point mixed difference of the joint survival surface;
/// approximates the density to O(h^2). The stencil must not straddle the
/// diagonal.
inline double mixed_partial(const SymmetricCompetitorParams& p, EvaluationPoint q, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("mixed_partial: h must be > 0");
    if (std::abs(q.t1 - q.t2) < 2.0 * h)
        throw std::invalid_argument("mixed_partial: point closer than 2h to the diagonal");
    const double pp = joint_survival(p, {q.t1 + h, q.t2 + h});
    const double pm = joint_survival(p, {q.t1 + h, q.t2 - h});
    const double mp = joint_survival(p, {q.t1 - h, q.t2 + h});
    const double mm = joint_survival(p, {q.t1 - h, q.t2 - h});
    return (pp - pm - mp + mm) / (4.0 * h * h);
}

}  // namespace contagion
