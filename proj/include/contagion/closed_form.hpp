#pragma once

// Closed-form joint and marginal default-time distributions for the
// symmetric competitor case.
//
// Everything reduces to one stable kernel: with s the gap between the two
// time arguments,
//
//   P(tau_B > t1, tau_C > t2) = exp(-base_b*t1 - base_c*t2) *
//       (1 + (atten/partner_base) * (exp(-partner_base*s) - 1 + partner_base*s))
//
// where (atten, partner_base) = (atten_c, base_b) on t1 <= t2 and
// (atten_b, base_c) on t2 < t1. The formulas extrapolate smoothly beyond any
// pricing maturity; values queried past the contract horizon are the same
// analytic surface, just outside the range the pricing section uses.

#include <cmath>
#include <stdexcept>

#include "contagion/model.hpp"

namespace contagion {

struct EvaluationPoint {
    double t1;  // tau_B argument, years
    double t2;  // tau_C argument, years
};

namespace detail {

// exp(-x) - 1 + x. The direct form cancels to O(x^2) for small x, so switch
// to the series below 1e-4 (next omitted term is < 1e-24 relative there).
inline double expm1_plus_x(double x) {
    if (std::abs(x) < 1e-4) {
        return x * x * (0.5 + x * (-1.0 / 6.0 + x * (1.0 / 24.0 + x * (-1.0 / 120.0))));
    }
    return std::expm1(-x) + x;
}

inline void require_point(const EvaluationPoint& p) {
    if (p.t1 < 0.0 || p.t2 < 0.0)
        throw std::invalid_argument("evaluation point must have nonnegative times");
}

// Branch of Eq-6 type valid on t1 <= t2, evaluated as written (no dispatch).
inline double joint_survival_t1_le_t2(const SymmetricCompetitorParams& p, double t1, double t2) {
    const double bracket = 1.0 + (p.atten_c / p.base_b) * expm1_plus_x(p.base_b * (t2 - t1));
    return std::exp(-p.base_b * t1 - p.base_c * t2) * bracket;
}

// Branch valid on t2 < t1.
inline double joint_survival_t2_lt_t1(const SymmetricCompetitorParams& p, double t1, double t2) {
    const double bracket = 1.0 + (p.atten_b / p.base_c) * expm1_plus_x(p.base_c * (t1 - t2));
    return std::exp(-p.base_b * t1 - p.base_c * t2) * bracket;
}

// Density branches; strictly positive under atten_b < base_b, atten_c < base_c.
inline double joint_density_t1_le_t2(const SymmetricCompetitorParams& p, double t1, double t2) {
    const double poly = (1.0 - p.atten_c / p.base_c) + p.atten_c * (t2 - t1);
    return p.base_b * p.base_c * poly * std::exp(-p.base_b * t1 - p.base_c * t2);
}

inline double joint_density_t2_lt_t1(const SymmetricCompetitorParams& p, double t1, double t2) {
    const double poly = (1.0 - p.atten_b / p.base_b) + p.atten_b * (t1 - t2);
    return p.base_b * p.base_c * poly * std::exp(-p.base_b * t1 - p.base_c * t2);
}

}  // namespace detail

/// P(tau_B > t1, tau_C > t2). Continuous across t1 = t2, in [0, 1].
inline double joint_survival(const SymmetricCompetitorParams& p, EvaluationPoint q) {
    detail::require_point(q);
    if (q.t1 <= q.t2) return detail::joint_survival_t1_le_t2(p, q.t1, q.t2);
    return detail::joint_survival_t2_lt_t1(p, q.t1, q.t2);
}

/// Joint density value with a diagonal marker. The density is discontinuous
/// across t1 = t2 whenever atten_c*base_b != atten_b*base_c; exactly on the
/// diagonal we return the t2 < t1 branch and set on_diagonal so integrators
/// can treat the point as one-sided.
struct DensityValue {
    double value;
    bool on_diagonal;
};

inline DensityValue joint_density(const SymmetricCompetitorParams& p, EvaluationPoint q) {
    detail::require_point(q);
    if (q.t1 < q.t2) return {detail::joint_density_t1_le_t2(p, q.t1, q.t2), false};
    return {detail::joint_density_t2_lt_t1(p, q.t1, q.t2), q.t1 == q.t2};
}

/// Single-firm survival probability; identical to joint_survival with the
/// partner argument at zero.
inline double marginal_survival(const SymmetricCompetitorParams& p, Firm firm, double t) {
    if (t < 0.0) throw std::invalid_argument("marginal_survival: t must be >= 0");
    if (firm == Firm::B)
        return std::exp(-p.base_b * t) *
               (1.0 + (p.atten_b / p.base_c) * detail::expm1_plus_x(p.base_c * t));
    return std::exp(-p.base_c * t) *
           (1.0 + (p.atten_c / p.base_b) * detail::expm1_plus_x(p.base_b * t));
}

/// The survival gain a firm earns from its competitor's possible default,
/// together with its quadratic envelope (for firm B):
///   increment = (atten_b/base_c) e^{-base_b t} (e^{-base_c t} - 1 + base_c t)
///   bound     = atten_b * base_c * t^2 / 2 * e^{-base_b t}
/// 0 <= increment <= bound always.
struct SurvivalIncrement {
    double increment;
    double bound;
};

inline SurvivalIncrement survival_increment_and_bound(const SymmetricCompetitorParams& p,
                                                      Firm firm, double t) {
    if (t < 0.0) throw std::invalid_argument("survival_increment_and_bound: t must be >= 0");
    const double own_base = firm == Firm::B ? p.base_b : p.base_c;
    const double partner_base = firm == Firm::B ? p.base_c : p.base_b;
    const double atten = firm == Firm::B ? p.atten_b : p.atten_c;
    const double damp = std::exp(-own_base * t);
    return {damp * (atten / partner_base) * detail::expm1_plus_x(partner_base * t),
            0.5 * atten * partner_base * t * t * damp};
}

/// Joint survival of two independent exponentials (the atten = 0 limit).
inline double independent_joint_survival(double base_b, double base_c, EvaluationPoint q) {
    if (base_b <= 0.0 || base_c <= 0.0)
        throw std::invalid_argument("independent_joint_survival: rates must be > 0");
    detail::require_point(q);
    return std::exp(-base_b * q.t1 - base_c * q.t2);
}

}  // namespace contagion
