#pragma once

// Two-firm dependent-default model with attenuating contagion jumps.
//
// Firm B (the protection seller) and firm C (the reference entity) carry
// intensities that are constant until the partner defaults and then jump by
// `jump`, with the jump fading hyperbolically in the lag:
//
//     lambda_B(t) = base_b + 1{tau_C <= t} * jump_b / (atten_b*(t - tau_C) + 1)
//
// and symmetrically for C. A negative jump models competitors (the survivor
// benefits), a positive jump copartners.

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace contagion {

enum class Firm { B, C };

inline const char* to_string(Firm f) { return f == Firm::B ? "B" : "C"; }

/// Full six-parameter intensity specification (rates per year).
struct ContagionParams {
    double base_b;   // pre-default intensity of B
    double base_c;   // pre-default intensity of C
    double jump_b;   // shift of B's intensity at C's default
    double jump_c;   // shift of C's intensity at B's default
    double atten_b;  // fade-out speed of B's shift
    double atten_c;  // fade-out speed of C's shift
};

/// Competitor special case: jump = -atten for both firms, so the intensity
/// drops by `atten/(atten*lag + 1)` after the partner defaults. atten = 0 is
/// the independent limit.
struct SymmetricCompetitorParams {
    double base_b;
    double base_c;
    double atten_b;
    double atten_c;

    ContagionParams general() const {
        return {base_b, base_c, -atten_b, -atten_c, atten_b, atten_c};
    }
};

struct ParamCheck {
    bool ok = true;
    std::vector<std::string> violations;

    void require(bool cond, const char* name) {
        if (!cond) {
            ok = false;
            violations.emplace_back(name);
        }
    }
};

/// Checks the admissibility constraints. base intensities must be strictly
/// positive, attenuation speeds nonnegative, and base + jump strictly
/// positive so the post-default intensity never hits zero.
inline ParamCheck validate(const ContagionParams& p) {
    ParamCheck r;
    r.require(p.base_b > 0.0, "base_b_positive");
    r.require(p.base_c > 0.0, "base_c_positive");
    r.require(p.atten_b >= 0.0, "atten_b_nonnegative");
    r.require(p.atten_c >= 0.0, "atten_c_nonnegative");
    r.require(p.base_b + p.jump_b > 0.0, "base_plus_jump_b_positive");
    r.require(p.base_c + p.jump_c > 0.0, "base_plus_jump_c_positive");
    return r;
}

inline ParamCheck validate(const SymmetricCompetitorParams& p) {
    ParamCheck r;
    r.require(p.base_b > 0.0, "base_b_positive");
    r.require(p.base_c > 0.0, "base_c_positive");
    r.require(p.atten_b >= 0.0, "atten_b_nonnegative");
    r.require(p.atten_c >= 0.0, "atten_c_nonnegative");
    r.require(p.atten_b < p.base_b, "atten_b_below_base_b");
    r.require(p.atten_c < p.base_c, "atten_c_below_base_c");
    return r;
}

inline void require_valid(const ContagionParams& p) {
    auto r = validate(p);
    if (!r.ok) {
        std::string msg = "invalid parameters:";
        for (const auto& v : r.violations) msg += " " + v;
        throw std::invalid_argument(msg);
    }
}

inline void require_valid(const SymmetricCompetitorParams& p) {
    auto r = validate(p);
    if (!r.ok) {
        std::string msg = "invalid parameters:";
        for (const auto& v : r.violations) msg += " " + v;
        throw std::invalid_argument(msg);
    }
}

/// Default times in years; +infinity means no default within the sampled
/// horizon.
struct DefaultTimePair {
    double tau_b;
    double tau_c;
};

/// Pointwise intensity of `firm` at time t, given the partner's default time
/// if it has one.
inline double intensity(const ContagionParams& p, Firm firm, double t,
                        std::optional<double> partner_default = std::nullopt) {
    if (t < 0.0) throw std::invalid_argument("intensity: t must be >= 0");
    if (partner_default && *partner_default < 0.0)
        throw std::invalid_argument("intensity: partner default time must be >= 0");
    const double base = firm == Firm::B ? p.base_b : p.base_c;
    if (!partner_default || *partner_default > t) return base;
    const double jump = firm == Firm::B ? p.jump_b : p.jump_c;
    const double atten = firm == Firm::B ? p.atten_b : p.atten_c;
    return base + jump / (atten * (t - *partner_default) + 1.0);
}

/// Integrated post-default intensity of the surviving firm over a lag s:
///   Lambda(s) = a0*s + (a1/a2)*log(a2*s + 1)   for a2 > 0,
///   Lambda(s) = (a0 + a1)*s                    for a2 = 0.
/// (a0, a1, a2) is the survivor's (base, jump, atten) triple. Strictly
/// increasing, Lambda(0) = 0.
inline double post_contagion_hazard(double a0, double a1, double a2, double s) {
    if (s < 0.0) throw std::invalid_argument("post_contagion_hazard: s must be >= 0");
    if (a2 > 0.0) return a0 * s + (a1 / a2) * std::log1p(a2 * s);
    return (a0 + a1) * s;
}

namespace detail {
constexpr double kHazardInvertTol = 1e-12;  // absolute, in hazard space
constexpr int kHazardInvertMaxIter = 200;
}  // namespace detail

/// Solves Lambda(s) = e for the unique nonnegative lag s (inverse-transform
/// sampling of the survivor's residual lifetime). Bracketed Newton with
/// bisection fallback; |Lambda(s) - e| <= 1e-12 on return.
inline double invert_post_contagion_hazard(double a0, double a1, double a2, double e) {
    if (e < 0.0) throw std::invalid_argument("invert_post_contagion_hazard: e must be >= 0");
    if (e == 0.0) return 0.0;
    if (a2 == 0.0) return e / (a0 + a1);
    if (a1 == 0.0) return e / a0;

    double hi = 1.0;
    while (post_contagion_hazard(a0, a1, a2, hi) < e) {
        hi *= 2.0;
        if (!std::isfinite(hi))
            throw std::runtime_error("invert_post_contagion_hazard: bracket expansion failed");
    }
    double lo = 0.0;
    // Lambda(s) <=> a0*s depending on the jump sign, so e/a0 starts on the
    // correct side for the competitor case and inside the bracket otherwise.
    double s = std::min(hi, e / a0);

    for (int it = 0; it < detail::kHazardInvertMaxIter; ++it) {
        const double g = post_contagion_hazard(a0, a1, a2, s) - e;
        if (std::abs(g) <= detail::kHazardInvertTol) return s;
        if (g > 0.0)
            hi = s;
        else
            lo = s;
        const double slope = a0 + a1 / (a2 * s + 1.0);
        double next = s - g / slope;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (next == s || hi - lo <= std::numeric_limits<double>::epsilon() * hi)
            return s;  // resolved to double precision
        s = next;
    }
    throw std::runtime_error("invert_post_contagion_hazard: no convergence");
}

}  // namespace contagion
