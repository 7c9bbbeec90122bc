#pragma once

// Monte Carlo oracle: exact-in-distribution sampling of the default-time
// pair under the full contagion intensities (no discretization), plus
// estimators with standard errors for every probability and pricing leg.
//
// Sampling is two-stage. Until the first default both intensities are
// constant, so the first default time is Exponential(base_b + base_c) and
// the defaulter is C with probability base_c / (base_b + base_c). Afterwards
// the survivor's intensity is a deterministic function of the lag, so its
// residual lifetime comes from inverting the post-contagion cumulative
// hazard at a unit exponential.
//
// Determinism: paths are keyed by index (see rng.hpp) and partial sums are
// accumulated per fixed-size chunk, then reduced in chunk order with
// compensated summation, so results are bitwise identical for any worker
// count.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "contagion/model.hpp"
#include "contagion/pricing.hpp"
#include "contagion/rng.hpp"

namespace contagion {

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    double ci_low = 0.0;   // mean - 3 * std_error
    double ci_high = 0.0;  // mean + 3 * std_error
};

namespace detail {

inline Estimate make_estimate(double mean, double std_error, std::uint64_t n) {
    return {mean, std_error, n, mean - 3.0 * std_error, mean + 3.0 * std_error};
}

inline Estimate bernoulli_estimate(double successes, std::uint64_t n) {
    const double p = successes / static_cast<double>(n);
    const double se = std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
    return make_estimate(p, se, n);
}

// Sample standard error of the mean from raw sum and sum of squares.
inline double stderr_from_sums(double sum, double sumsq, std::uint64_t n) {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double var = std::max(0.0, (sumsq - sum * sum / nn) / (nn - 1.0));
    return std::sqrt(var / nn);
}

constexpr std::uint64_t kChunkPaths = 8192;

// Runs fn(path_index, accumulators) for every path, chunk by chunk, and
// reduces the per-chunk sums in index order (Neumaier). Worker count only
// decides which thread computes which chunk, never the arithmetic.
template <class PathFn>
std::vector<double> accumulate_paths(std::uint64_t n_paths, std::size_t width, int threads,
                                     PathFn&& fn) {
    const std::uint64_t n_chunks = (n_paths + kChunkPaths - 1) / kChunkPaths;
    std::vector<std::vector<double>> partial(n_chunks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto work = [&] {
        std::vector<double> acc(width);
        for (;;) {
            const std::uint64_t chunk = next.fetch_add(1, std::memory_order_relaxed);
            if (chunk >= n_chunks || failed.load(std::memory_order_relaxed)) break;
            std::fill(acc.begin(), acc.end(), 0.0);
            const std::uint64_t lo = chunk * kChunkPaths;
            const std::uint64_t hi = std::min(n_paths, lo + kChunkPaths);
            try {
                for (std::uint64_t i = lo; i < hi; ++i) fn(i, std::span<double>(acc));
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
                break;
            }
            partial[chunk] = acc;
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    std::uint64_t workers = threads > 0 ? static_cast<std::uint64_t>(threads)
                                        : std::max(1u, hw);
    workers = std::min<std::uint64_t>(workers, n_chunks);
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failed) std::rethrow_exception(failure);

    std::vector<double> sum(width, 0.0), comp(width, 0.0);
    for (std::uint64_t c = 0; c < n_chunks; ++c) {
        for (std::size_t j = 0; j < width; ++j) {
            const double x = partial[c][j];
            const double t = sum[j] + x;
            comp[j] += std::abs(sum[j]) >= std::abs(x) ? (sum[j] - t) + x : (x - t) + sum[j];
            sum[j] = t;
        }
    }
    for (std::size_t j = 0; j < width; ++j) sum[j] += comp[j];
    return sum;
}

}  // namespace detail

/// One exact draw of (tau_B, tau_C). Any default beyond `horizon` is
/// reported as +infinity; callers must pass a horizon at or above the
/// largest time their payoff compares against (the leg estimators use
/// maturity + settlement_lag + one interval).
inline DefaultTimePair sample_default_times(const ContagionParams& p, double horizon,
                                            const RandomSource& src,
                                            std::uint64_t path_index = 0) {
    if (horizon <= 0.0) throw std::invalid_argument("sample_default_times: horizon must be > 0");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    PathRng rng(src, path_index);
    const double total = p.base_b + p.base_c;
    const double tau1 = rng.exponential() / total;
    if (tau1 > horizon) return {kInf, kInf};
    const bool c_first = rng.uniform() < p.base_c / total;
    const double e2 = rng.exponential();
    if (c_first) {
        const double s = invert_post_contagion_hazard(p.base_b, p.jump_b, p.atten_b, e2);
        const double tau_b = tau1 + s;
        return {tau_b > horizon ? kInf : tau_b, tau1};
    }
    const double s = invert_post_contagion_hazard(p.base_c, p.jump_c, p.atten_c, e2);
    const double tau_c = tau1 + s;
    return {tau1, tau_c > horizon ? kInf : tau_c};
}

/// Bernoulli estimates of P(tau_B > t1, tau_C > t2) at several points from
/// one common set of paths.
inline std::vector<Estimate> estimate_joint_survival_grid(
    const ContagionParams& p, const std::vector<EvaluationPoint>& points, std::uint64_t n,
    const RandomSource& src, int threads = 0) {
    require_valid(p);
    if (n < 1) throw std::invalid_argument("estimate_joint_survival_grid: n must be >= 1");
    double horizon = 1.0;
    for (const auto& q : points) {
        detail::require_point(q);
        horizon = std::max({horizon, q.t1, q.t2});
    }
    const auto sums = detail::accumulate_paths(
        n, points.size(), threads, [&](std::uint64_t i, std::span<double> acc) {
            const DefaultTimePair tau = sample_default_times(p, horizon, src, i);
            for (std::size_t k = 0; k < points.size(); ++k)
                if (tau.tau_b > points[k].t1 && tau.tau_c > points[k].t2) acc[k] += 1.0;
        });
    std::vector<Estimate> out;
    out.reserve(points.size());
    for (double s : sums) out.push_back(detail::bernoulli_estimate(s, n));
    return out;
}

inline Estimate estimate_joint_survival(const ContagionParams& p, EvaluationPoint q,
                                        std::uint64_t n, const RandomSource& src,
                                        int threads = 0) {
    return estimate_joint_survival_grid(p, {q}, n, src, threads).front();
}

/// All pricing estimators on common paths: the premium-leg annuity, the
/// protection leg, the accrued premium in total and per period, and the
/// premium as a ratio estimator with a delta-method standard error.
struct PricingEstimates {
    Estimate annuity;
    Estimate protection;
    Estimate accrual;
    Estimate premium;
    std::vector<Estimate> accrual_terms;
};

inline PricingEstimates estimate_pricing(const ContagionParams& p, const SwapSchedule& sched,
                                         std::uint64_t n, const RandomSource& src,
                                         int threads = 0) {
    require_valid(p);
    if (n < 1) throw std::invalid_argument("estimate_pricing: n must be >= 1");
    const std::size_t n_terms = static_cast<std::size_t>(sched.n_payments);
    const double horizon = sched.maturity + sched.settlement_lag + sched.interval;

    // One discount per date plus cumulative sums, so the annuity payoff is a
    // single lookup per path.
    std::vector<double> cum_disc(n_terms + 1, 0.0);
    for (std::size_t j = 0; j < n_terms; ++j)
        cum_disc[j + 1] = cum_disc[j] + std::exp(-sched.rate * sched.payment_dates[j]);

    // Layout: [ann, ann^2, prot, prot^2, acc, acc^2, den^2, prot*den,
    //          term_1, term_1^2, ..., term_n, term_n^2]
    const std::size_t width = 8 + 2 * n_terms;
    const auto& dates = sched.payment_dates;

    const auto sums = detail::accumulate_paths(
        n, width, threads, [&](std::uint64_t i, std::span<double> acc) {
            const DefaultTimePair tau = sample_default_times(p, horizon, src, i);
            const double first = std::min(tau.tau_b, tau.tau_c);

            std::size_t paid = static_cast<std::size_t>(
                std::min(static_cast<double>(n_terms),
                         std::max(0.0, std::floor(first / sched.interval))));
            while (paid < n_terms && dates[paid] < first) ++paid;
            while (paid > 0 && dates[paid - 1] >= first) --paid;
            const double ann = cum_disc[paid];

            double prot = 0.0;
            double accr = 0.0;
            std::size_t term = 0;
            if (tau.tau_c <= sched.maturity) {
                if (tau.tau_b > tau.tau_c + sched.settlement_lag)
                    prot = std::exp(-sched.rate * (tau.tau_c + sched.settlement_lag));
                if (tau.tau_b > tau.tau_c) {
                    const auto it = std::lower_bound(dates.begin(), dates.end(), tau.tau_c);
                    term = static_cast<std::size_t>(it - dates.begin()) + 1;  // 1-based
                    const double t_prev = (term - 1) * sched.interval;
                    accr = std::exp(-sched.rate * tau.tau_c) * (tau.tau_c - t_prev) /
                           sched.interval;
                }
            }

            const double den = ann + accr;
            acc[0] += ann;
            acc[1] += ann * ann;
            acc[2] += prot;
            acc[3] += prot * prot;
            acc[4] += accr;
            acc[5] += accr * accr;
            acc[6] += den * den;
            acc[7] += prot * den;
            if (term > 0) {
                acc[8 + 2 * (term - 1)] += accr;
                acc[9 + 2 * (term - 1)] += accr * accr;
            }
        });

    const double nn = static_cast<double>(n);
    PricingEstimates out;
    out.annuity = detail::make_estimate(sums[0] / nn, detail::stderr_from_sums(sums[0], sums[1], n), n);
    out.protection =
        detail::make_estimate(sums[2] / nn, detail::stderr_from_sums(sums[2], sums[3], n), n);
    out.accrual =
        detail::make_estimate(sums[4] / nn, detail::stderr_from_sums(sums[4], sums[5], n), n);
    out.accrual_terms.reserve(n_terms);
    for (std::size_t k = 0; k < n_terms; ++k) {
        const double s = sums[8 + 2 * k], s2 = sums[9 + 2 * k];
        out.accrual_terms.push_back(
            detail::make_estimate(s / nn, detail::stderr_from_sums(s, s2, n), n));
    }

    // Ratio estimator S = mean(prot) / mean(ann + acc); delta-method stderr
    // from the sample (co)variances of the per-path numerator and denominator.
    const double den_sum = sums[0] + sums[4];
    const double den_mean = den_sum / nn;
    if (!(den_mean > 0.0))
        throw std::runtime_error("estimate_pricing: degenerate premium denominator");
    const double ratio = out.protection.mean / den_mean;
    if (n >= 2) {
        const double var_p = std::max(0.0, (sums[3] - sums[2] * sums[2] / nn) / (nn - 1.0));
        const double var_d = std::max(0.0, (sums[6] - den_sum * den_sum / nn) / (nn - 1.0));
        const double cov_pd = (sums[7] - sums[2] * den_sum / nn) / (nn - 1.0);
        const double var_ratio = std::max(
            0.0, (var_p - 2.0 * ratio * cov_pd + ratio * ratio * var_d) / (den_mean * den_mean));
        out.premium = detail::make_estimate(ratio, std::sqrt(var_ratio / nn), n);
    } else {
        out.premium = detail::make_estimate(ratio, 0.0, n);
    }
    return out;
}

struct LegEstimates {
    Estimate annuity;
    Estimate protection;
    Estimate accrual;
};

inline LegEstimates estimate_legs(const ContagionParams& p, const SwapSchedule& sched,
                                  std::uint64_t n, const RandomSource& src, int threads = 0) {
    const auto full = estimate_pricing(p, sched, n, src, threads);
    return {full.annuity, full.protection, full.accrual};
}

inline Estimate estimate_premium(const ContagionParams& p, const SwapSchedule& sched,
                                 std::uint64_t n, const RandomSource& src, int threads = 0) {
    return estimate_pricing(p, sched, n, src, threads).premium;
}

// Symmetric-parameter conveniences.
inline DefaultTimePair sample_default_times(const SymmetricCompetitorParams& p, double horizon,
                                            const RandomSource& src,
                                            std::uint64_t path_index = 0) {
    return sample_default_times(p.general(), horizon, src, path_index);
}

inline Estimate estimate_joint_survival(const SymmetricCompetitorParams& p, EvaluationPoint q,
                                        std::uint64_t n, const RandomSource& src,
                                        int threads = 0) {
    return estimate_joint_survival(p.general(), q, n, src, threads);
}

inline PricingEstimates estimate_pricing(const SymmetricCompetitorParams& p,
                                         const SwapSchedule& sched, std::uint64_t n,
                                         const RandomSource& src, int threads = 0) {
    return estimate_pricing(p.general(), sched, n, src, threads);
}

}  // namespace contagion
