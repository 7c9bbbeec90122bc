#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "contagion/pricing.hpp"
#include "support/oracles.hpp"

using namespace contagion;

namespace {
const SymmetricCompetitorParams kP0{0.1, 0.2, 0.05, 0.1};
const SwapSchedule kSched = build_schedule(5.0, 0.25, 0.1, 0.05);
}

TEST_CASE("schedule construction") {
    SECTION("standard quarterly five-year schedule") {
        REQUIRE(kSched.n_payments == 20);
        REQUIRE(kSched.payment_dates.front() == Catch::Approx(0.25));
        REQUIRE(kSched.payment_dates.back() == Catch::Approx(5.0));
    }
    SECTION("non-integer ratio rejected with both values named") {
        try {
            build_schedule(1.0, 0.4, 0.0, 0.0);
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("1.0") != std::string::npos);
            REQUIRE(msg.find("0.4") != std::string::npos);
        }
    }
    SECTION("single payment") {
        const auto s = build_schedule(1.0, 1.0, 0.0, 0.0);
        REQUIRE(s.n_payments == 1);
        REQUIRE(s.payment_dates == std::vector<double>{1.0});
    }
    SECTION("domain checks") {
        REQUIRE_THROWS_AS(build_schedule(-1.0, 0.25, 0.0, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(build_schedule(1.0, 0.25, -0.1, 0.0), std::invalid_argument);
        REQUIRE_THROWS_AS(build_schedule(1.0, 0.25, 0.0, -0.01), std::invalid_argument);
    }
}

TEST_CASE("annuity factor") {
    SECTION("single payment is one discounted joint survival") {
        const auto s = build_schedule(1.0, 1.0, 0.0, 0.05);
        REQUIRE(annuity_factor(kP0, s) == Catch::Approx(std::exp(-0.35)).epsilon(1e-14));
    }
    SECTION("golden value for the standard schedule") {
        REQUIRE(annuity_factor(kP0, kSched) ==
                Catch::Approx(9.0354942715248965).epsilon(1e-14));
    }
    SECTION("summed and geometric forms agree to 1e-12") {
        std::mt19937_64 gen(42);
        for (int i = 0; i < 300; ++i) {
            const auto p = oracles::random_symmetric(gen);
            REQUIRE(std::abs(annuity_factor(p, kSched) - annuity_factor_closed(p, kSched)) <
                    1e-12);
        }
    }
    SECTION("vanishing rates limit approaches the payment count") {
        const SymmetricCompetitorParams p{1e-12, 1e-12, 0.0, 0.0};
        const auto s = build_schedule(5.0, 0.25, 0.0, 0.0);
        REQUIRE(annuity_factor(p, s) == Catch::Approx(20.0).epsilon(1e-9));
        REQUIRE(annuity_factor_closed(p, s) == Catch::Approx(20.0).epsilon(1e-9));
    }
}

TEST_CASE("protection leg") {
    SECTION("zero settlement lag") {
        auto s = kSched;
        s.settlement_lag = 0.0;
        const double beta = 0.35;
        REQUIRE(protection_leg(kP0, s) ==
                Catch::Approx(0.2 * -std::expm1(-beta * 5.0) / beta).epsilon(1e-14));
    }
    SECTION("short maturity kills the default window") {
        const auto s = build_schedule(1e-9, 1e-9, 0.1, 0.05);
        REQUIRE(protection_leg(kP0, s) == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("golden value for the standard inputs") {
        REQUIRE(protection_leg(kP0, kSched) ==
                Catch::Approx(0.46742558793354991).epsilon(1e-14));
    }
    SECTION("nondecreasing in the attenuation rate") {
        double prev = -1.0;
        for (int k = 0; k <= 20; ++k) {
            SymmetricCompetitorParams p = kP0;
            p.atten_b = 0.0999 * k / 20.0;
            const double v = protection_leg(p, kSched);
            REQUIRE(v >= prev);
            prev = v;
        }
    }
    SECTION("strictly decreasing in the settlement lag") {
        double prev = 1e9;
        for (int k = 0; k <= 20; ++k) {
            auto s = kSched;
            s.settlement_lag = 0.05 * k;
            const double v = protection_leg(kP0, s);
            REQUIRE(v < prev);
            prev = v;
        }
    }
}

TEST_CASE("accrual terms and factors") {
    SECTION("first period form") {
        const double beta = 0.35;
        const double t1 = 0.25;
        const double expected = (0.2 / (beta * 0.25)) *
                                (-t1 * std::exp(-beta * t1) -
                                 (std::exp(-beta * t1) - 1.0) / beta);
        REQUIRE(accrual_term(kP0, kSched, 1) == Catch::Approx(expected).epsilon(1e-12));
    }
    SECTION("golden seventh term") {
        REQUIRE(accrual_term(kP0, kSched, 7) ==
                Catch::Approx(0.013953857420075881).epsilon(1e-13));
    }
    SECTION("index bounds") {
        REQUIRE_THROWS_AS(accrual_term(kP0, kSched, 0), std::out_of_range);
        REQUIRE_THROWS_AS(accrual_term(kP0, kSched, 21), std::out_of_range);
    }
    SECTION("accrued fraction stays bounded as the interval shrinks") {
        for (double dt : {0.25, 0.1, 0.05, 0.01, 0.002}) {
            const auto s = build_schedule(1.0, dt, 0.0, 0.05);
            REQUIRE(accrual_term(kP0, s, 1) / dt < kP0.base_c);
        }
    }
    SECTION("summed factor equals the term sum; single-period case collapses") {
        const auto s1 = build_schedule(0.25, 0.25, 0.1, 0.05);
        REQUIRE(accrual_factor(kP0, s1, AccrualMode::SummedPerPeriod) ==
                Catch::Approx(accrual_term(kP0, s1, 1)).epsilon(1e-15));
    }
    SECTION("golden summed and condensed factors, and their ratio") {
        const double summed = accrual_factor(kP0, kSched, AccrualMode::SummedPerPeriod);
        const double condensed = accrual_factor(kP0, kSched, AccrualMode::Condensed);
        REQUIRE(summed == Catch::Approx(0.23262241822776443).epsilon(1e-13));
        REQUIRE(condensed == Catch::Approx(0.28154815063474381).epsilon(1e-13));
        // the two modes differ by exactly 1 - e^{-beta T}
        REQUIRE(summed / condensed == Catch::Approx(-std::expm1(-0.35 * 5.0)).epsilon(1e-12));
    }
    SECTION("ratio identity holds across random inputs") {
        std::mt19937_64 gen(2024);
        for (int i = 0; i < 200; ++i) {
            const auto p = oracles::random_symmetric(gen);
            const double beta = beta_rate(p, kSched);
            const double ratio = accrual_factor(p, kSched, AccrualMode::SummedPerPeriod) /
                                 accrual_factor(p, kSched, AccrualMode::Condensed);
            REQUIRE(ratio == Catch::Approx(-std::expm1(-beta * kSched.maturity)).epsilon(1e-11));
        }
    }
}

TEST_CASE("swap premium") {
    SECTION("golden premiums in both accrual modes") {
        const auto summed = swap_premium(kP0, kSched, AccrualMode::SummedPerPeriod);
        const auto paper = swap_premium(kP0, kSched, AccrualMode::Condensed);
        REQUIRE(summed.premium == Catch::Approx(0.050433718475983511).epsilon(1e-13));
        REQUIRE(paper.premium == Catch::Approx(0.050168880504592913).epsilon(1e-13));
    }
    SECTION("balance identity by construction") {
        std::mt19937_64 gen(9);
        for (int i = 0; i < 200; ++i) {
            const auto p = oracles::random_symmetric(gen);
            for (auto mode : {AccrualMode::SummedPerPeriod, AccrualMode::Condensed}) {
                const auto b = swap_premium(p, kSched, mode);
                const double accr = mode == AccrualMode::SummedPerPeriod ? b.accrual_summed
                                                                         : b.accrual_condensed;
                REQUIRE(std::abs(b.premium * (b.annuity + accr) - b.protection) < 1e-12);
            }
        }
    }
    SECTION("all breakdown fields strictly positive") {
        std::mt19937_64 gen(13);
        for (int i = 0; i < 300; ++i) {
            const auto p = oracles::random_symmetric(gen);
            const auto b = swap_premium(p, kSched);
            REQUIRE(b.beta > 0.0);
            REQUIRE(b.annuity > 0.0);
            REQUIRE(b.protection > 0.0);
            REQUIRE(b.accrual_summed > 0.0);
            REQUIRE(b.accrual_condensed > 0.0);
            REQUIRE(b.premium > 0.0);
        }
    }
    SECTION("premium vanishes as the reference base intensity vanishes") {
        SymmetricCompetitorParams p = kP0;
        p.base_c = 1e-10;
        p.atten_c = 0.0;
        const auto b = swap_premium(p, kSched);
        REQUIRE(b.premium < 1e-9);
    }
    SECTION("premium nondecreasing in the attenuation rate, both modes") {
        for (auto mode : {AccrualMode::SummedPerPeriod, AccrualMode::Condensed}) {
            double prev = -1.0;
            for (int k = 0; k <= 20; ++k) {
                SymmetricCompetitorParams p = kP0;
                p.atten_b = 0.0999 * k / 20.0;
                const double v = swap_premium(p, kSched, mode).premium;
                REQUIRE(v >= prev);
                prev = v;
            }
        }
    }
    SECTION("annualized quote is premium over interval") {
        const auto b = swap_premium(kP0, kSched);
        REQUIRE(annualized_premium(b, kSched) == Catch::Approx(b.premium / 0.25));
    }
}

TEST_CASE("premium upper bound") {
    SECTION("kernel inequality: equality at zero, strict above") {
        REQUIRE(detail::accrual_kernel(0.0) == 0.0);
        REQUIRE(accrual_kernel_minorant(0.0) == 0.0);
        for (int i = 1; i <= 10000; ++i) {
            const double x = 50.0 * i / 10000.0;
            const double lhs = detail::accrual_kernel(x);
            const double rhs = accrual_kernel_minorant(x);
            REQUIRE(lhs >= rhs * (1.0 - 1e-15));
        }
    }
    SECTION("golden bound value and condensed-mode dominance") {
        const double bound = premium_upper_bound(kP0, kSched);
        REQUIRE(bound == Catch::Approx(0.050212812319771320).epsilon(1e-13));
        REQUIRE(swap_premium(kP0, kSched, AccrualMode::Condensed).premium <= bound);
    }
    SECTION("condensed-mode premium never exceeds the bound on random inputs") {
        std::mt19937_64 gen(31337);
        for (int i = 0; i < 300; ++i) {
            const auto p = oracles::random_symmetric(gen);
            const double premium = swap_premium(p, kSched, AccrualMode::Condensed).premium;
            REQUIRE(premium <= premium_upper_bound(p, kSched) * (1.0 + 1e-12));
        }
    }
}
