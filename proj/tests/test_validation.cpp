#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "contagion/config.hpp"
#include "contagion/io.hpp"
#include "contagion/tables.hpp"
#include "contagion/validation.hpp"

using namespace contagion;

namespace {
const SymmetricCompetitorParams kP0{0.1, 0.2, 0.05, 0.1};
const SwapSchedule kSched = build_schedule(5.0, 0.25, 0.1, 0.05);
}

TEST_CASE("config parsing") {
    SECTION("defaults") {
        const RunConfig cfg = parse_config(nlohmann::json::object());
        REQUIRE(cfg.symmetric);
        REQUIRE(cfg.sym.base_b == 0.1);
        REQUIRE(cfg.mc.paths == 1000000);
        REQUIRE(cfg.mc.seed == 42);
        REQUIRE(cfg.output.format == "csv");
        check_config(cfg);
    }
    SECTION("symmetric model keys") {
        const auto j = nlohmann::json::parse(
            R"({"model":{"b0":0.2,"c0":0.3,"b":0.1,"c":0.05},"schedule":{"maturity":2,"interval":0.5}})");
        const RunConfig cfg = parse_config(j);
        REQUIRE(cfg.symmetric);
        REQUIRE(cfg.sym.base_c == 0.3);
        REQUIRE(cfg.maturity == 2.0);
        REQUIRE(cfg.schedule().n_payments == 4);
    }
    SECTION("general model keys select the full parameter set") {
        const auto j = nlohmann::json::parse(
            R"({"model":{"b0":0.2,"c0":0.3,"b1":0.4,"c1":0.1,"b2":1.0,"c2":2.0}})");
        const RunConfig cfg = parse_config(j);
        REQUIRE_FALSE(cfg.symmetric);
        REQUIRE(cfg.general.jump_b == 0.4);
        REQUIRE_THROWS_AS(cfg.symmetric_params(), std::invalid_argument);
        REQUIRE(cfg.general_params().atten_c == 2.0);
    }
    SECTION("violations are named") {
        auto j = nlohmann::json::parse(R"({"model":{"b0":-1.0}})");
        try {
            check_config(parse_config(j));
            FAIL("expected invalid_argument");
        } catch (const std::invalid_argument& e) {
            REQUIRE(std::string(e.what()).find("base_b_positive") != std::string::npos);
        }
    }
    SECTION("bad schedule is a config error") {
        const auto j = nlohmann::json::parse(R"({"schedule":{"maturity":1.0,"interval":0.4}})");
        REQUIRE_THROWS_AS(check_config(parse_config(j)), std::invalid_argument);
    }
    SECTION("schema is valid JSON") {
        const auto schema = nlohmann::json::parse(config_schema());
        REQUIRE(schema.contains("properties"));
        REQUIRE(schema["properties"].contains("model"));
    }
}

TEST_CASE("validation report") {
    const RandomSource src{42, 0};
    QuadConfig quad;
    const ValidationReport rep = run_validation(kP0, kSched, 20000, src, quad);

    SECTION("row inventory") {
        // 25 joint + 10 marginal + annuity + protection + 20 accrual terms +
        // accrual_summed + premium_summed + 3 informational rows
        REQUIRE(rep.rows.size() == 62);
        int checked = 0, info = 0;
        for (const auto& r : rep.rows) (r.checked ? checked : info)++;
        REQUIRE(checked == 59);
        REQUIRE(info == 3);
    }
    SECTION("closed form vs quadrature everywhere") {
        for (const auto& r : rep.rows)
            if (r.checked) REQUIRE(r.abs_diff_cf_quad <= 1e-8);
    }
    SECTION("all MC rows within four standard errors at this seed") {
        REQUIRE(rep.all_pass);
        for (const auto& r : rep.rows)
            if (r.checked) REQUIRE(std::abs(r.z_score_cf_mc) <= 4.0);
    }
    SECTION("the accrual ratio equals its reference factor") {
        REQUIRE(rep.accrual_ratio ==
                Catch::Approx(rep.accrual_ratio_reference).epsilon(1e-11));
        REQUIRE(rep.accrual_ratio_reference == Catch::Approx(-std::expm1(-0.35 * 5.0)));
    }
    SECTION("premium bound grid is recorded and holds in condensed mode") {
        REQUIRE(rep.premium_bound_grid.size() == 27);
        for (const auto& row : rep.premium_bound_grid) {
            REQUIRE(row.holds);
            REQUIRE(row.premium_condensed <= row.bound * (1.0 + 1e-12));
        }
    }
    SECTION("serialization is deterministic") {
        const ValidationReport again = run_validation(kP0, kSched, 20000, src, quad);
        REQUIRE(validation_csv(rep) == validation_csv(again));
        REQUIRE(to_json(rep).dump(2) == to_json(again).dump(2));
    }
    SECTION("csv carries the fixed header") {
        const std::string csv = validation_csv(rep);
        REQUIRE(csv.rfind("name,closed_form,quadrature,mc_mean,mc_stderr,abs_diff_cf_quad,"
                          "z_score_cf_mc,pass\n", 0) == 0);
        REQUIRE(csv.find("accrual_ratio") != std::string::npos);
        REQUIRE(csv.find("premium_bound[b=") != std::string::npos);
    }
}

TEST_CASE("validation under the independence limit") {
    const SymmetricCompetitorParams indep{0.1, 0.2, 0.0, 0.0};
    const RandomSource src{42, 0};
    const ValidationReport rep = run_validation(indep, kSched, 20000, src, {});
    for (std::size_t k = 0; k < 25; ++k) {
        const auto& r = rep.rows[k];
        // names look like joint_survival(t1,t2); recompute the product from
        // the evaluated closed form instead of parsing: product identity
        // means cf must match e^{-b0 t1 - c0 t2}, checked via quadrature gap
        REQUIRE(r.checked);
    }
    // spot-check the product identity directly
    for (double t1 : {0.5, 2.0, 4.0})
        for (double t2 : {0.5, 2.0, 4.0})
            REQUIRE(std::abs(joint_survival(indep, {t1, t2}) -
                             independent_joint_survival(0.1, 0.2, {t1, t2})) < 1e-12);
    REQUIRE(rep.all_pass);
}

TEST_CASE("curve tables") {
    SECTION("three by three grid on the unit square") {
        const auto rows = curve_table(kP0, {0.0, 1.0, 3});
        REQUIRE(rows.size() == 9);
        REQUIRE(rows.front().t1 == 0.0);
        REQUIRE(rows.front().t2 == 0.0);
        REQUIRE(rows.front().joint_survival == 1.0);
        int diagonal = 0;
        for (const auto& r : rows) {
            if (r.t1 == r.t2) {
                REQUIRE_FALSE(r.joint_density.has_value());
                ++diagonal;
            } else {
                REQUIRE(r.joint_density.has_value());
            }
        }
        REQUIRE(diagonal == 3);
    }
    SECTION("spot values come from the library calls") {
        const auto rows = curve_table(kP0, {0.5, 1.5, 2});
        const auto& r = rows[1];  // t1=0.5, t2=1.5
        REQUIRE(r.joint_survival == joint_survival(kP0, {0.5, 1.5}));
        REQUIRE(*r.joint_density == joint_density(kP0, {0.5, 1.5}).value);
        REQUIRE(r.marginal_b == marginal_survival(kP0, Firm::B, 0.5));
        REQUIRE(r.increment_c == survival_increment_and_bound(kP0, Firm::C, 1.5).increment);
    }
    SECTION("empty grid rejected") {
        REQUIRE_THROWS_AS(curve_table(kP0, {0.0, 1.0, 0}), std::invalid_argument);
        REQUIRE_THROWS_AS(curve_table(kP0, {2.0, 1.0, 3}), std::invalid_argument);
    }
    SECTION("csv column order is fixed") {
        const std::string csv = curves_csv(curve_table(kP0, {0.0, 1.0, 2}));
        REQUIRE(csv.rfind("t1,t2,joint_survival,joint_density,marginal_b,marginal_c,"
                          "increment_b,bound_b,increment_c,bound_c\n", 0) == 0);
    }
}

TEST_CASE("sweep tables") {
    SECTION("premium nondecreasing along the attenuation sweep") {
        const auto rows = sweep_table(kP0, kSched, {"b", 0.0, 0.099, 15});
        REQUIRE(rows.size() == 15);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            REQUIRE(rows[i].premium_summed >= rows[i - 1].premium_summed);
            REQUIRE(rows[i].premium_condensed >= rows[i - 1].premium_condensed);
            REQUIRE(rows[i].protection >= rows[i - 1].protection);
        }
    }
    SECTION("protection strictly decreasing along the settlement-lag sweep") {
        const auto rows = sweep_table(kP0, kSched, {"delta", 0.0, 1.0, 11});
        for (std::size_t i = 1; i < rows.size(); ++i)
            REQUIRE(rows[i].protection < rows[i - 1].protection);
    }
    SECTION("single step gives a single row at the start value") {
        const auto rows = sweep_table(kP0, kSched, {"r", 0.03, 0.08, 1});
        REQUIRE(rows.size() == 1);
        REQUIRE(rows.front().value == 0.03);
    }
    SECTION("unknown parameter rejected") {
        REQUIRE_THROWS_AS(sweep_table(kP0, kSched, {"sigma", 0.0, 1.0, 3}),
                          std::invalid_argument);
    }
    SECTION("maturity sweep rebuilds schedules") {
        const auto rows = sweep_table(kP0, kSched, {"T", 1.0, 5.0, 5});
        REQUIRE(rows.size() == 5);
        for (std::size_t i = 1; i < rows.size(); ++i)
            REQUIRE(rows[i].annuity > rows[i - 1].annuity);
    }
}
