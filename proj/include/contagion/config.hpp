#pragma once

// Run configuration: one JSON document covering model parameters, swap
// schedule, Monte Carlo controls, quadrature tolerances, and output routing.
// Every field can also be overridden by a CLI flag.

#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "contagion/model.hpp"
#include "contagion/pricing.hpp"
#include "contagion/quadrature.hpp"

namespace contagion {

struct McSettings {
    std::uint64_t paths = 1000000;
    std::uint64_t seed = 42;
    std::uint32_t stream = 0;
    int threads = 0;  // 0 = hardware concurrency
};

struct OutputSettings {
    std::string format = "csv";  // csv | json
    std::string path = "-";      // '-' = stdout
};

struct RunConfig {
    bool symmetric = true;
    SymmetricCompetitorParams sym{0.1, 0.2, 0.05, 0.1};
    ContagionParams general{0.1, 0.2, -0.05, -0.1, 0.05, 0.1};
    double maturity = 5.0;
    double interval = 0.25;
    double settlement_lag = 0.1;
    double rate = 0.05;
    McSettings mc;
    QuadConfig quad;
    OutputSettings output;

    SwapSchedule schedule() const {
        return build_schedule(maturity, interval, settlement_lag, rate);
    }

    SymmetricCompetitorParams symmetric_params() const {
        if (!symmetric)
            throw std::invalid_argument(
                "this command needs symmetric competitor parameters {b0,c0,b,c}; general "
                "parameters are accepted by `simulate` only");
        return sym;
    }

    ContagionParams general_params() const { return symmetric ? sym.general() : general; }
};

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig cfg;
    if (j.contains("model")) {
        const auto& m = j.at("model");
        if (m.contains("b1") || m.contains("c1") || m.contains("b2") || m.contains("c2")) {
            cfg.symmetric = false;
            cfg.general = {m.value("b0", cfg.general.base_b), m.value("c0", cfg.general.base_c),
                           m.value("b1", 0.0),                m.value("c1", 0.0),
                           m.value("b2", 0.0),                m.value("c2", 0.0)};
        } else {
            cfg.sym = {m.value("b0", cfg.sym.base_b), m.value("c0", cfg.sym.base_c),
                       m.value("b", cfg.sym.atten_b), m.value("c", cfg.sym.atten_c)};
        }
    }
    if (j.contains("schedule")) {
        const auto& s = j.at("schedule");
        cfg.maturity = s.value("maturity", cfg.maturity);
        cfg.interval = s.value("interval", cfg.interval);
        cfg.settlement_lag = s.value("settlement_lag", cfg.settlement_lag);
        cfg.rate = s.value("rate", cfg.rate);
    }
    if (j.contains("mc")) {
        const auto& m = j.at("mc");
        cfg.mc.paths = m.value("paths", cfg.mc.paths);
        cfg.mc.seed = m.value("seed", cfg.mc.seed);
        cfg.mc.stream = m.value("stream", cfg.mc.stream);
        cfg.mc.threads = m.value("threads", cfg.mc.threads);
    }
    if (j.contains("quad")) {
        const auto& q = j.at("quad");
        cfg.quad.abs_tol = q.value("abs_tol", cfg.quad.abs_tol);
        cfg.quad.rel_tol = q.value("rel_tol", cfg.quad.rel_tol);
        cfg.quad.tail_epsilon = q.value("tail_epsilon", cfg.quad.tail_epsilon);
        cfg.quad.max_subdivisions = q.value("max_subdivisions", cfg.quad.max_subdivisions);
    }
    if (j.contains("output")) {
        const auto& o = j.at("output");
        cfg.output.format = o.value("format", cfg.output.format);
        cfg.output.path = o.value("path", cfg.output.path);
    }
    return cfg;
}

/// Validates everything that does not depend on the command; throws
/// invalid_argument naming the violations.
inline void check_config(const RunConfig& cfg) {
    if (cfg.symmetric)
        require_valid(cfg.sym);
    else
        require_valid(cfg.general);
    build_schedule(cfg.maturity, cfg.interval, cfg.settlement_lag, cfg.rate);  // throws if bad
    require_valid(cfg.quad);
    if (cfg.mc.paths < 1) throw std::invalid_argument("mc.paths must be >= 1");
    if (cfg.mc.threads < 0) throw std::invalid_argument("mc.threads must be >= 0");
    if (cfg.output.format != "csv" && cfg.output.format != "json")
        throw std::invalid_argument("output.format must be 'csv' or 'json'");
}

/// JSON Schema for the config document (served by --print-schema).
inline std::string config_schema() {
    static const char* schema = R"({
  "$schema": "http://json-schema.org/draft-07/schema#",
  "title": "contagion run configuration",
  "type": "object",
  "properties": {
    "model": {
      "description": "Symmetric competitor parameters {b0,c0,b,c}, or general parameters {b0,c0,b1,c1,b2,c2} (simulate only). b0/c0 are the base intensities of the protection seller B and reference C; b/c are the competitor attenuation rates (jump -b fading at speed b).",
      "type": "object",
      "properties": {
        "b0": {"type": "number", "exclusiveMinimum": 0},
        "c0": {"type": "number", "exclusiveMinimum": 0},
        "b": {"type": "number", "minimum": 0},
        "c": {"type": "number", "minimum": 0},
        "b1": {"type": "number"},
        "c1": {"type": "number"},
        "b2": {"type": "number", "minimum": 0},
        "c2": {"type": "number", "minimum": 0}
      }
    },
    "schedule": {
      "type": "object",
      "properties": {
        "maturity": {"type": "number", "exclusiveMinimum": 0},
        "interval": {"type": "number", "exclusiveMinimum": 0, "description": "maturity must be an integer multiple"},
        "settlement_lag": {"type": "number", "minimum": 0},
        "rate": {"type": "number", "minimum": 0}
      }
    },
    "mc": {
      "type": "object",
      "properties": {
        "paths": {"type": "integer", "minimum": 1},
        "seed": {"type": "integer", "minimum": 0},
        "stream": {"type": "integer", "minimum": 0},
        "threads": {"type": "integer", "minimum": 0, "description": "0 = hardware concurrency; estimates are bitwise independent of this"}
      }
    },
    "quad": {
      "type": "object",
      "properties": {
        "abs_tol": {"type": "number", "exclusiveMinimum": 0},
        "rel_tol": {"type": "number", "exclusiveMinimum": 0},
        "tail_epsilon": {"type": "number", "exclusiveMinimum": 0},
        "max_subdivisions": {"type": "integer", "minimum": 100}
      }
    },
    "output": {
      "type": "object",
      "properties": {
        "format": {"type": "string", "enum": ["csv", "json"]},
        "path": {"type": "string", "description": "'-' writes to stdout"}
      }
    }
  }
})";
    return schema;
}

}  // namespace contagion
