#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modfix/grid.hpp"
#include "modfix/iterate.hpp"
#include "modfix/mapping.hpp"
#include "modfix/modular.hpp"
#include "modfix/trace_io.hpp"

namespace modfix {

/// Experiment configuration loaded from a JSON file. Validation errors name
/// the offending field path (e.g. "stop.tol: must be > 0"). Fields are
/// optional at load time; each command validates the ones it needs.
///
/// Schema sketch (a single number broadcasts across the grid wherever a
/// vector is expected):
///
///   {
///     "space":   "scalar" | {"points": [...], "weights": [...]},
///     "modular": {"kind": "absolute"}
///              | {"kind": "power", "p": 2}
///              | {"kind": "orlicz", "phi": "t*t", "convex": true,
///                 "delta2": false, "uuc1": false},
///     "domain":  {"lower": 1, "upper": 8},
///     "mapping": {"affine": {"a": 0.6667, "b": 0.3333}}
///              | {"expression": "(2*f+1)/3"}
///              | {"compose": [mapping, ...]},
///     "scheme":  {"kind": "khan", "alpha": 0.5, "beta": 0.5},
///     "schemes": [scheme, ...],            // compare only
///     "alpha_sweep": [0.25, 0.5, 0.75],    // compare only
///     "stop":    {"kind": "to-fixed-point" | "self-residual" | "step-residual",
///                 "tol": 1e-5, "max_iter": 1000, "w": 1},
///     "start":   4,
///     "f":       3,                        // norm only
///     "check":   {"class": "firm" | "nonexpansive" | "condition-i" |
///                          "convexity" | "monotone" | "delta2",
///                 "lambda": 0.333, "ell": "r/6", "fixed_points": [1],
///                 "count": 1000},
///     "output":  {"format": "table" | "csv", "path": "-"},
///     "seed":    12345
///   }
struct SchemeEntry {
    std::string name;  // optional label; defaults to the kind
    SchemeKind kind = SchemeKind::khan;
    StepSequence alpha = StepSequence::constant(0.5);
    std::optional<StepSequence> beta;
};

struct StopSpec {
    StopRule::Kind kind = StopRule::Kind::self_residual;
    double tol = 1e-5;
    std::size_t max_iter = 1000;
    std::optional<FnVec> w;

    StopRule build() const;
};

struct CheckSpec {
    std::string kind;  // firm | nonexpansive | condition-i | convexity | monotone | delta2
    std::optional<double> lambda;
    std::optional<std::string> ell;
    std::vector<FnVec> fixed_points;
    std::size_t count = 1000;
    bool check_ell_monotone = false;
};

struct OutputSpec {
    OutputFormat format = OutputFormat::table;
    std::string path = "-";  // "-" means standard output
};

struct ExperimentConfig {
    MeasureGrid grid = MeasureGrid::scalar();
    ModularFn modular = ModularFn::absolute();
    std::optional<DomainBox> domain;
    std::optional<MappingSpec> mapping;
    SchemeEntry scheme;
    std::vector<SchemeEntry> schemes;   // compare
    std::vector<double> alpha_sweep;    // compare
    std::optional<StopSpec> stop;
    std::optional<FnVec> start;
    std::optional<FnVec> norm_input;    // key "f"
    std::optional<CheckSpec> check;
    OutputSpec output;
    std::uint64_t seed = 0;
};

ExperimentConfig load_config_file(const std::string& path);
ExperimentConfig load_config_text(const std::string& text);

}  // namespace modfix
