#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "modfix/iterate.hpp"

namespace modfix {

/// Post-hoc diagnostics over recorded traces. Everything here is a pure
/// reader of an immutable trace, so one run can feed many analyses without
/// re-execution.

struct FejerResult {
    std::size_t violations = 0;  // steps with ρ(f_{n+1}-w) > ρ(f_n-w) + 1e-12
    double max_slack = 0.0;      // max over steps of ρ(f_{n+1}-w) - ρ(f_n-w)
};

/// Checks the monotone chain ρ(f_{n+1}-w) ≤ ρ(f_n-w) at every step.
FejerResult fejer_check(const IterationTrace& trace, const FnVec& w, const ModularFn& rho,
                        const MeasureGrid& grid);

/// The recorded self-residuals ρ(f_n - T f_n), one per step.
std::vector<double> residual_series(const IterationTrace& trace);

struct DistSeries {
    std::vector<double> values;  // dist(f_n, fixed_points) per step
    bool nonincreasing = true;   // within absolute slack 1e-12
};

DistSeries dist_series(const IterationTrace& trace, const std::vector<FnVec>& fixed_points,
                       const ModularFn& rho, const MeasureGrid& grid);

struct DiagnosticsReport {
    std::optional<FejerResult> fejer;  // present only when fixed points were supplied
    double final_self_residual = 0.0;  // last recorded ρ(f_n - T f_n)
    std::optional<double> final_dist_to_fps;  // dist of the final iterate f_{N+1}
    std::optional<double> contraction;        // vs the first fixed point; absent if undefined
    std::size_t iterations = 0;
    StopReason stop_reason = StopReason::max_iter;
};

DiagnosticsReport diagnostics(const IterationTrace& trace, const ModularFn& rho,
                              const MeasureGrid& grid,
                              const std::vector<FnVec>& fixed_points = {});

struct CompareSpec {
    std::string name;  // defaults to the scheme kind when empty
    SchemeSpec scheme;
    StepSequence alpha;
};

struct CompareRow {
    std::string name;
    std::size_t iterations = 0;
    StopReason stop_reason = StopReason::max_iter;
    std::optional<double> contraction;
    double final_self_residual = 0.0;
    std::optional<double> final_to_w;
    std::optional<std::string> error;  // run failure for this row only
};

/// Runs every spec under the identical stop rule and returns one row per
/// spec, sorted by iterations ascending with ties broken by name. A row
/// whose run fails carries the error message; remaining rows still run.
/// Rows are produced in input order before sorting, so identical inputs
/// yield identical tables.
std::vector<CompareRow> compare_schemes(const std::vector<CompareSpec>& specs,
                                        const MappingSpec& T, const FnVec& f1,
                                        const StopRule& stop, const ModularFn& rho,
                                        const MeasureGrid& grid);

}  // namespace modfix
