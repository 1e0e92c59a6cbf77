#include "modfix/analysis.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace modfix {

namespace {
constexpr double kSlack = 1e-12;

void require_full_trace(const IterationTrace& trace) {
    if (trace.steps.empty()) {
        throw ParameterError("trace is empty");
    }
    if (!trace.stores_vectors) {
        throw ParameterError("diagnostic requires a full trace with stored iterates");
    }
}
}  // namespace

FejerResult fejer_check(const IterationTrace& trace, const FnVec& w, const ModularFn& rho,
                        const MeasureGrid& grid) {
    require_full_trace(trace);
    FejerResult result;
    result.max_slack = -std::numeric_limits<double>::infinity();
    for (const StepRecord& step : trace.steps) {
        const double before = eval_modular(rho, grid, sub(step.f_n, w));
        const double after = eval_modular(rho, grid, sub(step.f_next, w));
        const double slack = after - before;
        result.max_slack = std::max(result.max_slack, slack);
        if (slack > kSlack) {
            ++result.violations;
        }
    }
    return result;
}

std::vector<double> residual_series(const IterationTrace& trace) {
    if (trace.steps.empty()) {
        throw ParameterError("trace is empty");
    }
    std::vector<double> out;
    out.reserve(trace.steps.size());
    for (const StepRecord& step : trace.steps) {
        out.push_back(step.rho_self_residual);
    }
    return out;
}

DistSeries dist_series(const IterationTrace& trace, const std::vector<FnVec>& fixed_points,
                       const ModularFn& rho, const MeasureGrid& grid) {
    require_full_trace(trace);
    if (fixed_points.empty()) {
        throw ParameterError("dist_series requires a nonempty fixed-point set");
    }
    DistSeries series;
    series.values.reserve(trace.steps.size());
    for (const StepRecord& step : trace.steps) {
        series.values.push_back(rho_distance(rho, grid, step.f_n, fixed_points));
    }
    for (std::size_t i = 1; i < series.values.size(); ++i) {
        if (series.values[i] > series.values[i - 1] + kSlack) {
            series.nonincreasing = false;
            break;
        }
    }
    return series;
}

DiagnosticsReport diagnostics(const IterationTrace& trace, const ModularFn& rho,
                              const MeasureGrid& grid, const std::vector<FnVec>& fixed_points) {
    if (trace.steps.empty()) {
        throw ParameterError("trace is empty");
    }
    DiagnosticsReport report;
    report.iterations = trace.iterations();
    report.stop_reason = trace.stop_reason;
    report.final_self_residual = trace.steps.back().rho_self_residual;

    if (!fixed_points.empty() && trace.stores_vectors) {
        FejerResult fejer{};
        fejer.max_slack = -std::numeric_limits<double>::infinity();
        for (const FnVec& w : fixed_points) {
            const FejerResult one = fejer_check(trace, w, rho, grid);
            fejer.violations += one.violations;
            fejer.max_slack = std::max(fejer.max_slack, one.max_slack);
        }
        report.fejer = fejer;
        report.final_dist_to_fps = rho_distance(rho, grid, trace.final_iterate, fixed_points);
        try {
            report.contraction = contraction_factor(trace, fixed_points.front(), rho, grid);
        } catch (const Error&) {
            // short traces or exact starts have no meaningful factor
        }
    }
    return report;
}

std::vector<CompareRow> compare_schemes(const std::vector<CompareSpec>& specs,
                                        const MappingSpec& T, const FnVec& f1,
                                        const StopRule& stop, const ModularFn& rho,
                                        const MeasureGrid& grid) {
    if (specs.empty()) {
        throw ParameterError("compare_schemes requires at least one scheme");
    }
    std::vector<CompareRow> rows;
    rows.reserve(specs.size());
    for (const CompareSpec& spec : specs) {
        CompareRow row;
        row.name = spec.name.empty() ? std::string(to_string(spec.scheme.kind)) : spec.name;
        try {
            const IterationTrace trace = run(spec.scheme, T, f1, spec.alpha, stop, rho, grid);
            row.iterations = trace.iterations();
            row.stop_reason = trace.stop_reason;
            row.final_self_residual = trace.steps.back().rho_self_residual;
            if (stop.target()) {
                row.final_to_w = eval_modular(rho, grid, sub(trace.final_iterate, *stop.target()));
                try {
                    row.contraction = contraction_factor(trace, *stop.target(), rho, grid);
                } catch (const Error&) {
                }
            }
        } catch (const RunError& e) {
            row.error = e.what();
            row.iterations = e.partial_trace().iterations();
            row.stop_reason = e.partial_trace().stop_reason;
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(), [](const CompareRow& a, const CompareRow& b) {
        if (a.iterations != b.iterations) {
            return a.iterations < b.iterations;
        }
        return a.name < b.name;
    });
    return rows;
}

}  // namespace modfix
