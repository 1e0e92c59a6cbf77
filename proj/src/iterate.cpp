#include "modfix/iterate.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace modfix {

StepSequence::StepSequence(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) {
        throw ParameterError("step sequence must have at least one term");
    }
    for (double v : values_) {
        if (!(v > 0.0 && v < 1.0)) {
            throw ParameterError("step sequence terms must lie strictly inside (0,1)");
        }
    }
    lo_ = *std::min_element(values_.begin(), values_.end());
    hi_ = *std::max_element(values_.begin(), values_.end());
}

StepSequence StepSequence::constant(double c) { return StepSequence(std::vector<double>{c}); }

StepSequence StepSequence::table(std::vector<double> values) {
    return StepSequence(std::move(values));
}

double StepSequence::at(std::size_t n) const {
    if (n == 0) {
        throw ParameterError("step sequences are indexed from 1");
    }
    const std::size_t i = std::min(n - 1, values_.size() - 1);  // repeat the last term
    return values_[i];
}

std::string_view to_string(SchemeKind k) {
    switch (k) {
        case SchemeKind::khan: return "khan";
        case SchemeKind::picard: return "picard";
        case SchemeKind::mann: return "mann";
        case SchemeKind::ishikawa: return "ishikawa";
    }
    return "";
}

SchemeKind scheme_from_string(std::string_view name) {
    if (name == "khan") return SchemeKind::khan;
    if (name == "picard") return SchemeKind::picard;
    if (name == "mann") return SchemeKind::mann;
    if (name == "ishikawa") return SchemeKind::ishikawa;
    throw ParameterError("unknown scheme '" + std::string(name) +
                         "' (expected khan, picard, mann or ishikawa)");
}

StopRule::StopRule(Kind kind, std::optional<FnVec> w, double tol, std::size_t max_iter)
    : kind_(kind), w_(std::move(w)), tol_(tol), max_iter_(max_iter) {
    if (!(tol_ > 0.0)) {
        throw ParameterError("stop tolerance must be > 0");
    }
    if (max_iter_ < 1) {
        throw ParameterError("max_iter must be >= 1");
    }
}

StopRule StopRule::to_fixed_point(FnVec w, double tol, std::size_t max_iter) {
    return StopRule(Kind::residual_to_fixed_point, std::move(w), tol, max_iter);
}

StopRule StopRule::self_residual(double tol, std::size_t max_iter) {
    return StopRule(Kind::self_residual, std::nullopt, tol, max_iter);
}

StopRule StopRule::step_residual(double tol, std::size_t max_iter) {
    return StopRule(Kind::step_residual, std::nullopt, tol, max_iter);
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::tolerance_met: return "tolerance_met";
        case StopReason::max_iter: return "max_iter";
    }
    return "";
}

KhanStep khan_step(const MappingSpec& T, const FnVec& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ParameterError("alpha must lie in (0,1)");
    }
    KhanStep step;
    step.Tf = T.apply(f);
    step.g = convex_combine(f, step.Tf, alpha);
    step.f_next = T.apply(step.g);
    return step;
}

FnVec picard_step(const MappingSpec& T, const FnVec& f) { return T.apply(f); }

FnVec mann_step(const MappingSpec& T, const FnVec& f, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ParameterError("alpha must lie in (0,1)");
    }
    return convex_combine(f, T.apply(f), alpha);
}

FnVec ishikawa_step(const MappingSpec& T, const FnVec& f, double alpha, double beta) {
    if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
        throw ParameterError("alpha and beta must lie in (0,1)");
    }
    const FnVec g = convex_combine(f, T.apply(f), beta);
    return convex_combine(f, T.apply(g), alpha);
}

IterationTrace run(const SchemeSpec& scheme, const MappingSpec& T, const FnVec& f1,
                   const StepSequence& alpha, const StopRule& stop, const ModularFn& rho,
                   const MeasureGrid& grid, TraceMode mode) {
    require_aligned(grid, f1);
    if (stop.target()) {
        require_aligned(grid, *stop.target());
    }
    if (scheme.kind == SchemeKind::ishikawa && !scheme.beta) {
        throw ParameterError("ishikawa requires a beta step sequence");
    }

    const bool full =
        mode == TraceMode::full || (mode == TraceMode::automatic && stop.max_iter() <= 1000000);

    IterationTrace trace;
    trace.scheme = scheme;
    trace.stores_vectors = full;
    trace.steps.reserve(std::min<std::size_t>(stop.max_iter(), 4096));

    FnVec f = f1;
    try {
        FnVec Tf = T.apply(f);
        for (std::size_t n = 1; n <= stop.max_iter(); ++n) {
            StepRecord rec;
            rec.n = n;
            std::optional<FnVec> g;
            FnVec f_next;
            switch (scheme.kind) {
                case SchemeKind::khan: {
                    rec.alpha_n = alpha.at(n);
                    g = convex_combine(f, Tf, *rec.alpha_n);
                    f_next = T.apply(*g);
                    break;
                }
                case SchemeKind::picard: {
                    f_next = Tf;
                    break;
                }
                case SchemeKind::mann: {
                    rec.alpha_n = alpha.at(n);
                    f_next = convex_combine(f, Tf, *rec.alpha_n);
                    break;
                }
                case SchemeKind::ishikawa: {
                    rec.alpha_n = alpha.at(n);
                    rec.beta_n = scheme.beta->at(n);
                    g = convex_combine(f, Tf, *rec.beta_n);
                    f_next = convex_combine(f, T.apply(*g), *rec.alpha_n);
                    break;
                }
            }

            rec.rho_self_residual = eval_modular(rho, grid, sub(f, Tf));
            if (stop.kind() == StopRule::Kind::residual_to_fixed_point) {
                rec.rho_to_w = eval_modular(rho, grid, sub(f, *stop.target()));
            }

            // The stop rule looks at the freshly produced iterate f_{n+1}.
            bool met = false;
            std::optional<FnVec> Tf_next;
            switch (stop.kind()) {
                case StopRule::Kind::residual_to_fixed_point:
                    met = eval_modular(rho, grid, sub(f_next, *stop.target())) < stop.tol();
                    break;
                case StopRule::Kind::self_residual:
                    Tf_next = T.apply(f_next);
                    met = eval_modular(rho, grid, sub(f_next, *Tf_next)) < stop.tol();
                    break;
                case StopRule::Kind::step_residual:
                    met = eval_modular(rho, grid, sub(f_next, f)) < stop.tol();
                    break;
            }

            trace.final_iterate = f_next;
            if (full) {
                rec.f_n = std::move(f);
                rec.Tf_n = std::move(Tf);
                rec.g_n = std::move(g);
                rec.f_next = f_next;
            }
            trace.steps.push_back(std::move(rec));

            if (met) {
                trace.stop_reason = StopReason::tolerance_met;
                return trace;
            }
            f = std::move(f_next);
            Tf = Tf_next ? std::move(*Tf_next) : T.apply(f);
        }
        trace.stop_reason = StopReason::max_iter;
        return trace;
    } catch (const EvalError& e) {
        throw RunError(std::string("mapping evaluation failed: ") + e.what(), std::move(trace));
    }
}

double contraction_factor(const IterationTrace& trace, const FnVec& w, const ModularFn& rho,
                          const MeasureGrid& grid) {
    if (trace.steps.size() < 3) {
        throw ParameterError("trace too short for a contraction estimate (need >= 3 steps)");
    }
    if (!trace.stores_vectors) {
        throw ParameterError("contraction estimate requires a full trace");
    }
    constexpr double kCutoff = 1e-13;

    std::vector<double> dist;
    dist.reserve(trace.steps.size() + 1);
    for (const StepRecord& step : trace.steps) {
        dist.push_back(eval_modular(rho, grid, sub(step.f_n, w)));
    }
    dist.push_back(eval_modular(rho, grid, sub(trace.final_iterate, w)));

    // Prefix of ratios whose denominators stay above cutoff; their geometric
    // mean telescopes to (d_{K+1}/d_1)^(1/K).
    std::size_t valid = 0;
    while (valid < trace.steps.size() && dist[valid] >= kCutoff) {
        ++valid;
    }
    if (valid == 0) {
        throw ParameterError("all distances to the target are below the ratio cutoff");
    }
    return std::pow(dist[valid] / dist[0], 1.0 / static_cast<double>(valid));
}

}  // namespace modfix
