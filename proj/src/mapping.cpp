#include "modfix/mapping.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace modfix {

namespace {
constexpr double kSlack = 1e-12;
}

MappingSpec MappingSpec::affine(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw ParameterError("affine coefficients must be finite");
    }
    return MappingSpec(Rep{Affine{a, b}});
}

MappingSpec MappingSpec::expression(ExprAst expr) { return MappingSpec(Rep{std::move(expr)}); }

MappingSpec MappingSpec::compose(std::vector<MappingSpec> stages) {
    if (stages.empty()) {
        throw ParameterError("composition requires at least one mapping");
    }
    return MappingSpec(Rep{std::move(stages)});
}

double MappingSpec::apply_at(double x) const {
    if (const auto* aff = std::get_if<Affine>(&rep_)) {
        return std::fma(aff->a, x, aff->b);
    }
    if (const auto* expr = std::get_if<ExprAst>(&rep_)) {
        return expr->eval(x);
    }
    double value = x;
    for (const MappingSpec& stage : std::get<std::vector<MappingSpec>>(rep_)) {
        value = stage.apply_at(value);
    }
    return value;
}

FnVec MappingSpec::apply(const FnVec& f) const {
    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        try {
            out[i] = apply_at(f[i]);
        } catch (const EvalError& e) {
            throw EvalError(e.what(), i);
        }
    }
    return FnVec(std::move(out));
}

std::string MappingSpec::describe() const {
    if (const auto* aff = std::get_if<Affine>(&rep_)) {
        return "affine(a=" + std::to_string(aff->a) + ", b=" + std::to_string(aff->b) + ")";
    }
    if (const auto* expr = std::get_if<ExprAst>(&rep_)) {
        return expr->to_string();
    }
    std::string out = "compose(";
    const auto& stages = std::get<std::vector<MappingSpec>>(rep_);
    for (std::size_t i = 0; i < stages.size(); ++i) {
        if (i) out += ", ";
        out += stages[i].describe();
    }
    return out + ")";
}

FnVec apply_mapping(const MappingSpec& T, const FnVec& f) { return T.apply(f); }

std::string_view to_string(MappingClass c) {
    switch (c) {
        case MappingClass::firm: return "firm";
        case MappingClass::nonexpansive: return "nonexpansive";
        case MappingClass::condition_I: return "condition-I";
    }
    return "";
}

namespace {

// Both pairwise checkers draw from this stream so a common seed gives them
// identical samples. Pair 0 is the diagonal (f, f).
std::pair<FnVec, FnVec> next_pair(const DomainBox& box, SampleRng& rng, std::size_t k) {
    FnVec f = sample_point(box, rng);
    if (k == 0) {
        return {f, f};
    }
    FnVec g = sample_point(box, rng);
    return {std::move(f), std::move(g)};
}

void require_pair_args(const MeasureGrid& grid, const DomainBox& box, std::size_t pairs) {
    if (pairs == 0) {
        throw ParameterError("pair count must be > 0");
    }
    if (box.size() != grid.size()) {
        throw AlignmentError("domain box is not aligned to the grid");
    }
}

}  // namespace

ClassReport check_firm_nonexpansive(const ModularFn& rho, const MeasureGrid& grid,
                                    const MappingSpec& T, double lambda, const DomainBox& box,
                                    std::size_t pairs, std::uint64_t seed) {
    if (!(lambda > 0.0 && lambda < 1.0)) {
        throw ParameterError("lambda must lie in (0,1)");
    }
    require_pair_args(grid, box, pairs);
    SampleRng rng(seed);
    ClassReport report{MappingClass::firm, lambda, pairs, 0,
                       std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < pairs; ++k) {
        const auto [f, g] = next_pair(box, rng, k);
        const FnVec Tf = T.apply(f);
        const FnVec Tg = T.apply(g);
        const FnVec df = sub(f, g);
        const FnVec dT = sub(Tf, Tg);
        const double lhs = eval_modular(rho, grid, dT);
        const double rhs = eval_modular(rho, grid, convex_combine(df, dT, lambda));
        const double slack = rhs - lhs;
        report.worst_margin = std::min(report.worst_margin, slack);
        if (slack < -kSlack) {
            ++report.violations;
        }
    }
    return report;
}

ClassReport check_rho_nonexpansive(const ModularFn& rho, const MeasureGrid& grid,
                                   const MappingSpec& T, const DomainBox& box, std::size_t pairs,
                                   std::uint64_t seed) {
    require_pair_args(grid, box, pairs);
    SampleRng rng(seed);
    ClassReport report{MappingClass::nonexpansive, std::nullopt, pairs, 0,
                       std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < pairs; ++k) {
        const auto [f, g] = next_pair(box, rng, k);
        const double lhs = eval_modular(rho, grid, sub(T.apply(f), T.apply(g)));
        const double rhs = eval_modular(rho, grid, sub(f, g));
        const double slack = rhs - lhs;
        report.worst_margin = std::min(report.worst_margin, slack);
        if (slack < -kSlack) {
            ++report.violations;
        }
    }
    return report;
}

ClassReport check_condition_I(const ModularFn& rho, const MeasureGrid& grid, const MappingSpec& T,
                              const std::vector<FnVec>& fixed_points, const ExprAst& ell,
                              const DomainBox& box, std::size_t samples, std::uint64_t seed,
                              bool check_ell_monotone) {
    if (fixed_points.empty()) {
        throw ParameterError("condition (I) check requires a nonempty fixed-point set");
    }
    require_pair_args(grid, box, samples);
    double ell_at_zero = 0.0;
    try {
        ell_at_zero = ell.eval(0.0);
    } catch (const EvalError& e) {
        throw ParameterError(std::string("invalid rate function: ") + e.what());
    }
    if (std::fabs(ell_at_zero) > kSlack) {
        throw ParameterError("invalid rate function: ell(0) must be 0");
    }

    ClassReport report{MappingClass::condition_I, std::nullopt, samples, 0,
                       std::numeric_limits<double>::infinity()};
    for (const FnVec& f : sample_domain(box, samples, seed)) {
        const double lhs = eval_modular(rho, grid, sub(f, T.apply(f)));
        const double rhs = ell.eval(rho_distance(rho, grid, f, fixed_points));
        const double slack = lhs - rhs;
        report.worst_margin = std::min(report.worst_margin, slack);
        if (slack < -kSlack) {
            ++report.violations;
        }
    }

    if (check_ell_monotone) {
        SampleRng rng(seed ^ 0x9e3779b97f4a7c15ULL);
        const double radius = eval_modular(rho, grid, sub(box.upper(), box.lower()));
        for (std::size_t k = 0; k < samples; ++k) {
            const double r1 = rng.uniform(0.0, radius);
            const double r2 = rng.uniform(r1, radius);
            const double slack = ell.eval(r2) - ell.eval(r1);
            if (slack < -kSlack) {
                ++report.violations;
                report.worst_margin = std::min(report.worst_margin, slack);
            }
        }
    }
    return report;
}

}  // namespace modfix
