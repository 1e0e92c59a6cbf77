#include "modfix/modular.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace modfix {

namespace {

constexpr double kSlack = 1e-12;      // absolute slack for sampled inequalities
constexpr double kZeroCutoff = 1e-300;  // ρ(f) below this counts as zero in ratios

}  // namespace

ModularFn::ModularFn(ModularKind kind, double p, std::optional<ExprAst> phi, bool convex,
                     bool delta2, bool uuc1)
    : kind_(kind), p_(p), phi_(std::move(phi)), convex_(convex), delta2_(delta2), uuc1_(uuc1) {}

ModularFn ModularFn::absolute() {
    return ModularFn(ModularKind::absolute, 1.0, std::nullopt, true, true, true);
}

ModularFn ModularFn::power(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw ParameterError("power modular requires exponent p >= 1");
    }
    return ModularFn(ModularKind::power, p, std::nullopt, true, true, p > 1.0);
}

ModularFn ModularFn::orlicz(ExprAst phi, bool declared_convex, bool declared_delta2,
                            bool declared_uuc1) {
    double at_zero = 0.0;
    try {
        at_zero = phi.eval(0.0);
    } catch (const EvalError& e) {
        throw ParameterError(std::string("orlicz integrand is undefined at 0: ") + e.what());
    }
    if (std::fabs(at_zero) > kSlack) {
        throw ParameterError("orlicz integrand must satisfy phi(0) = 0");
    }
    return ModularFn(ModularKind::orlicz, 1.0, std::move(phi), declared_convex, declared_delta2,
                     declared_uuc1);
}

double ModularFn::integrand(double t) const {
    switch (kind_) {
        case ModularKind::absolute:
            return t;
        case ModularKind::power:
            return std::pow(t, p_);
        case ModularKind::orlicz: {
            const double v = phi_->eval(t);
            if (v < 0.0) {
                throw DomainError("orlicz integrand produced a negative value");
            }
            return v;
        }
    }
    return 0.0;  // unreachable
}

std::string ModularFn::describe() const {
    switch (kind_) {
        case ModularKind::absolute:
            return "absolute";
        case ModularKind::power:
            return "power(p=" + std::to_string(p_) + ")";
        case ModularKind::orlicz:
            return "orlicz(" + phi_->to_string() + ")";
    }
    return "";
}

double eval_modular(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f) {
    require_aligned(grid, f);
    const auto weights = grid.weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sum += weights[i] * rho.integrand(std::fabs(f[i]));
    }
    if (!std::isfinite(sum) || sum < 0.0) {
        throw DomainError("modular value is not finite and nonnegative");
    }
    return sum;
}

double luxemburg_norm(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f, double tol) {
    if (!rho.declared_convex()) {
        throw UnsupportedError("Luxemburg norm requires a convex modular");
    }
    if (!(tol > 0.0)) {
        throw ParameterError("Luxemburg norm tolerance must be > 0");
    }
    require_aligned(grid, f);
    bool all_zero = true;
    for (double v : f.values()) {
        if (v != 0.0) {
            all_zero = false;
            break;
        }
    }
    if (all_zero) {
        return 0.0;
    }

    const auto feasible = [&](double alpha) {
        return eval_modular(rho, grid, scale(f, 1.0 / alpha)) <= 1.0;
    };

    // α ↦ ρ(f/α) is nonincreasing, so doubling/halving from 1 brackets the
    // norm and bisection on the bracket is robust.
    double lo = 0.0;
    double hi = 0.0;
    if (feasible(1.0)) {
        hi = 1.0;
        double alpha = 0.5;
        bool bracketed = false;
        for (int k = 0; k < 64; ++k, alpha *= 0.5) {
            if (!feasible(alpha)) {
                lo = alpha;
                hi = 2.0 * alpha;
                bracketed = true;
                break;
            }
        }
        if (!bracketed) {
            return 0.0;  // norm below the bracket floor
        }
    } else {
        lo = 1.0;
        double alpha = 2.0;
        bool bracketed = false;
        for (int k = 0; k < 64; ++k, alpha *= 2.0) {
            if (feasible(alpha)) {
                hi = alpha;
                lo = alpha / 2.0;
                bracketed = true;
                break;
            }
        }
        if (!bracketed) {
            throw DomainError("Luxemburg norm exceeds the bracket ceiling");
        }
    }

    for (int step = 0; step < 200 && (hi - lo) > tol * std::max(1.0, lo); ++step) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double rho_distance(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f,
                    const std::vector<FnVec>& targets) {
    if (targets.empty()) {
        throw ParameterError("rho_distance requires a nonempty target set");
    }
    double best = eval_modular(rho, grid, sub(f, targets.front()));
    for (std::size_t i = 1; i < targets.size(); ++i) {
        best = std::min(best, eval_modular(rho, grid, sub(f, targets[i])));
    }
    return best;
}

namespace {

void require_check_args(const MeasureGrid& grid, std::size_t samples, const DomainBox& bounds) {
    if (samples == 0) {
        throw ParameterError("sample count must be > 0");
    }
    if (bounds.size() != grid.size()) {
        throw AlignmentError("domain box is not aligned to the grid");
    }
}

}  // namespace

ModularReport check_convexity(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                              std::uint64_t seed, const DomainBox& bounds) {
    require_check_args(grid, samples, bounds);
    SampleRng rng(seed);
    ModularReport report{"convexity", samples, 0, 0.0};
    for (std::size_t k = 0; k < samples; ++k) {
        const FnVec f = sample_point(bounds, rng);
        const FnVec g = sample_point(bounds, rng);
        const double alpha = rng.uniform_open01();
        const double lhs = eval_modular(rho, grid, convex_combine(g, f, alpha));  // αf + (1-α)g
        const double rhs = alpha * eval_modular(rho, grid, f) +
                           (1.0 - alpha) * eval_modular(rho, grid, g);
        const double slack = rhs - lhs;
        if (slack < -kSlack) {
            ++report.violations;
            report.worst_margin = std::min(report.worst_margin, slack);
        }
    }
    return report;
}

ModularReport check_monotone(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                             std::uint64_t seed, const DomainBox& bounds) {
    require_check_args(grid, samples, bounds);
    SampleRng rng(seed);
    ModularReport report{"monotonicity", samples, 0, 0.0};
    for (std::size_t k = 0; k < samples; ++k) {
        const FnVec g = sample_point(bounds, rng);
        std::vector<double> shrunk(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            shrunk[i] = g[i] * rng.uniform01();  // |f| <= |g| pointwise by construction
        }
        const FnVec f(std::move(shrunk));
        const double slack = eval_modular(rho, grid, g) - eval_modular(rho, grid, f);
        if (slack < -kSlack) {
            ++report.violations;
            report.worst_margin = std::min(report.worst_margin, slack);
        }
    }
    return report;
}

double delta2_ratio_probe(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                          std::uint64_t seed, const DomainBox& bounds) {
    require_check_args(grid, samples, bounds);
    SampleRng rng(seed);
    double max_ratio = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        const FnVec f = sample_point(bounds, rng);
        const double base = eval_modular(rho, grid, f);
        if (base <= kZeroCutoff) {
            continue;
        }
        max_ratio = std::max(max_ratio, eval_modular(rho, grid, scale(f, 2.0)) / base);
    }
    return max_ratio;
}

}  // namespace modfix
