#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modfix/expr.hpp"
#include "modfix/grid.hpp"

namespace modfix {

enum class ModularKind { absolute, power, orlicz };

/// A modular functional ρ evaluated at desk scale as
///
///   ρ(f) = Σ_i w_i · φ(|f(x_i)|)
///
/// with φ(t) = t (absolute), φ(t) = t^p (power, p ≥ 1), or a user-supplied
/// Orlicz-style integrand. On the scalar grid the absolute modular is
/// ρ(f) = |f|.
///
/// Analytic properties (convexity, Δ₂ growth, uniform-convexity-type UUC1)
/// are *declared*, not proven: the sampled checks below can falsify convexity
/// or monotonicity but nothing here verifies UUC1, which is not falsifiable
/// by sampling.
class ModularFn {
public:
    /// ρ(f) = Σ w_i |f_i|. Convex, Δ₂ (doubling ratio 2), UUC1 declared.
    static ModularFn absolute();

    /// ρ(f) = Σ w_i |f_i|^p, p ≥ 1. Convex, Δ₂ (ratio 2^p); UUC1 declared
    /// for p > 1.
    static ModularFn power(double p);

    /// User integrand φ given as an expression in one variable (named 't').
    /// φ(0) must evaluate to 0; φ must be nonnegative (checked lazily at
    /// evaluation). Evenness is automatic because φ is applied to |f|.
    static ModularFn orlicz(ExprAst phi, bool declared_convex, bool declared_delta2 = false,
                            bool declared_uuc1 = false);

    ModularKind kind() const noexcept { return kind_; }
    double exponent() const noexcept { return p_; }  // power only
    const ExprAst& phi() const { return *phi_; }     // orlicz only

    bool declared_convex() const noexcept { return convex_; }
    bool declared_delta2() const noexcept { return delta2_; }
    bool declared_uuc1() const noexcept { return uuc1_; }

    /// φ(t) for t = |f(x)| ≥ 0.
    double integrand(double t) const;

    std::string describe() const;

private:
    ModularFn(ModularKind kind, double p, std::optional<ExprAst> phi, bool convex, bool delta2,
              bool uuc1);

    ModularKind kind_;
    double p_ = 1.0;
    std::optional<ExprAst> phi_;
    bool convex_ = false;
    bool delta2_ = false;
    bool uuc1_ = false;
};

/// Result of one sampled axiom check. `worst_margin` is the most negative
/// violating slack found (0 when there is no violation), so
/// violations == 0 iff worst_margin == 0.
struct ModularReport {
    std::string property_name;
    std::size_t samples_tested = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;

    bool passed() const noexcept { return violations == 0; }
};

/// ρ(f) = Σ w_i φ(|f_i|). Throws AlignmentError on a length mismatch and
/// DomainError if the value fails to be finite and nonnegative.
double eval_modular(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f);

/// Luxemburg norm ‖f‖ = inf{α > 0 : ρ(f/α) ≤ 1} for a convex modular.
/// α ↦ ρ(f/α) is nonincreasing, so the norm is bracketed by doubling/halving
/// from α = 1 (at most 64 expansions) and then bisected (at most 200 steps)
/// to relative tolerance `tol`. Returns 0 for the zero function.
double luxemburg_norm(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f,
                      double tol = 1e-12);

/// dist(f, targets) = min_h ρ(f - h) over the finite candidate set.
double rho_distance(const ModularFn& rho, const MeasureGrid& grid, const FnVec& f,
                    const std::vector<FnVec>& targets);

/// Samples triples (f, g, α) from `bounds` and tests the convexity
/// inequality ρ(αf + (1-α)g) ≤ αρ(f) + (1-α)ρ(g) with absolute slack 1e-12.
ModularReport check_convexity(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                              std::uint64_t seed, const DomainBox& bounds);

/// Samples pairs with |f| ≤ |g| pointwise by construction (f = g·u,
/// u ∈ [0,1]) and tests monotonicity ρ(f) ≤ ρ(g).
ModularReport check_monotone(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                             std::uint64_t seed, const DomainBox& bounds);

/// Growth probe: max over sampled f (with ρ(f) > 1e-300) of ρ(2f)/ρ(f).
/// A finite bound is evidence consistent with the Δ₂ growth condition; this
/// is a probe, not a proof. Returns 0 if no sample had ρ(f) above cutoff.
double delta2_ratio_probe(const ModularFn& rho, const MeasureGrid& grid, std::size_t samples,
                          std::uint64_t seed, const DomainBox& bounds);

}  // namespace modfix
