#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "modfix/expr.hpp"
#include "modfix/grid.hpp"
#include "modfix/modular.hpp"

namespace modfix {

/// A pointwise self-mapping T of the domain: affine f ↦ a·f + b, a parsed
/// expression in 'f' applied pointwise, or a composition of mappings applied
/// first to last.
class MappingSpec {
public:
    struct Affine {
        double a;
        double b;
    };

    static MappingSpec affine(double a, double b);
    static MappingSpec expression(ExprAst expr);
    static MappingSpec compose(std::vector<MappingSpec> stages);  // nonempty

    /// Pointwise application. Affine uses one fused multiply-add per point.
    /// Expression evaluation errors carry the failing point index.
    FnVec apply(const FnVec& f) const;

    /// Scalar convenience used by checkers and closed-form tests.
    double apply_at(double x) const;

    bool is_affine() const noexcept { return std::holds_alternative<Affine>(rep_); }
    const Affine& affine_coeffs() const { return std::get<Affine>(rep_); }

    std::string describe() const;

private:
    using Rep = std::variant<Affine, ExprAst, std::vector<MappingSpec>>;
    explicit MappingSpec(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

FnVec apply_mapping(const MappingSpec& T, const FnVec& f);

enum class MappingClass { firm, nonexpansive, condition_I };

std::string_view to_string(MappingClass c);

/// Result of a sampled mapping-class check. `worst_margin` is the minimum
/// inequality slack over all sampled pairs/points — RHS-LHS for the firm and
/// nonexpansive inequalities (which bound LHS above), LHS-RHS for
/// condition (I) (which bounds LHS below) — so in every case
/// violations == 0 iff worst_margin ≥ -1e-12.
struct ClassReport {
    MappingClass class_name = MappingClass::nonexpansive;
    std::optional<double> lambda;
    std::size_t pairs_tested = 0;
    std::size_t violations = 0;
    double worst_margin = 0.0;

    bool passed() const noexcept { return violations == 0; }
};

/// Tests the firm-nonexpansiveness inequality
///   ρ(Tf - Tg) ≤ ρ((1-λ)(f-g) + λ(Tf-Tg)),   λ ∈ (0,1),
/// on `pairs` seeded ordered pairs from the box. The diagonal pair f = g is
/// always included first (both sides must vanish exactly there).
ClassReport check_firm_nonexpansive(const ModularFn& rho, const MeasureGrid& grid,
                                    const MappingSpec& T, double lambda, const DomainBox& box,
                                    std::size_t pairs, std::uint64_t seed);

/// Tests ρ(Tf - Tg) ≤ ρ(f - g) on the same seeded pair stream as
/// check_firm_nonexpansive, so the two checks see identical samples for a
/// given seed.
ClassReport check_rho_nonexpansive(const ModularFn& rho, const MeasureGrid& grid,
                                   const MappingSpec& T, const DomainBox& box, std::size_t pairs,
                                   std::uint64_t seed);

/// Tests condition (I): ρ(f - Tf) ≥ ℓ(dist(f, fixed_points)) on seeded
/// samples from the box (corners included first). ℓ is an expression in
/// 'r' and must satisfy ℓ(0) = 0 (checked, tolerance 1e-12); its global
/// monotonicity is not verified unless `check_ell_monotone` is set, in
/// which case sampled pairs r1 ≤ r2 with ℓ(r1) > ℓ(r2) also count as
/// violations.
ClassReport check_condition_I(const ModularFn& rho, const MeasureGrid& grid, const MappingSpec& T,
                              const std::vector<FnVec>& fixed_points, const ExprAst& ell,
                              const DomainBox& box, std::size_t samples, std::uint64_t seed,
                              bool check_ell_monotone = false);

}  // namespace modfix
