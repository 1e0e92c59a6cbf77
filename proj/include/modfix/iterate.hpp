#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modfix/grid.hpp"
#include "modfix/mapping.hpp"
#include "modfix/modular.hpp"

namespace modfix {

/// Step-size schedule {α_n} ⊂ (0,1). Every term is validated at
/// construction, so the sequence is bounded away from 0 and 1 by its own
/// min/max. Table schedules repeat their last element when exhausted.
class StepSequence {
public:
    static StepSequence constant(double c);
    static StepSequence table(std::vector<double> values);

    /// Term for iteration n (1-based).
    double at(std::size_t n) const;

    double lower_bound() const noexcept { return lo_; }
    double upper_bound() const noexcept { return hi_; }
    bool is_constant() const noexcept { return values_.size() == 1; }

private:
    explicit StepSequence(std::vector<double> values);
    std::vector<double> values_;
    double lo_;
    double hi_;
};

/// The four schemes. All are built from convex_combine and apply_mapping:
///
///   khan:     g_n = (1-α_n) f_n + α_n T f_n,   f_{n+1} = T g_n
///   picard:   f_{n+1} = T f_n
///   mann:     f_{n+1} = (1-α_n) f_n + α_n T f_n
///   ishikawa: g_n = (1-β_n) f_n + β_n T f_n,
///             f_{n+1} = (1-α_n) f_n + α_n T g_n
///
/// The mann and ishikawa forms are the standard textbook ones.
enum class SchemeKind { khan, picard, mann, ishikawa };

std::string_view to_string(SchemeKind k);
SchemeKind scheme_from_string(std::string_view name);

struct SchemeSpec {
    SchemeKind kind = SchemeKind::khan;
    std::optional<StepSequence> beta;  // ishikawa only

    static SchemeSpec khan() { return {SchemeKind::khan, std::nullopt}; }
    static SchemeSpec picard() { return {SchemeKind::picard, std::nullopt}; }
    static SchemeSpec mann() { return {SchemeKind::mann, std::nullopt}; }
    static SchemeSpec ishikawa(StepSequence beta_seq) {
        return {SchemeKind::ishikawa, std::move(beta_seq)};
    }
};

/// Stopping rule, always paired with an iteration cap. The rule is evaluated
/// on the freshly produced iterate:
///   residual_to_fixed_point:  ρ(f_{n+1} - w)          < tol
///   self_residual:            ρ(f_{n+1} - T f_{n+1})  < tol
///   step_residual:            ρ(f_{n+1} - f_n)        < tol
class StopRule {
public:
    enum class Kind { residual_to_fixed_point, self_residual, step_residual };

    static StopRule to_fixed_point(FnVec w, double tol, std::size_t max_iter);
    static StopRule self_residual(double tol, std::size_t max_iter);
    static StopRule step_residual(double tol, std::size_t max_iter);

    Kind kind() const noexcept { return kind_; }
    double tol() const noexcept { return tol_; }
    std::size_t max_iter() const noexcept { return max_iter_; }
    const std::optional<FnVec>& target() const noexcept { return w_; }

private:
    StopRule(Kind kind, std::optional<FnVec> w, double tol, std::size_t max_iter);
    Kind kind_;
    std::optional<FnVec> w_;
    double tol_;
    std::size_t max_iter_;
};

enum class StopReason { tolerance_met, max_iter };

std::string_view to_string(StopReason r);

/// One step of a run. Iteration counting convention: iteration n consumes
/// f_n and produces f_{n+1} (stored as f_next); the stop rule is evaluated
/// on f_next, and the n whose f_next meets the tolerance is the reported
/// iteration count.
struct StepRecord {
    std::size_t n = 0;
    FnVec f_n;                        // empty in scalars-only traces
    FnVec Tf_n;                       // empty in scalars-only traces
    std::optional<FnVec> g_n;         // khan and ishikawa only
    FnVec f_next;                     // empty in scalars-only traces
    std::optional<double> alpha_n;    // absent for picard
    std::optional<double> beta_n;     // ishikawa only
    double rho_self_residual = 0.0;   // ρ(f_n - T f_n)
    std::optional<double> rho_to_w;   // ρ(f_n - w) when the stop rule tracks w
};

enum class TraceMode {
    automatic,  // full unless max_iter > 10^6
    full,       // store all vectors per step
    scalars     // store only the scalar columns (bounded memory)
};

struct IterationTrace {
    SchemeSpec scheme;
    std::vector<StepRecord> steps;
    StopReason stop_reason = StopReason::max_iter;
    bool stores_vectors = true;
    FnVec final_iterate;  // f_{N+1}, kept even in scalars mode

    std::size_t iterations() const noexcept { return steps.size(); }
};

/// A mapping evaluation failure during a run; carries the steps completed
/// before the failure.
class RunError : public Error {
public:
    RunError(const std::string& message, IterationTrace partial)
        : Error(message), partial_(std::move(partial)) {}
    const IterationTrace& partial_trace() const noexcept { return partial_; }

private:
    IterationTrace partial_;
};

struct KhanStep {
    FnVec Tf;
    FnVec g;
    FnVec f_next;
};

KhanStep khan_step(const MappingSpec& T, const FnVec& f, double alpha);
FnVec picard_step(const MappingSpec& T, const FnVec& f);
FnVec mann_step(const MappingSpec& T, const FnVec& f, double alpha);
FnVec ishikawa_step(const MappingSpec& T, const FnVec& f, double alpha, double beta);

/// Run a scheme until the stop rule fires or max_iter is reached. The trace
/// contains every step including the last. Mapping evaluation errors abort
/// the run with a RunError carrying the partial trace; hitting max_iter is
/// a stop reason, not an error.
IterationTrace run(const SchemeSpec& scheme, const MappingSpec& T, const FnVec& f1,
                   const StepSequence& alpha, const StopRule& stop, const ModularFn& rho,
                   const MeasureGrid& grid, TraceMode mode = TraceMode::automatic);

/// Geometric mean of the successive ratios ρ(f_{n+1}-w)/ρ(f_n-w) over the
/// trace prefix whose denominators stay ≥ 1e-13. Meaningful as a rate only
/// for contractions; reported as descriptive otherwise. Requires a full
/// trace with at least 3 steps.
double contraction_factor(const IterationTrace& trace, const FnVec& w, const ModularFn& rho,
                          const MeasureGrid& grid);

}  // namespace modfix
