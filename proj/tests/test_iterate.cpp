#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modfix/analysis.hpp"
#include "modfix/iterate.hpp"
#include "test_support.hpp"

using namespace modfix;
using testsupport::kGoldenRows;
using testsupport::matches_cell;

namespace {
const MeasureGrid kScalar = MeasureGrid::scalar();
const ModularFn kAbs = ModularFn::absolute();
MappingSpec example_mapping() { return MappingSpec::affine(2.0 / 3.0, 1.0 / 3.0); }

IterationTrace example_run(double alpha, double tol, std::size_t max_iter = 10000) {
    return run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(4.0),
               StepSequence::constant(alpha), StopRule::to_fixed_point(FnVec::scalar(1.0), tol, max_iter),
               kAbs, kScalar);
}
}  // namespace

TEST_CASE("step sequences guard their range and repeat the last table entry") {
    CHECK_THROWS_AS(StepSequence::constant(0.0), ParameterError);
    CHECK_THROWS_AS(StepSequence::constant(1.0), ParameterError);
    CHECK_THROWS_AS(StepSequence::constant(-0.5), ParameterError);
    CHECK_THROWS_AS(StepSequence::table({0.5, 1.0}), ParameterError);
    CHECK_THROWS_AS(StepSequence::table({}), ParameterError);

    const StepSequence table = StepSequence::table({0.2, 0.4, 0.6});
    CHECK(table.at(1) == 0.2);
    CHECK(table.at(3) == 0.6);
    CHECK(table.at(9) == 0.6);
    CHECK(table.lower_bound() == 0.2);
    CHECK(table.upper_bound() == 0.6);
    CHECK_THROWS_AS(table.at(0), ParameterError);
}

TEST_CASE("khan step reproduces the first two reference rows") {
    const KhanStep s1 = khan_step(example_mapping(), FnVec::scalar(4.0), 0.5);
    CHECK(matches_cell(s1.Tf[0], "3.000000"));
    CHECK(matches_cell(s1.g[0], "3.500000"));
    CHECK(matches_cell(s1.f_next[0], "2.666667"));

    const KhanStep s2 = khan_step(example_mapping(), s1.f_next, 0.5);
    CHECK(matches_cell(s2.Tf[0], "2.111111"));
    CHECK(matches_cell(s2.g[0], "2.388889"));
    CHECK(matches_cell(s2.f_next[0], "1.925926"));

    const FnVec w = FnVec::scalar(1.0);
    const KhanStep fixed = khan_step(example_mapping(), w, 0.5);
    CHECK(fixed.Tf == w);
    CHECK(fixed.g == w);
    CHECK(fixed.f_next == w);

    CHECK_THROWS_AS(khan_step(example_mapping(), w, 0.0), ParameterError);
}

TEST_CASE("picard, mann and ishikawa steps on hand-computed values") {
    const MappingSpec T = example_mapping();
    const FnVec f4 = FnVec::scalar(4.0);
    CHECK(picard_step(T, f4)[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(mann_step(T, f4, 0.5)[0] == doctest::Approx(3.5).epsilon(1e-12));
    // 0.5*4 + 0.5*T(3.5) = 0.5*4 + 0.5*(8/3) = 10/3
    CHECK(ishikawa_step(T, f4, 0.5, 0.5)[0] == doctest::Approx(10.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("khan run reproduces the reference table rows") {
    const IterationTrace trace = example_run(0.5, 1e-5);
    CHECK(trace.stop_reason == StopReason::tolerance_met);
    REQUIRE(trace.iterations() == 22);
    CHECK(matches_cell(trace.final_iterate[0], "1.000007"));

    for (const auto& row : kGoldenRows) {
        const StepRecord& rec = trace.steps[static_cast<std::size_t>(row.n) - 1];
        CHECK(rec.n == static_cast<std::size_t>(row.n));
        CHECK(matches_cell(rec.f_n[0], row.f));
        CHECK(matches_cell(rec.Tf_n[0], row.Tf));
        REQUIRE(rec.g_n.has_value());
        CHECK(matches_cell((*rec.g_n)[0], row.g));
        CHECK(matches_cell(rec.f_next[0], row.f_next));
        CHECK(rec.alpha_n == 0.5);
    }
}

TEST_CASE("iteration counts for the documented tolerances and step sizes") {
    CHECK(example_run(0.50, 1e-5).iterations() == 22);
    CHECK(example_run(0.75, 1e-5).iterations() == 19);
    CHECK(example_run(0.25, 1e-5).iterations() == 26);
    CHECK(example_run(0.50, 1e-10).iterations() == 42);
}

TEST_CASE("max_iter truncates the run without an error") {
    const IterationTrace trace = example_run(0.5, 1e-5, 5);
    CHECK(trace.stop_reason == StopReason::max_iter);
    CHECK(trace.iterations() == 5);
}

TEST_CASE("trace records are contiguous and chain exactly") {
    const IterationTrace trace = example_run(0.5, 1e-5);
    for (std::size_t i = 0; i < trace.steps.size(); ++i) {
        CHECK(trace.steps[i].n == i + 1);
        if (i + 1 < trace.steps.size()) {
            CHECK(trace.steps[i].f_next == trace.steps[i + 1].f_n);  // bitwise
        }
    }
    CHECK(trace.steps.back().f_next == trace.final_iterate);
}

TEST_CASE("self-residual stop evaluates the fresh iterate") {
    // residual(f_{n+1}) = (5/9)^n for the example, so the first n with
    // residual < 1e-6 is 24
    const IterationTrace trace =
        run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5), StopRule::self_residual(1e-6, 10000), kAbs, kScalar);
    CHECK(trace.stop_reason == StopReason::tolerance_met);
    CHECK(trace.iterations() == 24);

    const auto residuals = residual_series(trace);
    for (std::size_t i = 1; i < residuals.size(); ++i) {
        CHECK(residuals[i] < residuals[i - 1]);
    }
}

TEST_CASE("step-residual stop fires") {
    const IterationTrace trace =
        run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5), StopRule::step_residual(1e-7, 10000), kAbs, kScalar);
    CHECK(trace.stop_reason == StopReason::tolerance_met);
    CHECK(trace.iterations() > 5);
}

TEST_CASE("scalars-only traces keep the scalar columns and the final iterate") {
    const IterationTrace full = example_run(0.5, 1e-5);
    const IterationTrace thin =
        run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5),
            StopRule::to_fixed_point(FnVec::scalar(1.0), 1e-5, 10000), kAbs, kScalar,
            TraceMode::scalars);
    CHECK(!thin.stores_vectors);
    CHECK(thin.iterations() == full.iterations());
    CHECK(thin.final_iterate == full.final_iterate);
    for (std::size_t i = 0; i < thin.steps.size(); ++i) {
        CHECK(thin.steps[i].f_n.empty());
        CHECK(thin.steps[i].rho_self_residual == full.steps[i].rho_self_residual);
        REQUIRE(thin.steps[i].rho_to_w.has_value());
        CHECK(*thin.steps[i].rho_to_w == *full.steps[i].rho_to_w);
    }
}

TEST_CASE("automatic mode switches to scalars above the cap") {
    const IterationTrace trace =
        run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5),
            StopRule::to_fixed_point(FnVec::scalar(1.0), 1e-5, 2000000), kAbs, kScalar);
    CHECK(!trace.stores_vectors);
    CHECK(trace.iterations() == 22);
}

TEST_CASE("fixed-point start stops at the first iteration") {
    const IterationTrace trace =
        run(SchemeSpec::khan(), example_mapping(), FnVec::scalar(1.0),
            StepSequence::constant(0.5),
            StopRule::to_fixed_point(FnVec::scalar(1.0), 1e-5, 100), kAbs, kScalar);
    CHECK(trace.iterations() == 1);
    CHECK(trace.final_iterate == FnVec::scalar(1.0));
}

TEST_CASE("mapping failures abort with the partial trace attached") {
    // f1 = 2: the first step succeeds, the second hits sqrt of a negative
    const MappingSpec T = MappingSpec::expression(parse_expr("sqrt(f - 1)"));
    try {
        run(SchemeSpec::khan(), T, FnVec::scalar(2.0), StepSequence::constant(0.5),
            StopRule::self_residual(1e-12, 100), kAbs, kScalar);
        FAIL("expected a run error");
    } catch (const RunError& e) {
        CHECK(e.partial_trace().iterations() >= 1);
        CHECK(std::string(e.what()).find("mapping evaluation failed") != std::string::npos);
    }
}

TEST_CASE("measured contraction factors match the closed forms") {
    const FnVec w = FnVec::scalar(1.0);
    const StopRule stop = StopRule::to_fixed_point(FnVec::scalar(1.0), 1e-5, 10000);

    const IterationTrace khan_trace = example_run(0.5, 1e-5);
    CHECK(std::fabs(contraction_factor(khan_trace, w, kAbs, kScalar) - 5.0 / 9.0) <= 1e-9);

    const IterationTrace picard_trace =
        run(SchemeSpec::picard(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5), stop, kAbs, kScalar);
    CHECK(std::fabs(contraction_factor(picard_trace, w, kAbs, kScalar) - 2.0 / 3.0) <= 1e-9);

    const IterationTrace mann_trace =
        run(SchemeSpec::mann(), example_mapping(), FnVec::scalar(4.0),
            StepSequence::constant(0.5), stop, kAbs, kScalar);
    CHECK(std::fabs(contraction_factor(mann_trace, w, kAbs, kScalar) - 5.0 / 6.0) <= 1e-9);

    const IterationTrace ishikawa_trace =
        run(SchemeSpec::ishikawa(StepSequence::constant(0.5)), example_mapping(),
            FnVec::scalar(4.0), StepSequence::constant(0.5), stop, kAbs, kScalar);
    CHECK(std::fabs(contraction_factor(ishikawa_trace, w, kAbs, kScalar) - 7.0 / 9.0) <= 1e-9);
}

TEST_CASE("contraction factor error cases") {
    const IterationTrace two = example_run(0.5, 1e-5, 2);
    CHECK_THROWS_AS(contraction_factor(two, FnVec::scalar(1.0), kAbs, kScalar), ParameterError);

    // hand-built trace sitting exactly at w: every distance is below cutoff
    IterationTrace at_fixed_point;
    at_fixed_point.scheme = SchemeSpec::khan();
    at_fixed_point.stores_vectors = true;
    for (std::size_t n = 1; n <= 3; ++n) {
        StepRecord rec;
        rec.n = n;
        rec.f_n = FnVec::scalar(1.0);
        rec.Tf_n = FnVec::scalar(1.0);
        rec.f_next = FnVec::scalar(1.0);
        at_fixed_point.steps.push_back(rec);
    }
    at_fixed_point.final_iterate = FnVec::scalar(1.0);
    CHECK_THROWS_AS(contraction_factor(at_fixed_point, FnVec::scalar(1.0), kAbs, kScalar),
                    ParameterError);
}

TEST_CASE("Fejer and intermediate inequalities hold along the khan run") {
    const IterationTrace trace = example_run(0.5, 1e-5);
    const FnVec w = FnVec::scalar(1.0);
    for (const StepRecord& step : trace.steps) {
        const double before = eval_modular(kAbs, kScalar, sub(step.f_n, w));
        const double after = eval_modular(kAbs, kScalar, sub(step.f_next, w));
        CHECK(after <= before + 1e-12);
        REQUIRE(step.g_n.has_value());
        CHECK(eval_modular(kAbs, kScalar, sub(*step.g_n, w)) <= before + 1e-12);
    }
}

TEST_CASE("ishikawa requires a beta sequence") {
    SchemeSpec bad;
    bad.kind = SchemeKind::ishikawa;
    CHECK_THROWS_AS(run(bad, example_mapping(), FnVec::scalar(4.0), StepSequence::constant(0.5),
                        StopRule::self_residual(1e-5, 10), kAbs, kScalar),
                    ParameterError);
}

TEST_CASE("run validates alignment") {
    CHECK_THROWS_AS(run(SchemeSpec::khan(), example_mapping(), FnVec({1.0, 2.0}),
                        StepSequence::constant(0.5), StopRule::self_residual(1e-5, 10), kAbs,
                        kScalar),
                    AlignmentError);
}
