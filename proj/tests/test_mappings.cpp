#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "modfix/iterate.hpp"
#include "modfix/mapping.hpp"

using namespace modfix;

namespace {
const MeasureGrid kScalar = MeasureGrid::scalar();
const DomainBox kBox = DomainBox::scalar(1.0, 8.0);
const ModularFn kAbs = ModularFn::absolute();
MappingSpec example_mapping() { return MappingSpec::affine(2.0 / 3.0, 1.0 / 3.0); }
}  // namespace

TEST_CASE("affine application matches the worked example") {
    const MappingSpec T = example_mapping();
    CHECK(T.apply(FnVec::scalar(4.0))[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(T.apply(FnVec::scalar(1.0))[0] == 1.0);  // the fixed point is exact
}

TEST_CASE("identity expression returns its input bitwise") {
    const MappingSpec id = MappingSpec::expression(parse_expr("f"));
    const FnVec f({0.1, -2.75, 8.0});
    CHECK(id.apply(f) == f);
}

TEST_CASE("expression mapping agrees with the affine form") {
    const MappingSpec expr = MappingSpec::expression(parse_expr("(2*f+1)/3"));
    CHECK(expr.apply(FnVec::scalar(4.0))[0] == 3.0);
    const MappingSpec aff = example_mapping();
    for (double x : {1.0, 2.5, 4.0, 7.75}) {
        CHECK(expr.apply(FnVec::scalar(x))[0] ==
              doctest::Approx(aff.apply(FnVec::scalar(x))[0]).epsilon(1e-14));
    }
}

TEST_CASE("composition applies stages first to last") {
    const MappingSpec T = MappingSpec::compose(
        {MappingSpec::affine(2.0, 0.0), MappingSpec::affine(1.0, 1.0)});
    CHECK(T.apply(FnVec::scalar(3.0))[0] == 7.0);  // (3*2)+1
    CHECK_THROWS_AS(MappingSpec::compose({}), ParameterError);
}

TEST_CASE("expression evaluation errors carry the point index") {
    const MappingSpec T = MappingSpec::expression(parse_expr("1/(f-2)"));
    try {
        T.apply(FnVec({1.0, 2.0, 3.0}));
        FAIL("expected an evaluation error");
    } catch (const EvalError& e) {
        REQUIRE(e.point_index().has_value());
        CHECK(*e.point_index() == 1);
    }
}

TEST_CASE("firm check accepts the worked example and rejects an expansion") {
    const ClassReport good =
        check_firm_nonexpansive(kAbs, kScalar, example_mapping(), 1.0 / 3.0, kBox, 1000, 7);
    CHECK(good.violations == 0);
    CHECK(good.worst_margin >= 0.0);
    CHECK(good.pairs_tested == 1000);

    const ClassReport id =
        check_firm_nonexpansive(kAbs, kScalar, MappingSpec::expression(parse_expr("f")),
                                0.5, kBox, 500, 7);
    CHECK(id.violations == 0);
    CHECK(id.worst_margin == 0.0);  // LHS equals RHS pointwise

    // doubling map: LHS = 2|f-g|, RHS = (4/3)|f-g|; oracle at f=2, g=1
    const MappingSpec doubling = MappingSpec::affine(2.0, 0.0);
    const double lhs = std::fabs(doubling.apply_at(2.0) - doubling.apply_at(1.0));
    CHECK(lhs == 2.0);
    CHECK(lhs > 4.0 / 3.0);
    const ClassReport bad = check_firm_nonexpansive(kAbs, kScalar, doubling, 1.0 / 3.0, kBox, 1000, 7);
    CHECK(bad.violations > 0);
    CHECK(bad.worst_margin < -1e-12);

    CHECK_THROWS_AS(check_firm_nonexpansive(kAbs, kScalar, doubling, 0.0, kBox, 10, 7),
                    ParameterError);
    CHECK_THROWS_AS(check_firm_nonexpansive(kAbs, kScalar, doubling, 1.0, kBox, 10, 7),
                    ParameterError);
}

TEST_CASE("nonexpansiveness check") {
    // |Tf - Tg| = (2/3)|f - g| for the example mapping
    CHECK(std::fabs(example_mapping().apply_at(4.0) - example_mapping().apply_at(1.0)) ==
          doctest::Approx(2.0).epsilon(1e-12));
    const ClassReport good = check_rho_nonexpansive(kAbs, kScalar, example_mapping(), kBox, 1000, 7);
    CHECK(good.violations == 0);

    const ClassReport id = check_rho_nonexpansive(
        kAbs, kScalar, MappingSpec::expression(parse_expr("f")), kBox, 500, 7);
    CHECK(id.violations == 0);
    CHECK(id.worst_margin == 0.0);

    const ClassReport bad =
        check_rho_nonexpansive(kAbs, kScalar, MappingSpec::affine(2.0, 0.0), kBox, 1000, 7);
    CHECK(bad.violations > 0);
}

TEST_CASE("firm implies nonexpansive on identical sample sets") {
    // Seeded affine contractions paired with convex modulars: whenever the
    // firm check passes on a sample set, the nonexpansiveness check passes
    // on the same set.
    SampleRng rng(555);
    const ModularFn modulars[] = {ModularFn::absolute(), ModularFn::power(1.0),
                                  ModularFn::power(1.5), ModularFn::power(2.0),
                                  ModularFn::power(3.0)};
    for (int i = 0; i < 5; ++i) {
        const double a = rng.uniform(0.05, 0.95);
        const double b = rng.uniform(0.0, 2.0);
        const double lambda = rng.uniform(0.1, 0.9);
        const std::uint64_t seed = 9000 + static_cast<std::uint64_t>(i);
        const MappingSpec T = MappingSpec::affine(a, b);
        const ClassReport firm =
            check_firm_nonexpansive(modulars[i], kScalar, T, lambda, kBox, 1000, seed);
        const ClassReport nonexp =
            check_rho_nonexpansive(modulars[i], kScalar, T, kBox, 1000, seed);
        REQUIRE(firm.violations == 0);
        CHECK(nonexp.violations == 0);
    }
}

TEST_CASE("condition (I) check on the worked example") {
    const std::vector<FnVec> fps = {FnVec::scalar(1.0)};
    const ExprAst ell = parse_expr("r/6", "r");
    const ClassReport good =
        check_condition_I(kAbs, kScalar, example_mapping(), fps, ell, kBox, 1000, 7);
    CHECK(good.violations == 0);

    // the samples include the corner f = 1 where both sides vanish
    CHECK(eval_modular(kAbs, kScalar,
                       sub(FnVec::scalar(1.0), example_mapping().apply(FnVec::scalar(1.0)))) == 0.0);

    // ell(r) = r is too steep: at f = 4 the residual is 1 but ell(dist) = 3
    const ExprAst steep = parse_expr("r", "r");
    CHECK(eval_modular(kAbs, kScalar,
                       sub(FnVec::scalar(4.0), example_mapping().apply(FnVec::scalar(4.0)))) ==
          doctest::Approx(1.0).epsilon(1e-12));
    const ClassReport bad =
        check_condition_I(kAbs, kScalar, example_mapping(), fps, steep, kBox, 1000, 7);
    CHECK(bad.violations > 0);

    CHECK_THROWS_AS(check_condition_I(kAbs, kScalar, example_mapping(), fps,
                                      parse_expr("r+1", "r"), kBox, 10, 7),
                    ParameterError);
    CHECK_THROWS_AS(
        check_condition_I(kAbs, kScalar, example_mapping(), {}, ell, kBox, 10, 7),
        ParameterError);
}

TEST_CASE("optional monotonicity sampling of the rate function") {
    const std::vector<FnVec> fps = {FnVec::scalar(1.0)};
    // stays below r/6, so the condition (I) inequality holds on the box,
    // but it rises and then falls: only the optional sampling flags it
    const ExprAst dips = parse_expr("min(r/6, max(0, 2 - r)/6)", "r");
    CHECK(dips.eval(0.0) == 0.0);
    CHECK(dips.eval(1.0) == doctest::Approx(1.0 / 6.0));
    CHECK(dips.eval(3.0) == 0.0);
    const ClassReport off = check_condition_I(kAbs, kScalar, example_mapping(), fps, dips,
                                              kBox, 500, 7, false);
    CHECK(off.violations == 0);
    const ClassReport on = check_condition_I(kAbs, kScalar, example_mapping(), fps, dips,
                                             kBox, 500, 7, true);
    CHECK(on.violations > 0);
}

TEST_CASE("fixed points of affine mappings are invariant under every step") {
    SampleRng rng(808);
    int exact_cases = 0;
    for (int i = 0; i < 5; ++i) {
        const double a = (i == 0) ? 2.0 / 3.0 : rng.uniform(0.1, 0.9);
        const double b = (i == 0) ? 1.0 / 3.0 : rng.uniform(0.0, 2.0);
        const MappingSpec T = MappingSpec::affine(a, b);
        const FnVec w = FnVec::scalar(b / (1.0 - a));
        if (T.apply(w) != w) {
            continue;  // the closed form rounded off the exact fixed point
        }
        ++exact_cases;
        const KhanStep ks = khan_step(T, w, 0.5);
        CHECK(ks.Tf == w);
        CHECK(ks.g == w);
        CHECK(ks.f_next == w);
        CHECK(picard_step(T, w) == w);
        CHECK(mann_step(T, w, 0.5) == w);
        CHECK(ishikawa_step(T, w, 0.5, 0.5) == w);
    }
    CHECK(exact_cases >= 1);  // the worked example always qualifies
}
