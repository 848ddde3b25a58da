from fractions import Fraction

import pytest

from conftest import random_cubic
from rootfamily.analysis import empirical_order_and_aec
from rootfamily.errors import DegenerateStep, UndefinedParameter
from rootfamily.model import BUILTINS, G2_TEXT, FunctionModel, LocalData, builtin_model, local_data
from rootfamily.numeric import EvalContext, to_decimal_string
from rootfamily.solvers import (
    MethodSpec,
    SolverConfig,
    Status,
    fourth_order_parameter,
    iterate,
    step,
    step_basic_sequence,
    step_chebyshev,
    step_family_multiple,
    step_family_simple,
    step_fourth_order,
    step_halley,
    step_halley_multiple,
    step_newton,
    step_reference,
)

QUAD = FunctionModel.from_text("x^2 - 1", known_zero=1)


def quad_data(ctx, order=2):
    return local_data(QUAD, 2, need_order=order, ctx=ctx)


def close(ctx, a, b, ulps=4):
    return ctx.ulps_between(a, b) <= ulps


# single steps

def test_family_simple_examples(ctx):
    ld = quad_data(ctx)
    assert close(ctx, step_family_simple(ld, 1), ctx.scalar("1.16"))
    assert close(ctx, step_family_simple(ld, 0), ctx.scalar(14) / 13)


def test_family_simple_on_g2(ctx):
    alpha = builtin_model("f2", ctx).known_zero
    ld = local_data(FunctionModel.from_text(G2_TEXT), -1, ctx=ctx)
    x1 = step_family_simple(ld, -1)
    # same first step as f2 with m = 2, p = -1 in the reference table
    assert to_decimal_string(ctx.abs(x1 - alpha), 3) == "1.87e-2"
    # independent transcription of the step
    u, a2 = ld.u, ld.a2
    assert close(ctx, x1, -1 - u * (1 - u) / (1 + (-1 - a2) * u))


def test_family_multiple_examples(ctx):
    ld = local_data(FunctionModel.from_text("(x-1)^2"), 2, ctx=ctx, multiplicity=2)
    for p in (0, 1, -3, "2+5i"):
        assert step_family_multiple(ld, ctx.scalar(p), 2) == 1
    assert close(ctx, step_family_multiple(quad_data(ctx), 1, 1), ctx.scalar("1.16"))


def test_family_multiple_f4_first_error(ctx):
    model = builtin_model("f4", ctx)
    ld = local_data(model, ctx.scalar("0.4"), ctx=ctx)
    x1 = step_family_multiple(ld, 1, 12)
    assert to_decimal_string(ctx.abs(x1), 3) == "1.58e-4"


def test_reference_steps(ctx):
    ld = local_data(FunctionModel.from_text("x - 2.5"), "7+i", ctx=ctx)
    assert step_newton(ld) == ctx.scalar("2.5")
    assert close(ctx, step_halley(quad_data(ctx)), ctx.scalar(14) / 13)
    assert step_reference(quad_data(ctx), "chebyshev") == step_chebyshev(quad_data(ctx))
    with pytest.raises(ValueError):
        step_reference(quad_data(ctx), "secant")


def test_halley_multiple_is_family_at_zero_on_f4(ctx):
    ld = local_data(builtin_model("f4", ctx), ctx.scalar("0.4"), ctx=ctx)
    a = step_halley_multiple(ld, 12)
    b = step_family_multiple(ld, 0, 12)
    assert close(ctx, a, b)


def test_basic_sequence_examples(ctx):
    ld = quad_data(ctx, 4)
    assert step_basic_sequence(ld, 3) == ctx.scalar("1.109375")
    assert step_basic_sequence(ld, 4) == ctx.scalar("1.056640625")
    assert step_basic_sequence(ld, 3) == step_chebyshev(ld)
    with pytest.raises(ValueError):
        step_basic_sequence(quad_data(ctx, 2), 4)


def test_e5_against_second_transcription(ctx, rng):
    for _ in range(10):
        text, _ = random_cubic(rng)
        x = ctx.scalar((str(rng.uniform(-3, 3)), str(rng.uniform(-1, 1))))
        ld = local_data(FunctionModel.from_text(text), x, need_order=4, ctx=ctx)
        u, a2, a3, a4 = ld.u, ld.a2, ld.a3, ld.a4
        want = x - u * (1 + u * (a2 + u * ((2 * a2 ** 2 - a3) + u * (5 * a2 ** 3 - 5 * a2 * a3 + a4))))
        assert ctx.ulps_between(step_basic_sequence(ld, 5), want, x) <= 1


def test_fourth_order_example(ctx):
    ld = quad_data(ctx, 3)
    # 2 - (3/4)(1 + (1/16)(3/4) / (1/4 - 2 (1/16)(3/4)))
    assert close(ctx, step_fourth_order(ld), ctx.scalar("1.025"))
    p = fourth_order_parameter(ld)
    assert close(ctx, step_fourth_order(ld), step_family_simple(ld, p), 1)


def test_fourth_order_needs_nonzero_a2(ctx):
    ld = local_data(FunctionModel.from_text("x - 1"), 3, need_order=3, ctx=ctx)
    with pytest.raises(UndefinedParameter):
        step_fourth_order(ld)


def test_fourth_order_slope(ctx):
    c = EvalContext(2048)
    model = FunctionModel.from_text("x^3 - 1", known_zero=1)
    trace = iterate(model, MethodSpec.fourth_order(), "1.5", SolverConfig.fixed(4), c)
    slope, _ = empirical_order_and_aec(trace)
    assert 3.9 <= slope <= 4.1


def test_degenerate_denominator(ctx):
    # 1 + (p - A2) u = 0 with u = 3/4, A2 = 1/4 at p = -13/12
    ld = quad_data(ctx)
    with pytest.raises(DegenerateStep):
        step_family_simple(ld, ctx.scalar(-13) / 12)
    # 1 - A2 u = 0 where 3x^2 = -1
    with pytest.raises(DegenerateStep):
        step_halley(local_data(QUAD, ctx.i / ctx.mp.sqrt(3), ctx=ctx))


# properties

def _corpus_points(ctx, count=5):
    for name, b in BUILTINS.items():
        model = builtin_model(name, ctx, refine=False)
        x0 = ctx.scalar(b.x0)
        for k in range(count):
            yield name, b.multiplicity, local_data(model, x0 + ctx.scalar(f"{k / 10}"), ctx=ctx)


def test_p_zero_gives_halley(ctx):
    for _, m, ld in _corpus_points(ctx):
        assert close(ctx, step_family_simple(ld, 0), step_halley(ld))
        assert ctx.ulps_between(step_family_multiple(ld, 0, m), step_halley_multiple(ld, m),
                                ld.x) <= 4


def test_m_one_reduction(ctx, rng):
    for _, _, ld in _corpus_points(ctx):
        p = ctx.scalar((str(rng.uniform(-2, 2)), str(rng.uniform(-2, 2))))
        assert close(ctx, step_family_multiple(ld, p, 1), step_family_simple(ld, p))


def test_chebyshev_coincidence(ctx):
    for _, _, ld in _corpus_points(ctx):
        assert close(ctx, step_family_simple(ld, ld.a2), step_chebyshev(ld))


def test_newton_limit(ctx):
    ld = quad_data(ctx)
    newton = step_newton(ld)
    ratios = [ctx.abs(step_family_simple(ld, p) - newton) * p for p in (10 ** 3, 10 ** 4, 10 ** 5)]
    for r in ratios[1:]:
        assert abs(r / ratios[0] - 1) < 0.01


@pytest.mark.parametrize("m", [1, 2, 5, 12])
def test_one_step_exactness(ctx, rng, m):
    for _ in range(5):
        a = f"{rng.uniform(-3, 3):.6f}"
        model = FunctionModel.from_text(f"(x - ({a}))^{m}")
        x0 = ctx.scalar((f"{rng.uniform(-3, 3):.4f}", f"{rng.uniform(-1, 1):.4f}"))
        p = ctx.scalar((f"{rng.uniform(-2, 2):.3f}", "0"))
        x1 = step_family_multiple(local_data(model, x0, ctx=ctx, multiplicity=m), p, m)
        assert ctx.abs(x1 - ctx.scalar(a)) <= ctx.mp.ldexp(ctx.abs(ctx.scalar(a)), -(ctx.precision_bits - 8))


# driver

def test_newton_iterates(ctx):
    trace = iterate(QUAD, MethodSpec.newton(), 2, SolverConfig.fixed(2), ctx)
    assert trace.iterates == [2, ctx.scalar("1.25"), ctx.scalar("1.025")]
    assert trace.status is Status.FIXED_COMPLETE
    assert len(trace.residuals) == len(trace.iterates) == len(trace.errors)


@pytest.mark.parametrize("name, p, want", [
    ("f1", -1, ("8.91e-4", "7.25e-12", "3.90e-36")),
    ("f2", 0, ("7.99e-4", "1.29e-10", "5.50e-31")),
])
def test_corpus_error_rows(ctx4096, name, p, want):
    model = builtin_model(name, ctx4096)
    method = MethodSpec.family_multiple(p, model.known_multiplicity)
    trace = iterate(model, method, BUILTINS[name].x0, SolverConfig.fixed(3), ctx4096)
    assert tuple(to_decimal_string(e, 3) for e in trace.errors[1:]) == want


@pytest.mark.parametrize("name", list(BUILTINS))
def test_cubic_slope_per_corpus_case(ctx4096, name):
    model = builtin_model(name, ctx4096)
    for p in (-2, -1, 0, 1, 2):
        method = MethodSpec.family_multiple(p, model.known_multiplicity)
        trace = iterate(model, method, BUILTINS[name].x0, SolverConfig.fixed(3), ctx4096)
        slope, _ = empirical_order_and_aec(trace.errors[1:])
        assert 2.8 <= slope <= 3.2, (name, p, slope)


def test_tolerance_mode_converges(ctx):
    trace = iterate(QUAD, MethodSpec.family_simple(Fraction(1, 2)), 3, SolverConfig(), ctx)
    assert trace.status is Status.CONVERGED
    assert trace.residuals[-1] <= SolverConfig().tolerances(ctx)[0] or \
        ctx.abs(trace.iterates[-1] - trace.iterates[-2]) <= SolverConfig().tolerances(ctx)[1]


def test_max_iterations(ctx):
    trace = iterate(QUAD, MethodSpec.newton(), 1000, SolverConfig(max_iters=3), ctx)
    assert trace.status is Status.MAX_ITERATIONS and trace.steps == 3


def test_failure_keeps_partial_trace(ctx):
    # Newton from 0 hits f'(0) = 0 on the first step
    trace = iterate(QUAD, MethodSpec.newton(), 0, SolverConfig.fixed(3), ctx)
    assert trace.failed and "SingularDerivative" in trace.reason
    assert trace.iterates == [0] and len(trace.residuals) == 1
    # evaluation failure at the starting point
    trace = iterate(FunctionModel.from_text("log(x)"), MethodSpec.newton(), 0, SolverConfig.fixed(1), ctx)
    assert trace.failed and trace.residuals == []


def test_method_spec_validation():
    with pytest.raises(ValueError):
        MethodSpec("bisection")
    with pytest.raises(ValueError):
        MethodSpec.basic_sequence(6)
    with pytest.raises(ValueError):
        MethodSpec.family_multiple(0, 0)
    with pytest.raises(ValueError):
        MethodSpec("family-simple")


def test_config_validation():
    with pytest.raises(ValueError):
        SolverConfig(max_iters=0)
    with pytest.raises(ValueError):
        SolverConfig(tol_residual=0)
    with pytest.raises(ValueError):
        SolverConfig(max_iters=2, fixed_iterations=3)


def test_step_dispatch(ctx):
    ld = quad_data(ctx, 4)
    assert step(ld, MethodSpec.basic_sequence(4), ctx) == ctx.scalar("1.056640625")
    assert close(ctx, step(ld, MethodSpec.family_simple("1"), ctx), ctx.scalar("1.16"))
    assert step(ld, MethodSpec.halley(), ctx) == step_halley(ld)
    assert isinstance(ld, LocalData)
