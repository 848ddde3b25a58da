"""Convergence analytics: COC, order-slope fits and asymptotic error constants."""

from __future__ import annotations

import statistics
from dataclasses import dataclass
from typing import Sequence

from .errors import InsufficientData, MultiplicityMismatch, NotASimpleZero, UndefinedCOC
from .jets import jet_eval
from .model import FunctionModel
from .numeric import DEFAULT_CONTEXT, EvalContext
from .solvers import Trace, to_scalar


def coc(residuals: Sequence) -> object:
    """Computational order of convergence from three consecutive ``|f(x_k)|``.

    ``log|f(x_{k+1})/f(x_k)| / log|f(x_k)/f(x_{k-1})|``, returned at the
    precision of the inputs.
    """
    if len(residuals) != 3:
        raise ValueError("coc needs exactly three residuals")
    r0, r1, r2 = residuals
    if not (r0 > 0 and r1 > 0 and r2 > 0):
        raise UndefinedCOC("a residual is zero (exact convergence)")
    if not (r0 > r1 > r2):
        raise UndefinedCOC("residuals are not strictly decreasing")
    mp = r0.context if hasattr(r0, "context") else DEFAULT_CONTEXT.mp
    r0, r1, r2 = mp.mpf(r0), mp.mpf(r1), mp.mpf(r2)
    return mp.log(r2 / r1) / mp.log(r1 / r0)


def trace_coc(trace: Trace):
    """COC from the last three residuals of a run."""
    if len(trace.residuals) < 3:
        raise UndefinedCOC("fewer than three residuals")
    return coc(trace.residuals[-3:])


def format_rc(value) -> str:
    return f"{float(value):.3f}"


@dataclass(frozen=True)
class AecPrediction:
    value: object
    ingredients: dict


def _vanishes(c, scale, ctx: EvalContext) -> bool:
    return abs(c) <= ctx.mp.ldexp(scale, -(ctx.precision_bits // 2))


def zero_structure(model: FunctionModel, alpha, m: int, ctx: EvalContext = DEFAULT_CONTEXT, extra: int = 2):
    """Taylor coefficients at ``alpha`` up to ``m + extra``, checked for a zero of multiplicity ``m``.

    Coefficients below ``2**(-prec/2)`` of the largest one count as zero.
    """
    jet = jet_eval(model.expr, alpha, m + extra, ctx)
    c = jet.coeffs
    scale = max(abs(v) for v in c)
    if not scale:
        raise MultiplicityMismatch("all Taylor coefficients vanish at alpha")
    for j in range(m):
        if not _vanishes(c[j], scale, ctx):
            raise MultiplicityMismatch(f"coefficient c_{j} = {ctx.mp.nstr(c[j], 5)} does not vanish; "
                                       f"alpha is not a zero of multiplicity {m}")
    if _vanishes(c[m], scale, ctx):
        raise MultiplicityMismatch(f"coefficient c_{m} vanishes; multiplicity exceeds {m}")
    return c


def predicted_aec_simple(model: FunctionModel, alpha, p, ctx: EvalContext = DEFAULT_CONTEXT) -> AecPrediction:
    """|A2(a)^2 - A3(a) + p A2(a)| at a simple zero ``a``."""
    try:
        c = zero_structure(model, ctx.scalar(alpha), 1, ctx)
    except MultiplicityMismatch as exc:
        raise NotASimpleZero(str(exc)) from exc
    a2, a3 = c[2] / c[1], c[3] / c[1]
    p = to_scalar(p, ctx)
    return AecPrediction(ctx.abs(a2 * a2 - a3 + p * a2), {"A2": a2, "A3": a3})


def predicted_aec_multiple(model: FunctionModel, alpha, p, m: int,
                           ctx: EvalContext = DEFAULT_CONTEXT) -> AecPrediction:
    """Asymptotic error constant of the multiple-zero family at a zero of multiplicity ``m``.

    |p B_{m+1}/(m B_m) - B_{m+2}/(m B_m) + (m+1) B_{m+1}^2 / (2 m^2 B_m^2)|
    with ``B_r = f^(r)(a)/r!``, i.e. the Taylor coefficients at the zero.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    c = zero_structure(model, ctx.scalar(alpha), m, ctx)
    bm, bm1, bm2 = c[m], c[m + 1], c[m + 2]
    p = to_scalar(p, ctx)
    c1, c2 = bm1 / bm, bm2 / bm
    value = ctx.abs(p * c1 / m - c2 / m + (m + 1) * c1 * c1 / (2 * m * m))
    return AecPrediction(value, {f"B{m}": bm, f"B{m + 1}": bm1, f"B{m + 2}": bm2})


def _decreasing_prefix(errors):
    out = []
    for e in errors:
        if not e > 0 or (out and not e < out[-1]):
            break
        out.append(e)
    return out


def empirical_order_and_aec(trace_or_errors, theoretical_orders=(1, 2, 3, 4, 5)):
    """Fit the convergence order and estimate the error constant from ``|x_k - a|``.

    The order is the least-squares slope of ``log e_{k+1}`` against
    ``log e_k`` over the leading strictly decreasing positive errors.  The
    constant is ``e_n / e_{n-1}**q`` from the last pair, ``q`` being the
    theoretical order nearest the fitted slope.

    Returns ``(order_slope, aec_estimate)``.
    """
    errors = trace_or_errors.errors if isinstance(trace_or_errors, Trace) else list(trace_or_errors)
    if errors is None:
        raise InsufficientData("trace carries no errors (no known zero)")
    errs = _decreasing_prefix(errors)
    if len(errs) < 3:
        raise InsufficientData("need at least three strictly decreasing positive errors")
    mp = errs[0].context if hasattr(errs[0], "context") else DEFAULT_CONTEXT.mp
    errs = [mp.mpf(e) for e in errs]
    logs = [float(mp.log(e)) for e in errs]
    slope, _ = statistics.linear_regression(logs[:-1], logs[1:])
    q = min(theoretical_orders, key=lambda r: abs(r - slope))
    aec = errs[-1] / errs[-2] ** q
    return slope, aec
