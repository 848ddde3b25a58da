"""Step functions of the parametric third-order family and its reference methods,
plus the iteration driver.

Every step takes a :class:`~rootfamily.model.LocalData` and returns the next
iterate.  Denominators whose modulus falls below ``2**(-precision/2)`` times
the size of their terms raise :class:`DegenerateStep`; there is no damping or
fallback.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import DegenerateStep, RootFamilyError, UndefinedParameter
from .model import FunctionModel, LocalData, local_data_from_jet
from .jets import jet_eval
from .numeric import DEFAULT_CONTEXT, EvalContext

KINDS = (
    "family-simple",
    "family-multiple",
    "newton",
    "chebyshev",
    "halley",
    "halley-multiple",
    "basic-sequence",
    "fourth-order",
)


def to_scalar(value, ctx: EvalContext):
    if isinstance(value, Fraction):
        return ctx.mp.mpc(ctx.mp.mpf(value.numerator) / value.denominator)
    return ctx.scalar(value)


@dataclass(frozen=True)
class MethodSpec:
    """Which iteration to run.

    ``p`` may be any value :func:`to_scalar` accepts (number, Fraction,
    complex literal text, mpmath value) and is converted at run precision.
    """

    kind: str
    p: object = None
    m: int = 1
    k: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown method kind {self.kind!r}")
        if self.m < 1:
            raise ValueError("multiplicity m must be >= 1")
        if self.kind == "basic-sequence" and self.k not in (3, 4, 5):
            raise ValueError("basic sequence order k must be 3, 4 or 5")
        if self.kind.startswith("family") and self.p is None:
            raise ValueError("family methods need a parameter p")

    @classmethod
    def family_simple(cls, p):
        return cls("family-simple", p=p)

    @classmethod
    def family_multiple(cls, p, m: int):
        return cls("family-multiple", p=p, m=m)

    @classmethod
    def newton(cls):
        return cls("newton")

    @classmethod
    def chebyshev(cls):
        return cls("chebyshev")

    @classmethod
    def halley(cls):
        return cls("halley")

    @classmethod
    def halley_multiple(cls, m: int):
        return cls("halley-multiple", m=m)

    @classmethod
    def basic_sequence(cls, k: int):
        return cls("basic-sequence", k=k)

    @classmethod
    def fourth_order(cls):
        return cls("fourth-order")

    @property
    def need_order(self) -> int:
        if self.kind == "basic-sequence":
            return max(2, self.k - 1)
        if self.kind == "fourth-order":
            return 3
        return 2

    @property
    def label(self) -> str:
        if self.kind == "family-simple":
            return f"family(p={self.p})"
        if self.kind == "family-multiple":
            return f"family(p={self.p}, m={self.m})"
        if self.kind == "halley-multiple":
            return f"halley-multiple(m={self.m})"
        if self.kind == "basic-sequence":
            return f"E{self.k}"
        return self.kind


def _mp(ld: LocalData):
    return ld.u.context


def _check_denominator(den, terms, what):
    """Raise DegenerateStep when |den| < 2**(-prec/2) * max|terms|."""
    mp = den.context
    scale = max(abs(t) for t in terms)
    if abs(den) <= mp.ldexp(scale, -(mp.prec // 2)):
        raise DegenerateStep(f"{what} denominator {mp.nstr(den, 5)} is negligible against terms of size {mp.nstr(scale, 5)}")


# steps

def step_family_simple(ld: LocalData, p):
    """x - u(1 + p u) / (1 + (p - A2) u)."""
    mp = _mp(ld)
    p = mp.mpc(p)
    u = ld.u
    t = (p - ld.a2) * u
    den = 1 + t
    _check_denominator(den, (mp.mpf(1), t), "family")
    return ld.x - u * (1 + p * u) / den


def step_family_multiple(ld: LocalData, p, m: int):
    """x - 2 m u (1 + m p u) / (1 + m + 2 m (p - A2) u)."""
    if m < 1:
        raise ValueError("m must be >= 1")
    mp = _mp(ld)
    p = mp.mpc(p)
    u = ld.u
    t = 2 * m * (p - ld.a2) * u
    den = (1 + m) + t
    _check_denominator(den, (mp.mpf(1 + m), t), "family (multiple)")
    return ld.x - 2 * m * u * (1 + m * p * u) / den


def step_newton(ld: LocalData):
    return ld.x - ld.u


def step_chebyshev(ld: LocalData):
    return ld.x - ld.u * (1 + ld.a2 * ld.u)


def step_halley(ld: LocalData):
    mp = _mp(ld)
    t = ld.a2 * ld.u
    den = 1 - t
    _check_denominator(den, (mp.mpf(1), t), "Halley")
    return ld.x - ld.u / den


def step_halley_multiple(ld: LocalData, m: int):
    # x - u/((m+1)/(2m) - A2 u), scaled by 2m so no constant is rounded
    mp = _mp(ld)
    t = 2 * m * ld.a2 * ld.u
    den = (m + 1) - t
    _check_denominator(den, (mp.mpf(m + 1), t), "Halley (multiple)")
    return ld.x - 2 * m * ld.u / den


def step_reference(ld: LocalData, kind: str, m: int = 1):
    """Newton, Chebyshev, Halley or multiple-zero Halley step."""
    if kind == "newton":
        return step_newton(ld)
    if kind == "chebyshev":
        return step_chebyshev(ld)
    if kind == "halley":
        return step_halley(ld)
    if kind == "halley-multiple":
        return step_halley_multiple(ld, m)
    raise ValueError(f"not a reference method: {kind!r}")


def step_basic_sequence(ld: LocalData, k: int):
    """Closed forms E3, E4, E5 of the Schroeder-Traub basic sequence."""
    u, a2 = ld.u, ld.a2
    u2 = u * u
    x = ld.x - u - a2 * u2
    if k == 3:
        return x
    if k not in (4, 5):
        raise ValueError("k must be 3, 4 or 5")
    if ld.a3 is None or (k == 5 and ld.a4 is None):
        raise ValueError(f"E{k} needs A-coefficients up to order {k - 1}")
    a3 = ld.a3
    x = x - (2 * a2 * a2 - a3) * u2 * u
    if k == 4:
        return x
    return x - (5 * a2 ** 3 - 5 * a2 * a3 + ld.a4) * u2 * u2


def step_fourth_order(ld: LocalData):
    """Family member with p = (A3 - A2^2)/A2, written out.

    x - u (1 + A2^2 u / (A2 + (A3 - 2 A2^2) u))
    """
    if ld.a3 is None:
        raise ValueError("fourth-order step needs A3")
    a2, a3, u = ld.a2, ld.a3, ld.u
    if not a2:
        raise UndefinedParameter("A2 vanishes; p = (A3 - A2^2)/A2 is undefined")
    t = (a3 - 2 * a2 * a2) * u
    den = a2 + t
    _check_denominator(den, (a2, t), "fourth-order")
    return ld.x - u * (1 + a2 * a2 * u / den)


def fourth_order_parameter(ld: LocalData):
    if not ld.a2:
        raise UndefinedParameter("A2 vanishes")
    return (ld.a3 - ld.a2 * ld.a2) / ld.a2


def step(ld: LocalData, method: MethodSpec, ctx: EvalContext = DEFAULT_CONTEXT):
    kind = method.kind
    if kind == "family-simple":
        return step_family_simple(ld, to_scalar(method.p, ctx))
    if kind == "family-multiple":
        return step_family_multiple(ld, to_scalar(method.p, ctx), method.m)
    if kind == "basic-sequence":
        return step_basic_sequence(ld, method.k)
    if kind == "fourth-order":
        return step_fourth_order(ld)
    return step_reference(ld, kind, method.m)


# driver

class Status(enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max-iterations"
    FIXED_COMPLETE = "fixed-complete"
    FAILED = "failed"


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 100
    tol_residual: Optional[float] = None
    tol_step: Optional[float] = None
    fixed_iterations: Optional[int] = None

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for tol in (self.tol_residual, self.tol_step):
            if tol is not None and not tol > 0:
                raise ValueError("tolerances must be positive")
        if self.fixed_iterations is not None and not 1 <= self.fixed_iterations <= self.max_iters:
            raise ValueError("fixed_iterations must be in [1, max_iters]")

    @classmethod
    def fixed(cls, n: int):
        return cls(max_iters=n, fixed_iterations=n)

    def tolerances(self, ctx: EvalContext):
        default = ctx.mp.power(10, -ctx.mp.mpf(ctx.precision_bits) * 0.3 * 0.9)
        res = default if self.tol_residual is None else ctx.mp.mpf(self.tol_residual)
        stp = default if self.tol_step is None else ctx.mp.mpf(self.tol_step)
        return res, stp


@dataclass
class Trace:
    iterates: list
    residuals: list
    errors: Optional[list] = None
    status: Status = Status.FIXED_COMPLETE
    reason: str = ""
    method: Optional[MethodSpec] = field(default=None, compare=False)

    @property
    def steps(self) -> int:
        return len(self.iterates) - 1

    @property
    def failed(self) -> bool:
        return self.status is Status.FAILED


def iterate(model: FunctionModel, method: MethodSpec, x0, cfg: SolverConfig = SolverConfig(),
            ctx: EvalContext = DEFAULT_CONTEXT) -> Trace:
    """Run ``method`` on ``model`` from ``x0``.

    In fixed mode exactly ``cfg.fixed_iterations`` steps are taken.  Otherwise
    the run stops once ``|f(x_k)| <= tol_residual`` or
    ``|x_{k+1} - x_k| <= tol_step``, or after ``max_iters`` steps.  Step
    failures end the run with ``Status.FAILED``; the partial trace is kept.
    Jets and steps use the context's guard bits; iterates, residuals and
    errors are rounded to the working precision.
    """
    work = ctx.extended
    x = ctx.scalar(x0)
    alpha = None if model.known_zero is None else ctx.scalar(model.known_zero)
    fixed = cfg.fixed_iterations
    tol_res, tol_step = cfg.tolerances(ctx)
    order = method.need_order

    trace = Trace(iterates=[x], residuals=[], errors=[] if alpha is not None else None, method=method)

    def record(x_new, jet):
        trace.residuals.append(ctx.abs(jet[0]))
        if alpha is not None:
            trace.errors.append(ctx.abs(x_new - alpha))

    try:
        jet = jet_eval(model.expr, x, order, work)
    except RootFamilyError as exc:
        trace.status, trace.reason = Status.FAILED, f"{type(exc).__name__}: {exc}"
        return trace
    record(x, jet)

    n_steps = fixed if fixed is not None else cfg.max_iters
    trace.status = Status.FIXED_COMPLETE if fixed is not None else Status.MAX_ITERATIONS
    for _ in range(n_steps):
        if fixed is None and trace.residuals[-1] <= tol_res:
            trace.status = Status.CONVERGED
            break
        try:
            ld = local_data_from_jet(jet, x, method.m)
            x_new = ctx.scalar(step(ld, method, work))
            jet = jet_eval(model.expr, x_new, order, work)
        except RootFamilyError as exc:
            trace.status, trace.reason = Status.FAILED, f"{type(exc).__name__}: {exc}"
            return trace
        trace.iterates.append(x_new)
        record(x_new, jet)
        moved = ctx.abs(x_new - x)
        x = x_new
        if fixed is None and moved <= tol_step:
            trace.status = Status.CONVERGED
            break
    return trace


def refine_zero(model: FunctionModel, x0, m: int, ctx: EvalContext = DEFAULT_CONTEXT, max_iters: int = 200):
    """Polish an approximate zero of multiplicity ``m`` to working precision.

    Runs the multiple-zero Halley iteration until the correction stops
    shrinking (rounding noise) or the residual is exactly zero.
    """
    method = MethodSpec.halley_multiple(m)
    x = ctx.scalar(x0)
    last = None
    for _ in range(max_iters):
        jet = jet_eval(model.expr, x, 2, ctx)
        if not jet[0]:
            return x
        x_new = step(local_data_from_jet(jet, x, m), method, ctx)
        moved = ctx.abs(x_new - x)
        if last is not None and moved >= last and moved <= ctx.mp.ldexp(ctx.abs(x) + 1, -(ctx.precision_bits // 2)):
            return x
        if not moved:
            return x_new
        x, last = x_new, moved
    return x
