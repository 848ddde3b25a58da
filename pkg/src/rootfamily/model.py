"""Function models, per-point iteration data, and the built-in test corpus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import SingularDerivative, ZeroResidual
from .expr import Expr, parse_expression
from .jets import jet_eval
from .numeric import DEFAULT_CONTEXT, EvalContext


@dataclass(frozen=True)
class FunctionModel:
    expr: Expr
    known_zero: Optional[object] = None
    known_multiplicity: Optional[int] = None
    label: str = ""

    def __post_init__(self):
        if self.known_multiplicity is not None and self.known_multiplicity < 1:
            raise ValueError("known_multiplicity must be a positive integer")

    @classmethod
    def from_text(cls, text: str, known_zero=None, known_multiplicity=None, label=None):
        return cls(parse_expression(text), known_zero, known_multiplicity, label if label is not None else text)

    def jet(self, x, order: int, ctx: EvalContext = DEFAULT_CONTEXT):
        return jet_eval(self.expr, x, order, ctx)

    def value(self, x, ctx: EvalContext = DEFAULT_CONTEXT):
        return jet_eval(self.expr, x, 0, ctx)[0]


@dataclass(frozen=True)
class LocalData:
    """Quantities at one point consumed by the step formulas.

    ``u = f/f'`` and ``a<k> = f^(k) / (k! f')``.  ``v`` and ``d2`` are the
    multiple-zero analogues obtained from ``F = f^(1/m)``; for ``m = 1`` they
    coincide with ``u`` and ``a2``.  ``f`` and ``df`` are kept so callers can
    read the residual without another evaluation.
    """

    x: object
    f: object
    df: object
    u: object
    a2: object
    a3: Optional[object] = None
    a4: Optional[object] = None
    v: Optional[object] = None
    d2: Optional[object] = None
    m: int = 1


def local_data_from_jet(jet, x, m: int = 1, need_d2: bool = False) -> LocalData:
    c = jet.coeffs
    f, df = c[0], c[1]
    if not df:
        raise SingularDerivative(f"f'(x) vanishes at x = {x}")
    u = f / df
    a = [None, None] + [c[k] / df for k in range(2, len(c))]
    a2 = a[2]
    a3 = a[3] if len(c) > 3 else None
    a4 = a[4] if len(c) > 4 else None
    if m == 1:
        v, d2 = u, a2
    else:
        v = m * u
        if f:
            ddf = 2 * c[2]
            d2 = ((1 - m) * df * df + m * f * ddf) / (2 * m * f * df)
        elif need_d2:
            raise ZeroResidual(f"f(x) vanishes at x = {x}; d2 is undefined")
        else:
            d2 = None
    return LocalData(x=x, f=f, df=df, u=u, a2=a2, a3=a3, a4=a4, v=v, d2=d2, m=m)


def local_data(model: FunctionModel, x, need_order: int = 2, ctx: EvalContext = DEFAULT_CONTEXT,
               multiplicity: Optional[int] = None, need_d2: bool = False) -> LocalData:
    """Evaluate ``u``, ``A2`` (and ``A3``, ``A4`` for higher ``need_order``) at ``x``.

    ``multiplicity`` defaults to the model's known multiplicity.  With
    ``need_d2`` a vanishing residual raises :class:`ZeroResidual` instead of
    leaving ``d2`` unset.  The jet is evaluated with the context's guard bits,
    so the quantities carry ``ctx.extended`` precision.
    """
    if need_order not in (2, 3, 4):
        raise ValueError("need_order must be 2, 3 or 4")
    m = multiplicity or model.known_multiplicity or 1
    x = ctx.scalar(x)
    return local_data_from_jet(jet_eval(model.expr, x, need_order, ctx.extended), x, m, need_d2)


# built-in corpus

@dataclass(frozen=True)
class BuiltinFunction:
    name: str
    text: str
    multiplicity: int
    x0: str
    alpha: str
    refine_alpha: bool = False


BUILTINS = {
    "f1": BuiltinFunction("f1", "(x*sin(x) - 2*sin(x/sqrt(2))^2) * (x^5 + x^2 + 100)", 6, "-1.2", "0"),
    "f2": BuiltinFunction("f2", "(x*exp(x^2) - sin(x)^2 + 3*cos(x) + 5)^2", 2, "-1", "-1.2076478271309",
                          refine_alpha=True),
    # second factor: sin^2(x + 2 - i)
    "f3": BuiltinFunction("f3", "(exp(x^2 + 4*x + 5) - 1)^3 * sin(x + 2 - i)^2", 5, "-1.7+0.8i", "-2+i"),
    "f4": BuiltinFunction("f4", "(x - sin(x))^4", 12, "0.4", "0"),
}

# base of f2 before squaring; it has a simple zero at the same point
G2_TEXT = "x*exp(x^2) - sin(x)^2 + 3*cos(x) + 5"


def builtin_model(name: str, ctx: EvalContext = DEFAULT_CONTEXT, refine: bool = True) -> FunctionModel:
    """Model for a corpus function with its multiplicity and zero.

    For entries whose tabulated zero is truncated (f2) the zero is refined to
    the working precision unless ``refine`` is false.
    """
    try:
        b = BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown built-in function {name!r}; choose from {', '.join(BUILTINS)}") from None
    model = FunctionModel.from_text(b.text, ctx.scalar(b.alpha), b.multiplicity, b.name)
    if b.refine_alpha and refine:
        from .solvers import refine_zero

        alpha = refine_zero(model, ctx.scalar(b.alpha), b.multiplicity, ctx)
        model = FunctionModel(model.expr, alpha, b.multiplicity, b.name)
    return model
