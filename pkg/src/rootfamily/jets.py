"""Truncated Taylor jets and their propagation through expression trees.

A jet of order N at a point x0 holds the Taylor coefficients
``c_k = f^(k)(x0) / k!`` for ``k = 0..N``.  Arithmetic follows the usual
recurrences: Cauchy products, series division, and the ODE-derived
recurrences for exp, log, sin/cos and sqrt.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .errors import DivisionByZero, DomainError, EvaluationError, NonIntegerExponent, NumericError
from .expr import Binary, Const, Expr, Unary, Var, contains_var, integer_exponent
from .numeric import DEFAULT_CONTEXT, EvalContext

MAX_ORDER = 32


@dataclass(frozen=True)
class Jet:
    coeffs: tuple

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k):
        return self.coeffs[k]

    def derivative(self, k: int):
        """f^(k)(x0) = k! c_k."""
        return self.coeffs[k] * factorial(k)

    def derivatives(self):
        return [self.derivative(k) for k in range(len(self.coeffs))]


def constant(c, order: int, ctx: EvalContext = DEFAULT_CONTEXT) -> Jet:
    zero = ctx.zero()
    return Jet((ctx.scalar(c),) + (zero,) * order)


def variable(x, order: int, ctx: EvalContext = DEFAULT_CONTEXT) -> Jet:
    zero = ctx.zero()
    head = (ctx.scalar(x), ctx.one())[: order + 1]
    return Jet(head + (zero,) * (order + 1 - len(head)))


# coefficient-list kernels; all inputs share one order

def _add(a, b):
    return [x + y for x, y in zip(a, b)]


def _sub(a, b):
    return [x - y for x, y in zip(a, b)]


def _neg(a):
    return [-x for x in a]


def _mul(a, b):
    n = len(a)
    return [sum((a[j] * b[k - j] for j in range(1, k + 1)), a[0] * b[k]) for k in range(n)]


def _div(a, b):
    if not b[0]:
        raise DivisionByZero("division by a series with zero constant term")
    q = []
    for k in range(len(a)):
        acc = a[k]
        for j in range(1, k + 1):
            acc -= b[j] * q[k - j]
        q.append(acc / b[0])
    return q


def _exp(a, ctx):
    e = [ctx.elem(a[0], "exp")]
    for k in range(1, len(a)):
        e.append(sum((j * a[j] * e[k - j] for j in range(1, k + 1)), ctx.zero()) / k)
    return e


def _log(a, ctx):
    if not a[0]:
        raise DomainError("log of zero")
    out = [ctx.elem(a[0], "log")]
    for k in range(1, len(a)):
        acc = a[k] - sum((j * out[j] * a[k - j] for j in range(1, k)), ctx.zero()) / k
        out.append(acc / a[0])
    return out


def _sincos(a, ctx):
    s = [ctx.elem(a[0], "sin")]
    c = [ctx.elem(a[0], "cos")]
    for k in range(1, len(a)):
        s.append(sum((j * a[j] * c[k - j] for j in range(1, k + 1)), ctx.zero()) / k)
        c.append(-sum((j * a[j] * s[k - j] for j in range(1, k + 1)), ctx.zero()) / k)
    return s, c


def _sqrt(a, ctx):
    r = [ctx.elem(a[0], "sqrt")]
    if len(a) > 1 and not r[0]:
        raise DomainError("sqrt is not differentiable at zero")
    for k in range(1, len(a)):
        acc = a[k] - sum((r[j] * r[k - j] for j in range(1, k)), ctx.zero())
        r.append(acc / (2 * r[0]))
    return r


def _ipow(a, n, ctx):
    if n < 0:
        one = [ctx.one()] + [ctx.zero()] * (len(a) - 1)
        a = _div(one, a)
        n = -n
    result = None
    base = a
    while n:
        if n & 1:
            result = base if result is None else _mul(result, base)
        n >>= 1
        if n:
            base = _mul(base, base)
    if result is None:
        return [ctx.one()] + [ctx.zero()] * (len(a) - 1)
    return result


@lru_cache(maxsize=None)
def _int_exp(expr):
    return integer_exponent(expr)


def _const_value(literal: str, ctx: EvalContext):
    if literal == "pi":
        return ctx.pi
    if literal == "i":
        return ctx.i
    return ctx.mp.mpc(ctx.mp.mpf(literal))


def _eval(node: Expr, x, n: int, ctx: EvalContext):
    if isinstance(node, Var):
        return list(variable(x, n - 1, ctx).coeffs)
    if isinstance(node, Const):
        return [_const_value(node.literal, ctx)] + [ctx.zero()] * (n - 1)
    try:
        if isinstance(node, Unary):
            a = _eval(node.arg, x, n, ctx)
            op = node.op
            if op == "neg":
                return _neg(a)
            if op == "exp":
                return _exp(a, ctx)
            if op == "log":
                return _log(a, ctx)
            if op == "sqrt":
                return _sqrt(a, ctx)
            if op == "sin":
                return _sincos(a, ctx)[0]
            if op == "cos":
                return _sincos(a, ctx)[1]
            raise ValueError(f"unknown unary op {op!r}")
        if isinstance(node, Binary):
            op = node.op
            a = _eval(node.left, x, n, ctx)
            if op == "pow":
                k = _int_exp(node.right)
                if k is not None:
                    return _ipow(a, k, ctx)
                if contains_var(node.left):
                    raise NonIntegerExponent("non-integer exponent on an x-dependent base", 0, "an integer exponent")
                # constant base, general exponent: exp(e * log b) on the principal branch
                b = _eval(node.right, x, n, ctx)
                return _exp(_mul(b, _log(a, ctx)), ctx)
            b = _eval(node.right, x, n, ctx)
            if op == "add":
                return _add(a, b)
            if op == "sub":
                return _sub(a, b)
            if op == "mul":
                return _mul(a, b)
            if op == "div":
                return _div(a, b)
            raise ValueError(f"unknown binary op {op!r}")
    except NumericError as exc:
        raise EvaluationError(exc, node) from exc
    raise TypeError(f"not an expression node: {node!r}")


def jet_eval(expr: Expr, x, order: int, ctx: EvalContext = DEFAULT_CONTEXT) -> Jet:
    """Taylor coefficients of ``expr`` at ``x`` up to ``order``.

    Raises
    ------
    EvaluationError
        Wrapping ``DivisionByZero``/``DomainError`` with the failing subtree.
    """
    if not 0 <= order <= MAX_ORDER:
        raise ValueError(f"order must be in [0, {MAX_ORDER}], got {order}")
    x = ctx.scalar(x)
    coeffs = _eval(expr, x, order + 1, ctx)
    for c in coeffs:
        ctx._checked(c)
    return Jet(tuple(coeffs))


def evaluate(expr: Expr, x, ctx: EvalContext = DEFAULT_CONTEXT):
    """Plain value f(x)."""
    return jet_eval(expr, x, 0, ctx)[0]
