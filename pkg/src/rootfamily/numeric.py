"""Arbitrary-precision complex scalars bound to an evaluation context.

A :class:`EvalContext` fixes the working precision.  Scalars are mpmath
``mpc`` values created by the context's private mpmath context, so ordinary
``+ - * /`` on them already round to the context precision.  Elementary
functions go through :meth:`EvalContext.elem`, which evaluates with
``guard_bits`` extra bits via the explicit-precision ``mpmath.libmp``
kernels (no global precision is ever touched) and rounds back.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from mpmath import libmp
from mpmath.ctx_mp import MPContext

from .errors import DivisionByZero, DomainError, Overflow, ParseError

DEFAULT_PRECISION = 512
BENCH_PRECISION = 4096

_RND = libmp.round_nearest

ARITH_OPS = ("add", "sub", "mul", "div")
ELEM_FNS = ("exp", "sin", "cos", "sqrt", "log", "neg", "abs")

_COMPLEX_FNS = {
    "exp": libmp.mpc_exp,
    "sin": libmp.mpc_sin,
    "cos": libmp.mpc_cos,
    "sqrt": libmp.mpc_sqrt,
    "log": libmp.mpc_log,
}


@dataclass(frozen=True)
class EvalContext:
    """Working precision for a computation.

    Parameters
    ----------
    precision_bits : int
        Binary mantissa length of every Scalar produced under this context.
    guard_bits : int
        Extra bits used internally for elementary functions.
    """

    precision_bits: int = DEFAULT_PRECISION
    guard_bits: int = 32

    def __post_init__(self):
        if int(self.precision_bits) != self.precision_bits or self.precision_bits < 64:
            raise ValueError(f"precision_bits must be an integer >= 64, got {self.precision_bits!r}")
        if int(self.guard_bits) != self.guard_bits or self.guard_bits < 0:
            raise ValueError(f"guard_bits must be a non-negative integer, got {self.guard_bits!r}")

    @cached_property
    def mp(self) -> MPContext:
        ctx = MPContext()
        ctx.prec = self.precision_bits
        return ctx

    @cached_property
    def extended(self) -> "EvalContext":
        """Context carrying the guard bits, for intermediate results rounded back with :meth:`scalar`."""
        if not self.guard_bits:
            return self
        return EvalContext(self.precision_bits + self.guard_bits, self.guard_bits)

    @property
    def eps(self):
        """Unit roundoff 2**(1 - precision_bits) as a real Scalar."""
        return self.mp.ldexp(self.mp.mpf(1), 1 - self.precision_bits)

    @property
    def decimal_digits(self) -> int:
        """Significant decimal digits that round-trip a Scalar."""
        return math.ceil(self.precision_bits * math.log10(2)) + 1

    # construction

    def scalar(self, value) -> "Scalar":
        """Coerce ``value`` (number, mpmath number, pair, or complex literal text) to a Scalar."""
        if isinstance(value, str):
            return parse_complex(value, self)
        if isinstance(value, tuple):
            re_, im_ = value
            return self.mp.mpc(self.mp.mpf(re_), self.mp.mpf(im_))
        return self.mp.mpc(value)

    def real(self, value):
        return self.mp.mpf(value)

    @cached_property
    def pi(self):
        return self.mp.mpc(self.mp.pi)

    @cached_property
    def i(self):
        return self.mp.mpc(0, 1)

    def zero(self):
        return self.mp.mpc(0)

    def one(self):
        return self.mp.mpc(1)

    # operations

    def arith(self, a, b, op: str):
        """Rounded complex ``a <op> b`` with error signalling."""
        if op == "add":
            r = a + b
        elif op == "sub":
            r = a - b
        elif op == "mul":
            r = a * b
        elif op == "div":
            if not b:
                raise DivisionByZero("division by a zero Scalar")
            r = a / b
        else:
            raise ValueError(f"unknown arithmetic op {op!r}")
        return self._checked(r)

    def elem(self, x, fn: str):
        """Elementary function ``fn`` at ``x`` (principal branches)."""
        if fn == "neg":
            return -x
        if fn == "abs":
            return self.abs(x)
        try:
            kernel = _COMPLEX_FNS[fn]
        except KeyError:
            raise ValueError(f"unknown elementary function {fn!r}") from None
        if fn == "log" and not x:
            raise DomainError("log of zero")
        z = self.mp.mpc(x)._mpc_
        wp = self.precision_bits + self.guard_bits
        r = libmp.mpc_pos(kernel(z, wp, _RND), self.precision_bits, _RND)
        return self._checked(self.mp.make_mpc(r))

    def abs(self, x):
        """|x| as a real Scalar; libmp's hypot scales to avoid overflow."""
        return self._checked(self.mp.make_mpf(libmp.mpc_abs(self.mp.mpc(x)._mpc_, self.precision_bits, _RND)))

    def _checked(self, r):
        mp = self.mp
        for part in (r.real, r.imag):
            if mp.isnan(part):
                raise Overflow("result is not a number")
            if mp.isinf(part):
                raise Overflow("exponent range exceeded")
        return r

    # comparisons in units of the last place

    def ulp_scale(self, *values):
        """One ulp relative to the largest magnitude among ``values``."""
        mag = max((self.abs(v) for v in values), default=self.mp.mpf(0))
        return self.eps * mag

    def ulps_between(self, a, b, *scale_values):
        """|a - b| in ulps of max(|a|, |b|, |scale_values|...)."""
        scale = self.ulp_scale(a, b, *scale_values)
        diff = self.abs(self.mp.mpc(a) - self.mp.mpc(b))
        if not diff:
            return self.mp.mpf(0)
        if not scale:
            return self.mp.inf
        return diff / scale


Scalar = object  # mpmath mpc (or mpf for real-valued results) created by an EvalContext
RealLike = Union[int, float, str]

DEFAULT_CONTEXT = EvalContext()


def _render_real(x, sig_digits: int) -> str:
    if not x:
        body = "0" if sig_digits == 1 else "0." + "0" * (sig_digits - 1)
        return body + "e0"
    text = libmp.to_str(x._mpf_, sig_digits, strip_zeros=False, min_fixed=1, max_fixed=0,
                        show_zero_exponent=True)
    mantissa, _, exponent = text.partition("e")
    if mantissa.endswith("."):
        mantissa = mantissa[:-1]
    return f"{mantissa}e{int(exponent)}"


def to_decimal_string(x, sig_digits: int) -> str:
    """Render ``x`` as ``m.mm...e±h`` with ``sig_digits`` significant digits.

    Complex values render as ``re+imi`` / ``re-imi``; values with a zero
    imaginary part render as plain reals.

    >>> to_decimal_string(DEFAULT_CONTEXT.scalar("-2+1i"), 3)
    '-2.00e0+1.00e0i'
    """
    if sig_digits < 1:
        raise ValueError("sig_digits must be >= 1")
    re_, im_ = x.real, x.imag
    out = _render_real(re_, sig_digits)
    if im_:
        im_text = _render_real(im_, sig_digits)
        if not im_text.startswith("-"):
            im_text = "+" + im_text
        out += im_text + "i"
    return out


_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(
    rf"""^\s*(?:
        (?P<re>[+-]?{_NUM})(?:(?P<isign>[+-])(?P<im>{_NUM})?\s*i)? |
        (?P<pure>[+-]?(?:{_NUM})?)\s*i
    )\s*$""",
    re.VERBOSE,
)


def parse_complex(text: str, ctx: EvalContext = DEFAULT_CONTEXT):
    """Parse ``a``, ``ai``, ``a+bi`` or ``a-bi`` into a Scalar of ``ctx``.

    Components are decimal or scientific literals, converted with correct
    rounding at the context precision.
    """
    m = _COMPLEX_RE.match(text)
    if not m:
        raise ParseError(f"invalid complex literal {text!r}", 0, "a, ai, a+bi or a-bi")
    mp = ctx.mp
    if m.group("pure") is not None:
        coef = m.group("pure")
        if coef in ("", "+"):
            coef = "1"
        elif coef == "-":
            coef = "-1"
        return mp.mpc(0, mp.mpf(coef))
    re_ = mp.mpf(m.group("re"))
    if m.group("isign") is None:
        return mp.mpc(re_)
    im_ = mp.mpf(m.group("im") or "1")
    if m.group("isign") == "-":
        im_ = -im_
    return mp.mpc(re_, im_)
