"""High-precision one-parameter family of cubically convergent root finders."""

from .numeric import DEFAULT_CONTEXT, EvalContext, parse_complex, to_decimal_string

__version__ = "0.1.0"
