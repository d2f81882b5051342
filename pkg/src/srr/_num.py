"""Numeric helpers shared by the exact (Fraction) and float code paths."""
from fractions import Fraction
from numbers import Rational


def is_exact(*values) -> bool:
    return all(isinstance(v, Rational) for v in values)


def div(a, b):
    """``a / b`` that stays a Fraction when both operands are rational."""
    if isinstance(a, Rational) and isinstance(b, Rational):
        return Fraction(a) / b
    return a / b


def exact(v) -> Fraction:
    """Parse to an exact Fraction; strings like "0.1" mean one tenth."""
    if isinstance(v, Fraction):
        return v
    if isinstance(v, str):
        return Fraction(v.strip())
    return Fraction(v)


def coerce(v, exact_mode: bool):
    return exact(v) if exact_mode else float(v)


def fmt(v) -> str:
    """12 significant digits, used for every number written to a file or stdout."""
    return format(float(v), ".12g")
