"""Exact extended nonnegative rationals.

Values are plain :class:`fractions.Fraction` objects or the singleton
:data:`INF`.  ``INF`` interoperates with ``Fraction`` and ``int`` through the
reflected operators, so ``min``, ``max``, ``sum`` and comparisons work on mixed
inputs without special casing at call sites.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union


class _Infinity:
    """The top element of the extended nonnegative reals."""

    _instance: _Infinity | None = None

    def __new__(cls) -> _Infinity:
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INF"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("qmet.INF")

    def __eq__(self, other: object) -> bool:
        return other is self

    def __lt__(self, other: object) -> bool:
        _check(other)
        return False

    def __le__(self, other: object) -> bool:
        _check(other)
        return other is self

    def __gt__(self, other: object) -> bool:
        _check(other)
        return other is not self

    def __ge__(self, other: object) -> bool:
        _check(other)
        return True

    def __add__(self, other: object) -> _Infinity:
        _check(other)
        return self

    __radd__ = __add__

    def __mul__(self, other: object) -> _Infinity:
        # 0 * inf = inf, the convention used for Lipschitz constants.
        _check(other)
        return self

    __rmul__ = __mul__


def _check(other: object) -> None:
    if not (other is INF or isinstance(other, (int, Fraction))):
        raise TypeError(f"cannot combine INF with {type(other).__name__}")


INF = _Infinity()

Ext = Union[Fraction, _Infinity]


def is_inf(x: object) -> bool:
    return x is INF


def ext(value: object) -> Ext:
    """Coerce ``value`` into an exact extended nonnegative rational.

    Accepts ``INF``, ints, Fractions, and strings such as ``"3/2"``, ``"2"``
    or ``"inf"``.  Floats are rejected on purpose.
    """
    if value is INF:
        return INF
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, Fraction):
        out = value
    elif isinstance(value, int):
        out = Fraction(value)
    elif isinstance(value, str):
        text = value.strip()
        if text.lower() in ("inf", "+inf", "infinity"):
            return INF
        if any(ch in text for ch in ".eE"):
            raise ValueError(f"decimal notation not allowed: {value!r}")
        out = Fraction(text)
    else:
        raise TypeError(f"not an exact value: {value!r}")
    if out < 0:
        raise ValueError(f"negative value: {value!r}")
    return out


def rational(value: object) -> Fraction:
    """Like :func:`ext` but finite and possibly negative."""
    if isinstance(value, bool) or value is INF:
        raise TypeError(f"not a finite rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        if any(ch in value for ch in ".eE"):
            raise ValueError(f"decimal notation not allowed: {value!r}")
        return Fraction(value.strip())
    raise TypeError(f"not an exact value: {value!r}")


def fmt(x: Ext | int) -> str:
    """Render as ``"p/q"``, ``"p"`` or ``"inf"``."""
    if x is INF:
        return "inf"
    return str(Fraction(x))


def dreal(x: Ext, y: Ext) -> Ext:
    """Truncated difference on the extended reals: ``x - y`` floored at 0."""
    if x <= y:
        return Fraction(0)
    if x is INF:
        return INF
    return x - y


def scale(alpha: Fraction | int, x: Ext) -> Ext:
    """``alpha * x`` with ``0 * inf = inf``."""
    if x is INF:
        return INF
    return Fraction(alpha) * x
