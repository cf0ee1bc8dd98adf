"""Scalar backends shared by the whole package.

Two backends exist. ``exact`` values are :class:`fractions.Fraction`
(unbounded integers, always in lowest terms). ``float`` values are plain
64-bit Python floats. Plain ``int`` inputs are promoted to the exact backend.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

Scalar = Union[Fraction, float]


class Backend(str, enum.Enum):
    EXACT = "exact"
    FLOAT = "float"


class ScalarParseError(ValueError):
    """Raised for text that is not a valid scalar literal."""


class MixedBackendError(TypeError):
    """Raised when exact and float values meet in one computation."""


@dataclass(frozen=True)
class Tolerance:
    relative: float = 0.0
    absolute: float = 0.0

    def __post_init__(self):
        if not (self.relative >= 0 and self.absolute >= 0):
            raise ValueError("tolerances must be non-negative")


EXACT = Tolerance(0.0, 0.0)
DEFAULT_FLOAT = Tolerance(1e-9, 1e-12)


def default_tolerance(backend: Backend) -> Tolerance:
    return EXACT if Backend(backend) is Backend.EXACT else DEFAULT_FLOAT


def as_scalar(x) -> Scalar:
    """Promote ``int`` to ``Fraction``; pass Fractions and floats through."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        return x
    raise TypeError(f"unsupported scalar type: {type(x).__name__}")


def backend_of(*values) -> Backend:
    """Return the common backend of ``values``.

    Raises :class:`MixedBackendError` if exact and float values are mixed.
    """
    seen = set()
    for v in values:
        v = as_scalar(v)
        seen.add(Backend.FLOAT if isinstance(v, float) else Backend.EXACT)
    if len(seen) > 1:
        raise MixedBackendError("exact and float scalars mixed in one computation")
    return seen.pop() if seen else Backend.EXACT


def convert(x, backend: Backend) -> Scalar:
    """Move a scalar to ``backend``; floats become their exact binary value."""
    x = as_scalar(x)
    if Backend(backend) is Backend.FLOAT:
        return float(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"{x!r} has no exact representation")
        return Fraction(x)
    return x


def parse_scalar(text: str, backend: Backend = Backend.EXACT) -> Scalar:
    """Parse ``"p/q"``, an integer, or a decimal literal.

    On the exact backend decimals are read exactly (``"0.1"`` is ``1/10``).
    On the float backend ``"p/q"`` is computed exactly and then rounded once
    to the nearest double.

    >>> parse_scalar("6/4")
    Fraction(3, 2)
    >>> parse_scalar("0.5", Backend.FLOAT)
    0.5
    """
    backend = Backend(backend)
    s = text.strip()
    if not s:
        raise ScalarParseError("empty scalar literal")
    if "/" in s:
        num, _, den = s.partition("/")
        try:
            p, q = int(num), int(den)
        except ValueError:
            raise ScalarParseError(f"malformed fraction {text!r}") from None
        if q == 0:
            raise ScalarParseError(f"zero denominator in {text!r}")
        value = Fraction(p, q)
        return value if backend is Backend.EXACT else float(value)
    if backend is Backend.FLOAT:
        try:
            return float(s)
        except ValueError:
            raise ScalarParseError(f"malformed scalar {text!r}") from None
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        raise ScalarParseError(f"malformed scalar {text!r}") from None


def render(x) -> str:
    """Textual form: ``p/q`` (``p`` when q = 1) or a 17-significant-digit float."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return format(x, ".17g")


def render_optional(x) -> Optional[str]:
    return None if x is None else render(x)


def approx_eq(a, b, tol: Optional[Tolerance] = None) -> bool:
    """Equality under the backend's policy.

    Exact scalars compare exactly whatever ``tol`` says. Floats pass when
    ``|a - b| <= absolute + relative * max(|a|, |b|)``.
    """
    backend = backend_of(a, b)
    if backend is Backend.EXACT:
        return as_scalar(a) == as_scalar(b)
    tol = tol or DEFAULT_FLOAT
    a, b = float(a), float(b)
    if a == b:
        return True
    return abs(a - b) <= tol.absolute + tol.relative * max(abs(a), abs(b))


def vanishes(x, scale=0.0, tol: Optional[Tolerance] = None) -> bool:
    """True when ``x`` is zero: exactly, or within ``tol`` relative to ``scale``."""
    x = as_scalar(x)
    if isinstance(x, Fraction):
        return x == 0
    tol = tol or DEFAULT_FLOAT
    return abs(x) <= tol.absolute + tol.relative * abs(float(scale))


def rational_sqrt(q) -> Optional[Fraction]:
    """Exact square root of a non-negative rational, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn != n or rd * rd != d:
        return None
    return Fraction(rn, rd)


def power(x: Scalar, n: int) -> Scalar:
    """``x ** n`` that saturates to a signed infinity instead of raising on float overflow."""
    try:
        return x ** n
    except OverflowError:
        negative = x < 0 and n % 2 == 1
        return -math.inf if negative else math.inf


def max_abs(values: Iterable) -> Scalar:
    return max((abs(v) for v in values), default=0)
