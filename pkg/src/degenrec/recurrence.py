"""Degenerated third-order recurrences: construction, classification, terms, fitting.

A recurrence ``U[n] = a1*U[n-1] + a2*U[n-2] + a3*U[n-3]`` is *degenerated*
when its characteristic roots are real, simple, and two of them are
``-lambda3`` and ``+lambda3``. With the remaining root ``lambda2`` strictly
between them the coefficients are ``(lambda2, lambda3**2, -lambda2*lambda3**2)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Sequence

from .numerics import (
    Backend,
    Scalar,
    Tolerance,
    approx_eq,
    as_scalar,
    backend_of,
    convert,
    default_tolerance,
    rational_sqrt,
    render,
    vanishes,
)


class InvalidRootsError(ValueError):
    pass


class FitError(ValueError):
    """The supplied terms do not pin down a unique order-3 recurrence."""


class SingularFitError(FitError):
    pass


class FitMismatchError(FitError):
    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


@dataclass(frozen=True)
class DegenerateRoots:
    """The root pair ``(lambda2, lambda3)``; the third root is ``-lambda3``.

    ``lambda2 == 0`` is only allowed with ``reduced_order=True``: the
    recurrence then has ``a3 == 0`` and is really of second order.
    """

    lambda2: Scalar
    lambda3: Scalar
    reduced_order: bool = False

    def __post_init__(self):
        l2, l3 = as_scalar(self.lambda2), as_scalar(self.lambda3)
        backend_of(l2, l3)
        object.__setattr__(self, "lambda2", l2)
        object.__setattr__(self, "lambda3", l3)
        if not l3 > 0:
            raise InvalidRootsError(f"lambda3 must be positive, got {render(l3)}")
        if not -l3 < l2 < l3:
            raise InvalidRootsError(
                f"need -lambda3 < lambda2 < lambda3, got lambda2={render(l2)}, lambda3={render(l3)}"
            )
        if l2 == 0 and not self.reduced_order:
            raise InvalidRootsError("lambda2 = 0 reduces the order to 2; use classify()")

    @property
    def lambda1(self) -> Scalar:
        return -self.lambda3

    @property
    def backend(self) -> Backend:
        return backend_of(self.lambda2, self.lambda3)

    def to(self, backend: Backend) -> "DegenerateRoots":
        return DegenerateRoots(
            convert(self.lambda2, backend), convert(self.lambda3, backend), self.reduced_order
        )

    def coefficients(self) -> tuple[Scalar, Scalar, Scalar]:
        l2, l3 = self.lambda2, self.lambda3
        return l2, l3 * l3, -l2 * l3 * l3


@dataclass(frozen=True)
class RecurrenceSpec:
    a1: Scalar
    a2: Scalar
    a3: Scalar
    u0: Scalar
    u1: Scalar
    u2: Scalar

    def __post_init__(self):
        for name in ("a1", "a2", "a3", "u0", "u1", "u2"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        backend_of(*self.coefficients, *self.initial)

    @property
    def coefficients(self) -> tuple[Scalar, Scalar, Scalar]:
        return self.a1, self.a2, self.a3

    @property
    def initial(self) -> tuple[Scalar, Scalar, Scalar]:
        return self.u0, self.u1, self.u2

    @property
    def backend(self) -> Backend:
        return backend_of(*self.coefficients, *self.initial)

    def to(self, backend: Backend) -> "RecurrenceSpec":
        return RecurrenceSpec(*(convert(v, backend) for v in (*self.coefficients, *self.initial)))


def make_degenerate_spec(roots: DegenerateRoots, u0, u1, u2) -> RecurrenceSpec:
    if roots.reduced_order:
        raise InvalidRootsError("reduced-order roots (lambda2 = 0) are only produced by classify()")
    return RecurrenceSpec(*roots.coefficients(), u0, u1, u2)


class Tag(str, enum.Enum):
    DEGENERATED = "Degenerated"
    DEGENERATED_REDUCED_ORDER = "DegeneratedReducedOrder"
    REPEATED_MAGNITUDE_BOUNDARY = "RepeatedMagnitudeBoundary"
    NOT_DEGENERATED = "NotDegenerated"


@dataclass(frozen=True)
class Classification:
    tag: Tag
    roots: Optional[DegenerateRoots] = None
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.tag in (Tag.DEGENERATED, Tag.DEGENERATED_REDUCED_ORDER) and self.roots is not None


def classify(a1, a2, a3, tol: Optional[Tolerance] = None) -> Classification:
    """Decide from the coefficients alone whether the recurrence is degenerated.

    The characteristic polynomial ``x^3 - a1 x^2 - a2 x - a3`` factors as
    ``(x - a1)(x^2 - a2)`` exactly when ``a3 == -a1*a2``; everything else
    follows from comparing ``a1**2`` with ``a2``. No cubic is ever solved.
    On the float backend the equalities hold within ``tol``.
    """
    a1, a2, a3 = as_scalar(a1), as_scalar(a2), as_scalar(a3)
    backend = backend_of(a1, a2, a3)
    tol = tol or default_tolerance(backend)

    if not approx_eq(a3, -a1 * a2, tol):
        return Classification(Tag.NOT_DEGENERATED, reason="a3 ≠ −a1·a2")
    if approx_eq(a1 * a1, a2, tol):
        return Classification(
            Tag.REPEATED_MAGNITUDE_BOUNDARY,
            reason="a1² = a2: the root a1 coincides with ±√a2, roots are not simple",
        )
    if not a2 > 0:
        return Classification(Tag.NOT_DEGENERATED, reason="a2 ≤ 0: the roots ±√a2 are not real and distinct")
    if a1 * a1 > a2:
        return Classification(
            Tag.NOT_DEGENERATED,
            reason="a1² > a2: the simple root a1 lies outside (−√a2, √a2)",
        )

    lambda3 = rational_sqrt(a2) if backend is Backend.EXACT else math.sqrt(a2)

    if vanishes(a1, a2 if lambda3 is None else lambda3, tol):
        roots = None if lambda3 is None else DegenerateRoots(a1 * 0, lambda3, reduced_order=True)
        reason = "a1 = a3 = 0: lambda2 = 0 and the recurrence is effectively of order 2"
        if roots is None:
            reason += "; irrational dominant root (try the float backend)"
        return Classification(Tag.DEGENERATED_REDUCED_ORDER, roots, reason)
    if lambda3 is None:
        return Classification(
            Tag.NOT_DEGENERATED,
            reason="irrational dominant root: a2 is not the square of a rational (try the float backend)",
        )
    return Classification(Tag.DEGENERATED, DegenerateRoots(a1, lambda3), reason="a3 = −a1·a2 and 0 < a1² < a2")


class Terms(tuple):
    """Tuple of terms ``U[0..n_max]`` carrying float overflow metadata.

    ``overflow_at`` is the first index holding a non-finite value, or None.
    """

    overflow_at: Optional[int]

    def __new__(cls, values):
        self = super().__new__(cls, values)
        self.overflow_at = next(
            (i for i, v in enumerate(self) if isinstance(v, float) and not math.isfinite(v)), None
        )
        return self


def iterate_terms(spec: RecurrenceSpec, n_max: int) -> Terms:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    a1, a2, a3 = spec.coefficients
    out = list(spec.initial[: n_max + 1])
    for _ in range(3, n_max + 1):
        out.append(a1 * out[-1] + a2 * out[-2] + a3 * out[-3])
    return Terms(out)


def scaled_windows(spec: RecurrenceSpec, n_max: int) -> Iterator[tuple[int, float, float, float]]:
    """Yield ``(n, U[n-2], U[n-1], U[n])`` for ``2 <= n <= n_max`` on floats.

    All three values share a common scale factor that changes from step to
    step, so only ratios within one window are meaningful. Rescaling is by
    powers of two and therefore exact.
    """
    a1, a2, a3 = (float(v) for v in spec.coefficients)
    w = [float(v) for v in spec.initial]
    for n in range(2, n_max + 1):
        if n >= 3:
            w = [w[1], w[2], a1 * w[2] + a2 * w[1] + a3 * w[0]]
            big = max(abs(v) for v in w)
            if big and math.isfinite(big):
                shift = math.frexp(big)[1]
                if shift:
                    w = [math.ldexp(v, -shift) for v in w]
        yield n, w[0], w[1], w[2]


def _det3(m) -> Scalar:
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def fit_coefficients(terms: Sequence, tol: Optional[Tolerance] = None) -> tuple[Scalar, Scalar, Scalar]:
    """Recover ``(a1, a2, a3)`` from at least six terms.

    Solves ``U[n] = a1 U[n-1] + a2 U[n-2] + a3 U[n-3]`` for n = 3, 4, 5 by
    Cramer's rule, then checks every further supplied term.
    """
    terms = [as_scalar(t) for t in terms]
    if len(terms) < 6:
        raise ValueError(f"need at least 6 terms, got {len(terms)}")
    backend = backend_of(*terms)
    tol = tol or default_tolerance(backend)

    rows = [[terms[n - 1], terms[n - 2], terms[n - 3]] for n in (3, 4, 5)]
    rhs = [terms[3], terms[4], terms[5]]
    det = _det3(rows)
    if backend is Backend.EXACT:
        singular = det == 0
    else:
        # compare against the product of row magnitudes so the test is scale-free
        scale = math.prod(max(abs(x) for x in r) for r in rows)
        singular = scale == 0 or abs(det) <= 1e-12 * scale
    if singular:
        raise SingularFitError("sequence does not determine a unique order-3 recurrence")

    coeffs = []
    for j in range(3):
        m = [r[:j] + [b] + r[j + 1 :] for r, b in zip(rows, rhs)]
        coeffs.append(_det3(m) / det)
    a1, a2, a3 = coeffs

    for n in range(6, len(terms)):
        predicted = a1 * terms[n - 1] + a2 * terms[n - 2] + a3 * terms[n - 3]
        if not approx_eq(predicted, terms[n], tol):
            raise FitMismatchError(
                f"fitted recurrence predicts {render(predicted)} at index {n}, got {render(terms[n])}", n
            )
    return a1, a2, a3


def characteristic_coefficients(spec_or_coeffs) -> tuple[Scalar, Scalar, Scalar, Scalar]:
    """Coefficients of ``x^3 - a1 x^2 - a2 x - a3``, leading term first."""
    if isinstance(spec_or_coeffs, RecurrenceSpec):
        a1, a2, a3 = spec_or_coeffs.coefficients
    else:
        a1, a2, a3 = spec_or_coeffs
    one = Fraction(1) if backend_of(a1, a2, a3) is Backend.EXACT else 1.0
    return one, -a1, -a2, -a3

