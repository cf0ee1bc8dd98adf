"""Choosing ``u2`` so that the consecutive-ratio limit exists.

Equating the even and odd limits gives a quadratic in ``u2`` with two roots.
The first kills the ``+lambda3`` component (ratio tends to ``-lambda3``), the
second kills the ``-lambda3`` component (ratio tends to ``+lambda3``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

from .numerics import Scalar, Tolerance, approx_eq, as_scalar, backend_of, default_tolerance, render
from .recurrence import DegenerateRoots


class LimitKind(str, enum.Enum):
    MINUS_LAMBDA3 = "minus_lambda3"
    PLUS_LAMBDA3 = "plus_lambda3"
    LAMBDA2 = "lambda2"
    NONE = "none"
    ZERO_SEQUENCE = "zero_sequence"


@dataclass(frozen=True)
class ConvergenceSolutions:
    u2_first: Scalar
    u2_second: Scalar
    coincident: bool

    def to_json(self) -> dict:
        return {
            "u2_first": render(self.u2_first),
            "u2_second": render(self.u2_second),
            "coincident": self.coincident,
        }


def u2_solutions(roots: DegenerateRoots, u0, u1, tol: Optional[Tolerance] = None) -> ConvergenceSolutions:
    u0, u1 = as_scalar(u0), as_scalar(u1)
    l2, l3 = roots.lambda2, roots.lambda3
    tol = tol or default_tolerance(backend_of(l2, l3, u0, u1))
    first = l2 * l3 * u0 + (l2 - l3) * u1
    second = -l2 * l3 * u0 + (l2 + l3) * u1
    return ConvergenceSolutions(first, second, approx_eq(first, second, tol))


def quadratic_residual(roots: DegenerateRoots, u0, u1, u2) -> Scalar:
    """Left minus right side of the equal-limits condition; zero on both branches."""
    l2, l3 = roots.lambda2, roots.lambda3
    lhs = l3 * l3 * (l2 * l2 * u0 - u2) ** 2
    rhs = (l3 * l3 * (l2 * u0 - u1) + l2 * (l2 * u1 - u2)) ** 2
    return lhs - rhs


def converged_limit(roots: DegenerateRoots, u0, u1, u2, tol: Optional[Tolerance] = None) -> LimitKind:
    u0, u1, u2 = as_scalar(u0), as_scalar(u1), as_scalar(u2)
    tol = tol or default_tolerance(backend_of(roots.lambda2, roots.lambda3, u0, u1, u2))
    if u0 == 0 and u1 == 0 and u2 == 0:
        return LimitKind.ZERO_SEQUENCE
    sol = u2_solutions(roots, u0, u1, tol)
    if sol.coincident:
        # u1 = lambda2*u0 and u2 on the shared branch value leave only the lambda2 term
        return LimitKind.LAMBDA2 if approx_eq(u2, sol.u2_first, tol) else LimitKind.NONE
    if approx_eq(u2, sol.u2_first, tol):
        return LimitKind.MINUS_LAMBDA3
    if approx_eq(u2, sol.u2_second, tol):
        return LimitKind.PLUS_LAMBDA3
    return LimitKind.NONE


def limit_value(roots: DegenerateRoots, kind: LimitKind) -> Optional[Scalar]:
    return {
        LimitKind.MINUS_LAMBDA3: -roots.lambda3,
        LimitKind.PLUS_LAMBDA3: roots.lambda3,
        LimitKind.LAMBDA2: roots.lambda2,
    }.get(kind)
