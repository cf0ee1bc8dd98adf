"""Closed form ``U[n] = c1*(-lambda3)**n + c2*lambda2**n + c3*lambda3**n``."""

from __future__ import annotations

from dataclasses import dataclass

from .numerics import Backend, Scalar, as_scalar, backend_of, power, render
from .recurrence import DegenerateRoots

Matrix = tuple[tuple[Scalar, Scalar, Scalar], ...]


@dataclass(frozen=True)
class BinetCoefficients:
    c1: Scalar
    c2: Scalar
    c3: Scalar

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            object.__setattr__(self, name, as_scalar(getattr(self, name)))
        backend_of(self.c1, self.c2, self.c3)

    def as_tuple(self) -> tuple[Scalar, Scalar, Scalar]:
        return self.c1, self.c2, self.c3

    @property
    def sum13(self) -> Scalar:
        return self.c1 + self.c3

    @property
    def diff31(self) -> Scalar:
        return self.c3 - self.c1

    def to_json(self) -> dict:
        return {"c1": render(self.c1), "c2": render(self.c2), "c3": render(self.c3)}


def coefficient_matrix(roots: DegenerateRoots) -> Matrix:
    """Rows are the powers 0, 1, 2 of the roots ``(-lambda3, lambda2, lambda3)``."""
    l2, l3 = roots.lambda2, roots.lambda3
    one = l3 / l3
    return (
        (one, one, one),
        (-l3, l2, l3),
        (l3 * l3, l2 * l2, l3 * l3),
    )


def invert_coefficient_matrix(roots: DegenerateRoots) -> Matrix:
    """Closed-form inverse of :func:`coefficient_matrix`, entry by entry.

    No elimination is performed; ``lambda2 != +-lambda3`` keeps every
    denominator nonzero. The middle entry is a structural zero.
    """
    l2, l3 = roots.lambda2, roots.lambda3
    zero = l3 - l3
    return (
        (l2 / (2 * (l2 + l3)), -1 / (2 * l3), 1 / (2 * l3 * l3 + 2 * l2 * l3)),
        (l3 * l3 / (l3 * l3 - l2 * l2), zero, 1 / (-l3 * l3 + l2 * l2)),
        (l2 / (2 * (l2 - l3)), 1 / (2 * l3), 1 / (2 * l3 * l3 - 2 * l2 * l3)),
    )


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(sum((a[i][k] * b[k][j] for k in range(3)), start=a[i][0] * 0) for j in range(3))
        for i in range(3)
    )


def sum13_from_initial(roots: DegenerateRoots, u0, u1, u2) -> Scalar:
    """``c1 + c3`` directly from the initial conditions."""
    l2, l3 = roots.lambda2, roots.lambda3
    return (-l2 * l2 * u0 + u2) / (l3 * l3 - l2 * l2)


def diff31_from_initial(roots: DegenerateRoots, u0, u1, u2) -> Scalar:
    """``c3 - c1`` directly from the initial conditions."""
    l2, l3 = roots.lambda2, roots.lambda3
    return (l3 * l3 * (-l2 * u0 + u1) + l2 * (-l2 * u1 + u2)) / (l3 ** 3 - l3 * l2 * l2)


def solve_coefficients(roots: DegenerateRoots, u0, u1, u2) -> BinetCoefficients:
    u = [as_scalar(u0), as_scalar(u1), as_scalar(u2)]
    backend = backend_of(roots.lambda2, roots.lambda3, *u)
    inv = invert_coefficient_matrix(roots)
    c = BinetCoefficients(*(sum(row[j] * u[j] for j in range(3)) for row in inv))

    if backend is Backend.EXACT and (
        c.sum13 != sum13_from_initial(roots, *u) or c.diff31 != diff31_from_initial(roots, *u)
    ):
        raise ArithmeticError("closed-form c1+c3 / c3-c1 disagree with the solved coefficients")
    return c


def binet_eval(roots: DegenerateRoots, c: BinetCoefficients, n: int) -> Scalar:
    """Closed-form term ``U[n]``. On floats overflow saturates to +-inf."""
    if n < 0:
        raise ValueError("n must be non-negative")
    l2, l3 = roots.lambda2, roots.lambda3
    backend_of(l2, l3, *c.as_tuple())
    # zero coefficients are skipped so 0 * inf never produces nan
    return sum(
        (ci * power(root, n) for ci, root in zip(c.as_tuple(), (-l3, l2, l3)) if ci),
        start=c.c1 * 0,
    )
