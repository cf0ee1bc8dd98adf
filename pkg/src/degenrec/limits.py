"""Parity-split ratio limits, their identities, and empirical estimates.

Because the two dominant roots are ``+lambda3`` and ``-lambda3``, the ratio
``U[n]/U[n-1]`` generally has one limit along even ``n`` (``L1``) and another
along odd ``n`` (``L2``). Their product is always ``lambda3**2`` while their
quotient ``gamma**2`` depends on the initial conditions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

from .binet import BinetCoefficients, solve_coefficients
from .numerics import (
    Backend,
    Scalar,
    Tolerance,
    approx_eq,
    as_scalar,
    backend_of,
    default_tolerance,
    render_optional,
    render,
    vanishes,
    DEFAULT_FLOAT,
)
from .recurrence import DegenerateRoots, RecurrenceSpec, scaled_windows


class Regime(str, enum.Enum):
    PARITY_OSCILLATING = "ParityOscillating"
    CONVERGENT_MINUS = "ConvergentMinus"
    CONVERGENT_PLUS = "ConvergentPlus"
    GEOMETRIC_LAMBDA2 = "GeometricLambda2"
    ZERO_SEQUENCE = "ZeroSequence"


class VanishingSequenceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class LimitReport:
    """Analytic limits. ``None`` marks a limit that does not exist.

    ``ratio_limit`` is the single limit of ``U[n]/U[n-1]`` when the two
    parities agree (``-lambda3``, ``+lambda3`` or ``lambda2``), else None.
    """

    L1: Optional[Scalar]
    L2: Optional[Scalar]
    gamma: Optional[Scalar]
    lambda3_squared: Scalar
    gamma_squared: Optional[Scalar]
    regime: Regime
    ratio_limit: Optional[Scalar] = None

    def to_json(self) -> dict:
        return {
            "L1": render_optional(self.L1),
            "L2": render_optional(self.L2),
            "gamma": render_optional(self.gamma),
            "lambda3_squared": render(self.lambda3_squared),
            "gamma_squared": render_optional(self.gamma_squared),
            "regime": self.regime.value,
            "ratio_limit": render_optional(self.ratio_limit),
        }


def _is_zero(x, c: BinetCoefficients, tol) -> bool:
    return vanishes(x, max(abs(v) for v in c.as_tuple()), tol)


def regime_of(c: BinetCoefficients, tol: Optional[Tolerance] = None) -> Regime:
    z1, z2, z3 = (_is_zero(v, c, tol) for v in c.as_tuple())
    if z1 and z3:
        return Regime.ZERO_SEQUENCE if z2 else Regime.GEOMETRIC_LAMBDA2
    if z3:
        return Regime.CONVERGENT_MINUS
    if z1:
        return Regime.CONVERGENT_PLUS
    return Regime.PARITY_OSCILLATING


def gamma_of(c: BinetCoefficients, tol: Optional[Tolerance] = None) -> Optional[Scalar]:
    """``(c1 + c3) / (c3 - c1)``, or None when ``c3 == c1``."""
    if _is_zero(c.diff31, c, tol):
        return None
    return c.sum13 / c.diff31


def explicit_L1(roots: DegenerateRoots, u0, u1, u2) -> Optional[Scalar]:
    """Even-index limit written directly in the initial conditions."""
    l2, l3 = roots.lambda2, roots.lambda3
    num = l3 * l3 * (l2 * l2 * u0 - u2)
    den = l3 * l3 * (l2 * u0 - u1) + l2 * (l2 * u1 - u2)
    return None if den == 0 else num / den


def explicit_L2(roots: DegenerateRoots, u0, u1, u2) -> Optional[Scalar]:
    """Odd-index limit written directly in the initial conditions."""
    l2, l3 = roots.lambda2, roots.lambda3
    num = l3 * l3 * (l2 * u0 - u1) + l2 * (l2 * u1 - u2)
    den = l2 * l2 * u0 - u2
    return None if den == 0 else num / den


def analytic_limits(roots: DegenerateRoots, u0, u1, u2, tol: Optional[Tolerance] = None) -> LimitReport:
    u0, u1, u2 = as_scalar(u0), as_scalar(u1), as_scalar(u2)
    backend = backend_of(roots.lambda2, roots.lambda3, u0, u1, u2)
    tol = tol or default_tolerance(backend)
    l2, l3 = roots.lambda2, roots.lambda3

    c = solve_coefficients(roots, u0, u1, u2)
    regime = regime_of(c, tol)
    s_zero, d_zero = _is_zero(c.sum13, c, tol), _is_zero(c.diff31, c, tol)
    L1 = None if d_zero else l3 * c.sum13 / c.diff31
    L2 = None if s_zero else l3 * c.diff31 / c.sum13
    gamma = gamma_of(c, tol)

    if backend is Backend.EXACT:
        if (L1, L2) != (explicit_L1(roots, u0, u1, u2), explicit_L2(roots, u0, u1, u2)):
            raise ArithmeticError("parity limits disagree with their explicit initial-condition forms")

    ratio_limit = {
        Regime.CONVERGENT_MINUS: -l3,
        Regime.CONVERGENT_PLUS: l3,
        Regime.GEOMETRIC_LAMBDA2: l2,
    }.get(regime)
    return LimitReport(
        L1=L1,
        L2=L2,
        gamma=gamma,
        lambda3_squared=l3 * l3,
        gamma_squared=None if gamma is None else gamma * gamma,
        regime=regime,
        ratio_limit=ratio_limit,
    )


class ParityEstimate(NamedTuple):
    even: Optional[float]
    odd: Optional[float]
    converged: bool
    skipped_indices: list


class Estimate(NamedTuple):
    value: float
    converged: bool
    skipped_indices: list


def _float_spec(spec: RecurrenceSpec) -> RecurrenceSpec:
    return spec if spec.backend is Backend.FLOAT else spec.to(Backend.FLOAT)


def _collect(spec, n_max, ratio: Callable, parities=(0, 1)):
    """Run ``ratio(prev2, prev1, cur) -> (num, den)`` over scaled windows.

    Returns per-parity lists of ``(n, value)`` for the defined indices, the
    skipped indices, and the indices considered.
    """
    if n_max < 8:
        raise ValueError("n_max must be at least 8")
    defined = {p: [] for p in parities}
    skipped, considered = [], []
    for n, w0, w1, w2 in scaled_windows(_float_spec(spec), n_max):
        if n % 2 not in defined:
            continue
        num, den = ratio(w0, w1, w2)
        considered.append(n)
        if den == 0:
            skipped.append(n)
        else:
            defined[n % 2].append((n, num / den))
    if considered[-6:] and all(n in skipped for n in considered[-6:]):
        raise VanishingSequenceError("sequence vanishes, ratios undefined")
    return defined, skipped


def _settled(values, tol: Tolerance) -> bool:
    return len(values) >= 2 and approx_eq(values[-1][1], values[-2][1], tol)


def empirical_parity_limits(spec: RecurrenceSpec, n_max: int, tol: Tolerance = DEFAULT_FLOAT) -> ParityEstimate:
    """Last even-``n`` and odd-``n`` values of ``U[n]/U[n-1]`` up to ``n_max``.

    Exact specs are converted to floats first. A parity whose denominators
    all vanish reports ``None`` (the matching analytic limit is undefined).
    """
    defined, skipped = _collect(spec, n_max, lambda w0, w1, w2: (w2, w1))
    even, odd = defined[0], defined[1]
    converged = _settled(even, tol) and _settled(odd, tol)
    return ParityEstimate(
        even[-1][1] if even else None,
        odd[-1][1] if odd else None,
        converged,
        skipped,
    )


def empirical_two_step_limit(spec: RecurrenceSpec, n_max: int, tol: Tolerance = DEFAULT_FLOAT) -> Estimate:
    """Estimate ``lim U[n]/U[n-2]``, which equals ``lambda3**2`` for any start."""
    defined, skipped = _collect(spec, n_max, lambda w0, w1, w2: (w2, w0))
    values = sorted(defined[0] + defined[1])
    if not values:
        raise VanishingSequenceError("sequence vanishes, ratios undefined")
    return Estimate(values[-1][1], _settled(values, tol), skipped)


def empirical_gamma_squared(spec: RecurrenceSpec, n_max: int, tol: Tolerance = DEFAULT_FLOAT) -> Estimate:
    """Estimate ``lim U[n] U[n-2] / U[n-1]**2`` along even ``n``.

    Along odd ``n`` the same product tends to ``1/gamma**2`` instead, so only
    even indices are used.
    """
    defined, skipped = _collect(spec, n_max, lambda w0, w1, w2: (w2 * w0, w1 * w1), parities=(0,))
    values = defined[0]
    if not values:
        raise VanishingSequenceError("sequence vanishes, ratios undefined")
    return Estimate(values[-1][1], _settled(values, tol), skipped)
