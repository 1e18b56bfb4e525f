"""Tail integral tau and partial convolutions of omega with rho and rho'.

The quantities computed here are

    tau(v)                  = integral of rho(s) over [v, inf),
    conv_omega_rho(u, v)    = integral of omega(u-s) rho(s)  over [v, inf),
    conv_omega_rho_prime    = integral of omega(u-s) rho'(s) over [v, inf),
    conv_rho_rho(u, v)      = integral of rho(u-s) rho(s)    over [v, inf).

The infinite upper limits are a formality: omega(u-s) vanishes for s > u-1 and
rho(u-s) for s > u, so the effective support is finite, and the rho tail is
truncated once the table certifies the remainder is negligible.

Every integral is pre-split at each point where either factor's piecewise
definition changes (integer s, s = u - j, and s = 1 for the rho' jump), and
each knot-free piece is handed to adaptive Gauss-Kronrod quadrature.  Splitting
first matters: adaptive quadrature converges slowly across derivative
discontinuities, while each piece here is analytic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

from scipy.integrate import quad

from . import special
from .errors import DomainError
from .piecewise import PiecewiseFunction

#: Default absolute tolerance; downstream terms are multiplied by x, so this
#: stays far below any error envelope at desk scale.
DEFAULT_ABS_TOL = 1e-12
DEFAULT_REL_TOL = 1e-10


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and subdivision budget for the convolution quadrature."""

    abs_tol: float = DEFAULT_ABS_TOL
    rel_tol: float = DEFAULT_REL_TOL
    max_subdivisions: int = 64
    knot_policy: Literal["split_all_integer_knots"] = "split_all_integer_knots"

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 16:
            raise DomainError("max_subdivisions must be at least 16")


@dataclass(frozen=True)
class ConvolutionValue:
    """A convolution integral with its error estimate and clipped support."""

    value: float
    est_abs_err: float
    effective_support: tuple[float, float]


_DEFAULT_SPEC = QuadratureSpec()


def _tables(
    rho_table: PiecewiseFunction | None, omega_table: PiecewiseFunction | None
) -> tuple[PiecewiseFunction, PiecewiseFunction]:
    return (
        rho_table if rho_table is not None else special.default_dickman(),
        omega_table if omega_table is not None else special.default_buchstab(),
    )


def _check_finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError("arguments must be finite")


def _knot_points(lo: float, hi: float, shifts_from: float | None) -> list[float]:
    """Split points in (lo, hi): integers, plus u - j when a shifted factor is present."""
    pts = set()
    for k in range(math.ceil(lo), math.floor(hi) + 1):
        pts.add(float(k))
    if shifts_from is not None:
        u = shifts_from
        j = 1
        while u - j > lo:
            if u - j < hi:
                pts.add(u - j)
            j += 1
    eps = 1e-12 * max(1.0, abs(hi))
    merged = [lo]
    for p in sorted(pts):
        if p - merged[-1] > eps and hi - p > eps:
            merged.append(p)
    merged.append(hi)
    return merged


def _integrate_pieces(
    f: Callable[[float], float], points: list[float], spec: QuadratureSpec
) -> tuple[float, float]:
    n = max(len(points) - 1, 1)
    total = 0.0
    err = 0.0
    for a, b in zip(points[:-1], points[1:]):
        val, e = quad(
            f, a, b, epsabs=spec.abs_tol / n, epsrel=spec.rel_tol, limit=spec.max_subdivisions
        )
        total += val
        err += e
    return total, err


def tau(
    v: float,
    rho_table: PiecewiseFunction | None = None,
    spec: QuadratureSpec = _DEFAULT_SPEC,
) -> float:
    """Tail integral of the Dickman function, integral of rho over [v, inf).

    For v < 0 this equals tau(0) since rho vanishes below 0.  The upper limit
    is truncated at the first knot where the certified table values make the
    remaining tail smaller than a tenth of the absolute tolerance.
    """
    _check_finite(v)
    rho_t, _ = _tables(rho_table, None)
    lo = max(float(v), 0.0)
    hi = _tau_cutoff(lo, rho_t, spec)
    if hi <= lo:
        return 0.0
    points = _knot_points(lo, hi, None)
    total, _ = _integrate_pieces(lambda s: special.rho(s, table=rho_t), points, spec)
    return total


def _tau_cutoff(lo: float, rho_t: PiecewiseFunction, spec: QuadratureSpec) -> float:
    """First knot where rho's monotone decay bounds the remaining tail below
    abs_tol/10 (rho is decreasing beyond 1, so tail <= rho(k) * remaining length)."""
    support_hi = special.rho_support_hi(rho_t, special.DEFAULT_VALUE_FLOOR)
    k = max(math.ceil(lo), 1)
    while k < support_hi:
        remaining = support_hi - k
        if special.rho(float(k), table=rho_t) * remaining < spec.abs_tol / 10.0:
            return float(k)
        k += 1
    return support_hi


def conv_omega_rho(
    u: float,
    v: float,
    rho_table: PiecewiseFunction | None = None,
    omega_table: PiecewiseFunction | None = None,
    spec: QuadratureSpec = _DEFAULT_SPEC,
) -> ConvolutionValue:
    """integral of omega(u-s) rho(s) ds over [v, u-1] (support-clipped)."""
    _check_finite(u, v)
    rho_t, omega_t = _tables(rho_table, omega_table)
    hi = u - 1.0
    lo = min(max(v, 0.0), hi)
    cut = min(hi, special.rho_support_hi(rho_t, special.DEFAULT_VALUE_FLOOR))
    if cut <= lo:
        return ConvolutionValue(0.0, 0.0, (lo, hi))
    points = _knot_points(lo, cut, u)

    def f(s: float) -> float:
        return special.omega(u - s, table=omega_t) * special.rho(s, table=rho_t)

    total, err = _integrate_pieces(f, points, spec)
    return ConvolutionValue(total, err, (lo, hi))


def conv_omega_rho_prime(
    u: float,
    v: float,
    rho_table: PiecewiseFunction | None = None,
    omega_table: PiecewiseFunction | None = None,
    spec: QuadratureSpec = _DEFAULT_SPEC,
) -> ConvolutionValue:
    """integral of omega(u-s) rho'(s) ds over [v, u-1].

    rho' vanishes identically on (-inf, 1) and jumps to -1 at s = 1, so the
    lower limit is advanced to 1 analytically rather than sampling the jump.
    """
    _check_finite(u, v)
    rho_t, omega_t = _tables(rho_table, omega_table)
    hi = u - 1.0
    lo = min(max(v, 1.0), hi)
    # rho'(s) = -rho(s-1)/s dies once s - 1 passes the rho support.
    cut = min(hi, special.rho_support_hi(rho_t, special.DEFAULT_VALUE_FLOOR) + 1.0)
    if cut <= lo:
        return ConvolutionValue(0.0, 0.0, (lo, hi))
    points = _knot_points(lo, cut, u)

    def f(s: float) -> float:
        return special.omega(u - s, table=omega_t) * special._rho_prime_ext(s, table=rho_t)

    total, err = _integrate_pieces(f, points, spec)
    return ConvolutionValue(total, err, (lo, hi))


def conv_rho_rho(
    u: float,
    v: float,
    rho_table: PiecewiseFunction | None = None,
    spec: QuadratureSpec = _DEFAULT_SPEC,
) -> ConvolutionValue:
    """integral of rho(u-s) rho(s) ds over [v, u] (support-clipped).

    Both factors have unit-interval knots, so splits land at integer s and at
    s = u - j alike.
    """
    _check_finite(u, v)
    rho_t, _ = _tables(None, None)
    if rho_table is not None:
        rho_t = rho_table
    hi = u
    lo = min(max(v, 0.0), hi)
    support = special.rho_support_hi(rho_t, special.DEFAULT_VALUE_FLOOR)
    cut_hi = min(hi, support)            # rho(s) dead beyond
    cut_lo = max(lo, u - support)        # rho(u-s) dead below
    if cut_hi <= cut_lo:
        return ConvolutionValue(0.0, 0.0, (lo, hi))
    points = _knot_points(cut_lo, cut_hi, u)

    def f(s: float) -> float:
        return special.rho(u - s, table=rho_t) * special.rho(s, table=rho_t)

    total, err = _integrate_pieces(f, points, spec)
    return ConvolutionValue(total, err, (lo, hi))
