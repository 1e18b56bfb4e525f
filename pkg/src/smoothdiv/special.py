"""The Dickman function rho and the Buchstab function omega.

Both functions are defined by delay differential equations,

    u rho'(u) + rho(u - 1) = 0      (u > 1),   rho = 1 on [0, 1], 0 below 0,
    (u omega(u))' = omega(u - 1)    (u > 2),   u omega(u) = 1 on [1, 2], 0 below 1,

with derivatives taken right-continuously at the initial knots.  Each is
represented by one polynomial per unit interval, expanded around the interval
midpoint and produced by integrating the previous segment's series term by
term; continuity at the left knot fixes the constant term.

Construction runs in decimal arithmetic well above double precision and the
result is rounded to doubles.  That matters for rho, which decays below
1e-220 across the default table while construction errors persist instead of
decaying (a perturbation of the solution obeys the same delay ODE and shrinks
only logarithmically).  Two knobs keep the persistent error floor far below
the smallest table values: the segment degree grows with the range (series
truncation injects ~3**-degree; see :func:`dickman_degree_for`) and the
working precision grows with the degree.  Rounding the finished coefficients
to doubles then costs only evaluation-level roundoff.

Each table carries a certificate: the maximum observed relative defect of the
integrated delay-ODE identity per segment,

    u rho(u)   = integral of rho over [u-1, u],
    u omega(u) = 1 + integral of omega over [1, u-1],

with the integrals evaluated exactly from the stored polynomials.
Construction fails loudly if the certificate exceeds ``target_rel_err``.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from functools import lru_cache

import numpy as np

from .constants import EXP_NEG_GAMMA
from .errors import ConstructionError, DomainError
from .piecewise import KIND_BUCHSTAB, KIND_DICKMAN, PiecewiseFunction, _poly_eval_vec

#: Default evaluation ceiling for rho; values below the floor report 0.
DEFAULT_RHO_U_MAX = 100
#: rho values smaller than this are reported as exact 0 (documented underflow).
DEFAULT_VALUE_FLOOR = 1e-180
#: Default Buchstab ceiling; beyond it omega is the constant e**-gamma.
DEFAULT_OMEGA_U_CUT = 30
#: Default requested relative accuracy of the tables.
DEFAULT_TARGET_REL_ERR = 1e-10
#: Polynomial degree for the Buchstab table (values stay O(1), so the
#: truncation floor ~3**-degree is already far below double resolution).
BUCHSTAB_DEGREE = 80

_CERT_SAMPLES = 17  # identity-defect sample points per segment


# -- high-precision segment construction -------------------------------------


def _log10_inv_rho(u: float) -> float:
    """Crude overestimate-ish of log10(1/rho(u)): u(log u + log log u - 1)/log 10."""
    u = max(float(u), 4.0)
    return u * (math.log(u) + math.log(max(math.log(u), 1.0)) - 1.0) / math.log(10.0)


def dickman_degree_for(u_max: float) -> int:
    """Segment degree needed so the series-truncation floor stays below rho.

    Truncating the midpoint series at degree N injects a persistent absolute
    error ~3**-(N+1) (the [1, 2] segment has convergence ratio 1/3 at the
    segment edge, and perturbations of the delay ODE decay only
    logarithmically).  The degree is chosen so that floor is ~16 orders below
    rho(u_max).
    """
    digits = _log10_inv_rho(u_max) + 26.0
    return max(64, int(math.ceil(digits * math.log(10.0) / math.log(3.0))))


def _construction_precision(degree: int) -> int:
    """Decimal digits so construction roundoff stays below the truncation floor."""
    return 100 + int(math.ceil(0.48 * (degree + 1)))


def _horner_dec(coeffs, t: Decimal) -> Decimal:
    acc = Decimal(0)
    for c in reversed(coeffs):
        acc = acc * t + c
    return acc


def _dickman_segments(u_max: int, degree: int, prec: int) -> list[list[Decimal]]:
    """Midpoint-series coefficients of rho on [k, k+1] for k = 0..u_max-1."""
    with localcontext() as ctx:
        ctx.prec = prec
        half = Decimal(1) / 2
        segments = [[Decimal(1)] + [Decimal(0)] * degree]
        for k in range(1, u_max):
            prev = segments[-1]
            a = Decimal(2 * k + 1) / 2  # midpoint of [k, k+1]
            # Series of rho(u-1)/u around the midpoint: rho(u-1) has the
            # previous segment's coefficients verbatim (same offset), and
            # division by u = a + t is the stable first-order recurrence.
            q = [Decimal(0)] * degree
            q[0] = prev[0] / a
            for j in range(1, degree):
                q[j] = (prev[j] - q[j - 1]) / a
            c = [Decimal(0)] * (degree + 1)
            for j in range(1, degree + 1):
                c[j] = -q[j - 1] / j
            # Continuity at the left knot: value at t=-1/2 must equal the
            # previous segment's value at t=+1/2.
            rho_left = _horner_dec(prev, half)
            tail = _horner_dec(c[1:], -half) * (-half)
            c[0] = rho_left - tail
            segments.append(c)
    return segments


def _buchstab_segments(u_cut: int, degree: int, prec: int) -> list[list[Decimal]]:
    """Midpoint-series coefficients of omega on [k, k+1] for k = 1..u_cut-1."""
    with localcontext() as ctx:
        ctx.prec = prec
        half = Decimal(1) / 2
        # Segment [1, 2]: omega(u) = 1/u = 1/(3/2 + t), a plain geometric series.
        a0 = Decimal(3) / 2
        w = [Decimal(0)] * (degree + 1)
        w[0] = 1 / a0
        for j in range(1, degree + 1):
            w[j] = -w[j - 1] / a0
        segments = [w]
        for i in range(1, u_cut - 1):
            prev = segments[-1]
            a = Decimal(2 * i + 3) / 2  # midpoint of [i+1, i+2]
            # Work with p(u) = u*omega(u), whose derivative is omega(u-1).
            p = [Decimal(0)] * (degree + 1)
            for j in range(1, degree + 1):
                p[j] = prev[j - 1] / j
            omega_left = _horner_dec(prev, half)
            target = (i + 1) * omega_left  # p at the left knot
            tail = _horner_dec(p[1:], -half) * (-half)
            p[0] = target - tail
            c = [Decimal(0)] * (degree + 1)
            c[0] = p[0] / a
            for j in range(1, degree + 1):
                c[j] = (p[j] - c[j - 1]) / a
            segments.append(c)
    return segments


def _to_float_array(segments) -> np.ndarray:
    return np.array([[float(c) for c in seg] for seg in segments], dtype=float)


# -- certificates -------------------------------------------------------------


def _anti_eval(table: PiecewiseFunction, k: int, t):
    """Antiderivative of segment k at midpoint offsets ``t`` (vectorized)."""
    return _poly_eval_vec(table._anti[k], np.asarray(t, dtype=float))


def _certify_dickman(table: PiecewiseFunction) -> np.ndarray:
    """Per-segment max relative defect of u*rho(u) = integral(rho, u-1, u)."""
    cert = np.zeros(table.n_segments)
    ts = np.linspace(0.0, 1.0, _CERT_SAMPLES)
    # Exact segment integrals from the stored antiderivatives: [u-1, u] splits
    # into a piece of segment k-1 and a piece of segment k, with u-1 and u at
    # the same midpoint offset t in their respective segments.
    for k in range(table.n_segments):
        u = float(table.knots[k]) + ts
        u = u[u <= table.hi]
        t = u - (float(table.knots[k]) + 0.5)
        lhs = u * _poly_eval_vec(table._rows_np[k], t)
        upper = _anti_eval(table, k, t) - _anti_eval(table, k, -0.5)
        if k == 0:
            rhs = u.copy()  # rho == 1 on [0, 1] and 0 below: integral over [u-1, u] is u
        else:
            lower = _anti_eval(table, k - 1, 0.5) - _anti_eval(table, k - 1, t)
            rhs = lower + upper
        scale = np.maximum(np.abs(lhs), np.abs(rhs))
        ok = scale > 0.0
        cert[k] = float(np.max(np.abs(lhs - rhs)[ok] / scale[ok], initial=0.0))
    return cert


def _certify_buchstab(table: PiecewiseFunction) -> np.ndarray:
    """Defect of u*omega(u) = 1 + integral(omega, 1, u-1) (or of 1/u on [1,2])."""
    cert = np.zeros(table.n_segments)
    ts = np.linspace(0.0, 1.0, _CERT_SAMPLES)
    # cumulative exact integral of omega over [1, knot]
    cum = [0.0]
    for k in range(table.n_segments):
        cum.append(cum[-1] + float(_anti_eval(table, k, 0.5) - _anti_eval(table, k, -0.5)))
    for k in range(table.n_segments):
        u = float(table.knots[k]) + ts
        u = u[u <= table.hi]
        t = u - (float(table.knots[k]) + 0.5)
        lhs = u * _poly_eval_vec(table._rows_np[k], t)
        if k == 0:
            rhs = np.ones_like(u)
        else:
            # integral over [1, u-1]: full segments up to knot k-1, plus a
            # partial piece of segment k-1 (u-1 sits there at the same offset t).
            partial = _anti_eval(table, k - 1, t) - _anti_eval(table, k - 1, -0.5)
            rhs = 1.0 + cum[k - 1] + partial
        cert[k] = float(np.max(np.abs(lhs - rhs) / np.abs(rhs), initial=0.0))
    return cert


# -- table builders -----------------------------------------------------------


def build_dickman_table(
    u_max: int = DEFAULT_RHO_U_MAX,
    degree: int | None = None,
    target_rel_err: float = DEFAULT_TARGET_REL_ERR,
) -> PiecewiseFunction:
    """Build a certified piecewise table of rho on [0, u_max].

    The default degree grows with ``u_max`` (see :func:`dickman_degree_for`)
    so the series-truncation floor stays far below the smallest table values.
    Raises :class:`ConstructionError` if the resulting table's delay-ODE
    defect certificate exceeds ``target_rel_err`` on any segment.
    """
    degree = dickman_degree_for(u_max) if degree is None else int(degree)
    if u_max < 2 or degree < 8:
        raise DomainError("need u_max >= 2 and degree >= 8")
    segs = _dickman_segments(int(u_max), degree, _construction_precision(degree))
    table = PiecewiseFunction(
        kind=KIND_DICKMAN,
        knots=np.arange(0, int(u_max) + 1, dtype=float),
        coeffs=_to_float_array(segs),
        u_max=float(u_max),
        target_rel_err=float(target_rel_err),
        certificate=np.zeros(int(u_max)),
    )
    cert = _certify_dickman(table)
    if cert.max() > target_rel_err:
        raise ConstructionError(
            f"dickman table certificate {cert.max():.3e} exceeds target "
            f"{target_rel_err:.3e}"
        )
    return PiecewiseFunction(
        kind=table.kind,
        knots=table.knots,
        coeffs=table.coeffs,
        u_max=table.u_max,
        target_rel_err=table.target_rel_err,
        certificate=cert,
    )


def build_buchstab_table(
    u_cut: int = DEFAULT_OMEGA_U_CUT,
    degree: int = BUCHSTAB_DEGREE,
    target_rel_err: float = DEFAULT_TARGET_REL_ERR,
) -> PiecewiseFunction:
    """Build a certified piecewise table of omega on [1, u_cut]."""
    if u_cut < 3 or degree < 8:
        raise DomainError("need u_cut >= 3 and degree >= 8")
    segs = _buchstab_segments(int(u_cut), int(degree), _construction_precision(degree))
    table = PiecewiseFunction(
        kind=KIND_BUCHSTAB,
        knots=np.arange(1, int(u_cut) + 1, dtype=float),
        coeffs=_to_float_array(segs),
        u_max=float(u_cut),
        target_rel_err=float(target_rel_err),
        certificate=np.zeros(int(u_cut) - 1),
    )
    cert = _certify_buchstab(table)
    if cert.max() > target_rel_err:
        raise ConstructionError(
            f"buchstab table certificate {cert.max():.3e} exceeds target "
            f"{target_rel_err:.3e}"
        )
    return PiecewiseFunction(
        kind=table.kind,
        knots=table.knots,
        coeffs=table.coeffs,
        u_max=table.u_max,
        target_rel_err=table.target_rel_err,
        certificate=cert,
    )


@lru_cache(maxsize=1)
def default_dickman() -> PiecewiseFunction:
    return build_dickman_table()


@lru_cache(maxsize=1)
def default_buchstab() -> PiecewiseFunction:
    return build_buchstab_table()


@lru_cache(maxsize=8)
def rho_support_hi(table: PiecewiseFunction, value_floor: float) -> float:
    """Largest knot at which the table still exceeds the underflow floor.

    Beyond this point rho is reported as exact 0, so integrands may be
    clipped there; the discarded mass is below ``value_floor`` per unit.
    """
    for k in range(table.n_segments, 0, -1):
        if table.value(float(table.knots[k - 1])) >= value_floor:
            return float(table.knots[k])
    return float(table.knots[0])


# -- evaluation with extension conventions ------------------------------------


def _as_float_array(u):
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("argument must be finite")
    return arr


def rho(u, table: PiecewiseFunction | None = None, value_floor: float = DEFAULT_VALUE_FLOOR):
    """Dickman function rho(u); accepts scalars or arrays.

    Returns 0 exactly for u < 0 and for arguments whose true value lies below
    ``value_floor`` (documented underflow).  Arguments above the table ceiling
    raise unless the table has already underflowed there, in which case the
    monotone decay of rho justifies returning 0.
    """
    table = table if table is not None else default_dickman()
    if np.ndim(u) == 0:
        x = float(u)
        if not math.isfinite(x):
            raise DomainError("argument must be finite")
        if x < 0.0:
            return 0.0
        if x <= table.hi:
            val = table._value_scalar(x)
            return 0.0 if val < value_floor else val
        _require_rho_underflow(x, table, value_floor)
        return 0.0
    arr = _as_float_array(u)
    out = np.zeros_like(arr)
    inside = (arr >= 0.0) & (arr <= table.hi)
    if np.any(inside):
        vals = table.value(arr[inside])
        vals = np.where(vals < value_floor, 0.0, vals)
        out[inside] = vals
    above = arr > table.hi
    if np.any(above):
        _require_rho_underflow(float(arr[above][0]), table, value_floor)
        out[above] = 0.0
    return out


def _require_rho_underflow(x: float, table: PiecewiseFunction, value_floor: float):
    if table._value_scalar(table.hi) >= value_floor:
        raise DomainError(
            f"u={x} exceeds the rho table ceiling u_max={table.hi} and the "
            f"value there has not underflowed; build a larger table"
        )


def rho_prime(u, table: PiecewiseFunction | None = None):
    """rho'(u) = -rho(u-1)/u for u > 0, right-continuous at the knots.

    rho' is defined by right-continuity only down to 0; arguments <= 0 raise.
    """
    if np.ndim(u) == 0:
        x = float(u)
        if not math.isfinite(x) or x <= 0.0:
            raise DomainError("rho_prime requires finite u > 0")
        return _rho_prime_ext(x, table=table)
    arr = _as_float_array(u)
    if np.any(arr <= 0.0):
        raise DomainError("rho_prime requires u > 0")
    return _rho_prime_ext(arr, table=table)


def _rho_prime_ext(u, table: PiecewiseFunction | None = None):
    """rho' extended by 0 below u = 1 (total function used by integrands)."""
    if np.ndim(u) == 0:
        x = float(u)
        return -rho(x - 1.0, table=table) / x if x >= 1.0 else 0.0
    arr = np.asarray(u, dtype=float)
    out = np.zeros_like(arr)
    mask = arr >= 1.0
    if np.any(mask):
        out[mask] = -rho(arr[mask] - 1.0, table=table) / arr[mask]
    return out


def rho_double_prime(u, table: PiecewiseFunction | None = None):
    """rho''(u) = (rho(u-1) - u*rho'(u-1)) / u**2 for u > 1, right-continuous."""
    if np.ndim(u) == 0:
        x = float(u)
        if not math.isfinite(x) or x <= 1.0:
            raise DomainError("rho_double_prime requires finite u > 1")
        return (rho(x - 1.0, table=table) - x * _rho_prime_ext(x - 1.0, table=table)) / (x * x)
    arr = _as_float_array(u)
    if np.any(arr <= 1.0):
        raise DomainError("rho_double_prime requires u > 1")
    return (rho(arr - 1.0, table=table) - arr * _rho_prime_ext(arr - 1.0, table=table)) / (arr * arr)


def _rho_double_prime_ext(u, table: PiecewiseFunction | None = None):
    """rho'' extended below 1 by its classical values (0 on (0,1), 1 at u=1).

    Only error envelopes evaluated outside their theorem domain need this;
    the public ``rho_double_prime`` keeps the strict u > 1 contract.
    """
    x = float(u)
    if x > 1.0:
        return float(rho_double_prime(x, table=table))
    if x == 1.0:
        return 1.0  # right-continuous limit of 1/u**2
    if x > 0.0:
        return 0.0
    raise DomainError("rho'' extension requires u > 0")


def omega(u, table: PiecewiseFunction | None = None):
    """Buchstab function omega(u); accepts scalars or arrays.

    Returns 0 for u < 1 and the limiting constant e**-gamma beyond the table
    ceiling, where the difference is far below double resolution.
    """
    table = table if table is not None else default_buchstab()
    if np.ndim(u) == 0:
        x = float(u)
        if not math.isfinite(x):
            raise DomainError("argument must be finite")
        if x < 1.0:
            return 0.0
        if x <= table.hi:
            return table._value_scalar(x)
        return EXP_NEG_GAMMA
    arr = _as_float_array(u)
    out = np.zeros_like(arr)
    inside = (arr >= 1.0) & (arr <= table.hi)
    if np.any(inside):
        out[inside] = table.value(arr[inside])
    out[arr > table.hi] = EXP_NEG_GAMMA
    return out


def omega_prime(u, table: PiecewiseFunction | None = None):
    """omega'(u) = (omega(u-1) - omega(u)) / u for u >= 1, right-continuous.

    At u = 1 this gives (0 - 1)/1 = -1; below 1 the derivative is undefined.
    """
    if np.ndim(u) == 0:
        x = float(u)
        if not math.isfinite(x) or x < 1.0:
            raise DomainError("omega_prime requires finite u >= 1")
        return (omega(x - 1.0, table=table) - omega(x, table=table)) / x
    arr = _as_float_array(u)
    if np.any(arr < 1.0):
        raise DomainError("omega_prime requires u >= 1")
    return (omega(arr - 1.0, table=table) - omega(arr, table=table)) / arr


# -- high-precision spot values (validation helpers) --------------------------


def omega_deviations_decimal(u_cut: int = DEFAULT_OMEGA_U_CUT, upto: int = 15) -> list[float]:
    """|omega(k) - e**-gamma| for k = 3..upto, computed in decimal arithmetic.

    The deviations decay below double resolution around k = 13, so the
    monotonicity of their magnitudes is checked here at high precision rather
    than from the rounded table.
    """
    prec = 60
    segs = _buchstab_segments(int(u_cut), BUCHSTAB_DEGREE, prec)
    out = []
    with localcontext() as ctx:
        ctx.prec = prec
        # gamma to 50 digits, well beyond the 60-digit working precision needs.
        gamma = Decimal("0.57721566490153286060651209008240243104215933593992")
        exp_neg_gamma = (-gamma).exp()
        half = Decimal(1) / 2
        for k in range(3, upto + 1):
            seg = segs[k - 2]  # segment [k-1, k]; right edge is u = k
            val = _horner_dec(seg, half)
            out.append(float(abs(val - exp_neg_gamma)))
    return out
