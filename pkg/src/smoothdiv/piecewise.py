"""Certified piecewise-polynomial tables on consecutive unit intervals.

A :class:`PiecewiseFunction` stores one polynomial per interval
``[knots[i], knots[i] + 1]``, expanded around the interval midpoint, together
with a per-segment accuracy certificate (the largest observed relative defect
of the defining delay-ODE identity on that segment).  Tables are immutable
after construction and safe to share across threads; evaluation and exact
segment integration are pure.

Extension conventions (value 0 below the table, asymptotic value above it,
underflow reporting) are applied by the wrappers in :mod:`smoothdiv.special`,
not here: this module evaluates strictly inside ``[knots[0], knots[-1] + 1]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError

#: Schema tag written into exported table files.
SCHEMA_TAG = "smoothdiv/piecewise-function/1"

KIND_DICKMAN = "dickman"
KIND_BUCHSTAB = "buchstab"
_KINDS = (KIND_DICKMAN, KIND_BUCHSTAB)


def _poly_eval_vec(coeffs_row: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Horner evaluation of one coefficient row on an offset vector."""
    acc = np.zeros_like(t)
    for c in coeffs_row[::-1]:
        acc *= t
        acc += c
    return acc


@dataclass(frozen=True, eq=False)
class PiecewiseFunction:
    """Piecewise-polynomial representation of rho, omega, or a derived function.

    ``coeffs[i, j]`` is the coefficient of ``(u - m_i)**j`` on segment ``i``,
    where ``m_i = knots[i] + 1/2`` is the segment midpoint.  ``certificate[i]``
    is the maximum relative defect of the delay-ODE identity observed on
    segment ``i``; the construction in :mod:`smoothdiv.special` refuses to
    return a table whose certificate exceeds ``target_rel_err``.
    """

    kind: str
    knots: np.ndarray          # shape (nseg + 1,), consecutive integers
    coeffs: np.ndarray         # shape (nseg, degree + 1)
    u_max: float               # evaluation ceiling = knots[-1]
    target_rel_err: float
    certificate: np.ndarray    # shape (nseg,)
    _anti: np.ndarray = field(init=False, repr=False)
    _rows: tuple = field(init=False, repr=False)
    _rows_np: tuple = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown piecewise kind {self.kind!r}")
        knots = np.asarray(self.knots, dtype=float)
        coeffs = np.ascontiguousarray(np.asarray(self.coeffs, dtype=float))
        cert = np.asarray(self.certificate, dtype=float)
        if knots.ndim != 1 or np.any(np.diff(knots) <= 0):
            raise DomainError("knots must be strictly increasing")
        if coeffs.shape[0] != knots.size - 1:
            raise DomainError("need exactly one segment per consecutive knot pair")
        if cert.shape != (coeffs.shape[0],):
            raise DomainError("certificate must hold one entry per segment")
        object.__setattr__(self, "knots", knots)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "certificate", cert)
        # Antiderivative coefficients: A[i, j] = coeffs[i, j-1] / j for j >= 1,
        # A[i, 0] = 0.  Segment integrals are then exact polynomial evaluations.
        nseg, ncoef = coeffs.shape
        anti = np.zeros((nseg, ncoef + 1))
        anti[:, 1:] = coeffs / np.arange(1, ncoef + 1)
        object.__setattr__(self, "_anti", anti)
        # Evaluation rows trimmed where the remaining tail contributes less
        # than 1e-18 of the segment's smallest value; high-degree tables are
        # needed for construction accuracy, not for evaluation.
        rows = []
        for i, row in enumerate(coeffs):
            tail = np.abs(row) * 0.5 ** np.arange(ncoef)
            suffix = np.cumsum(tail[::-1])[::-1]
            left = abs(_poly_eval_vec(row, np.asarray(-0.5)))
            right = abs(_poly_eval_vec(row, np.asarray(0.5)))
            floor_scale = 1e-18 * max(min(left, right, abs(row[0])), 5e-324)
            keep = int(np.argmax(suffix <= floor_scale)) if suffix[-1] <= floor_scale else ncoef
            rows.append(row[: max(keep, 1)].copy())
        object.__setattr__(self, "_rows_np", tuple(rows))
        object.__setattr__(self, "_rows", tuple(tuple(r) for r in rows))

    # -- geometry ----------------------------------------------------------

    @property
    def n_segments(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def lo(self) -> float:
        return float(self.knots[0])

    @property
    def hi(self) -> float:
        return float(self.knots[-1])

    @property
    def max_certificate(self) -> float:
        return float(self.certificate.max())

    def segment_index(self, u: float) -> int:
        """Index of the segment evaluated at ``u`` (right-continuous at knots)."""
        if not self.lo <= u <= self.hi:
            raise DomainError(f"u={u} outside table range [{self.lo}, {self.hi}]")
        return min(int(np.floor(u - self.lo)), self.n_segments - 1)

    # -- evaluation --------------------------------------------------------

    def value(self, u):
        """Evaluate the table at ``u`` (scalar or array) inside its range.

        Right-continuous at interior knots: an integer argument selects the
        segment to its right; the upper endpoint uses the last segment.
        Array evaluation is grouped by segment so memory stays O(len(u))
        even for high-degree tables.
        """
        if np.isscalar(u) or np.ndim(u) == 0:
            return self._value_scalar(float(u))
        arr = np.asarray(u, dtype=float)
        if np.any(arr < self.lo) or np.any(arr > self.hi):
            raise DomainError(f"argument outside table range [{self.lo}, {self.hi}]")
        idx = np.minimum((arr - self.lo).astype(np.int64), self.n_segments - 1)
        out = np.empty_like(arr)
        for k in np.unique(idx):
            m = idx == k
            t = arr[m] - (float(self.knots[k]) + 0.5)
            out[m] = _poly_eval_vec(self._rows_np[k], t)
        return out

    def _value_scalar(self, u: float) -> float:
        k = self.segment_index(u)
        t = u - (float(self.knots[k]) + 0.5)
        acc = 0.0
        for c in reversed(self._rows[k]):
            acc = acc * t + c
        return acc

    def _segment_right_value(self, k: int) -> float:
        """Value of segment ``k`` at its right endpoint (left limit at the
        next knot); used by continuity checks."""
        acc = 0.0
        for c in reversed(self._rows[k]):
            acc = acc * 0.5 + c
        return acc

    def derivative_value(self, u: float) -> float:
        """Analytic derivative of the stored segment polynomial at ``u``.

        Exposed for consistency checks only; the difference-differential
        recurrences are the canonical derivative path.
        """
        k = self.segment_index(u)
        t = u - (float(self.knots[k]) + 0.5)
        row = self._rows[k]
        acc = 0.0
        for j in range(len(row) - 1, 0, -1):
            acc = acc * t + j * row[j]
        return acc

    # -- exact integration ---------------------------------------------------

    def integral(self, a: float, b: float) -> float:
        """Exact integral of the stored polynomials over ``[a, b]``.

        Both endpoints must lie inside the table range.  Antidifferentiation
        is done on the stored coefficients, so the only error is roundoff.
        """
        if b < a:
            return -self.integral(b, a)
        if not (self.lo <= a and b <= self.hi):
            raise DomainError(
                f"integration range [{a}, {b}] outside table range "
                f"[{self.lo}, {self.hi}]"
            )
        ia = self.segment_index(a)
        ib = self.segment_index(b)
        total = 0.0
        for k in range(ia, ib + 1):
            left = max(a, float(self.knots[k]))
            right = min(b, float(self.knots[k]) + 1.0)
            if right > left:
                total += self._segment_integral(k, left, right)
        return total

    def _segment_integral(self, k: int, a: float, b: float) -> float:
        mid = float(self.knots[k]) + 0.5
        anti = self._anti[k]

        def prim(t):
            acc = 0.0
            for c in anti[::-1]:
                acc = acc * t + c
            return acc

        return prim(b - mid) - prim(a - mid)


# -- export / import ---------------------------------------------------------


def save_piecewise(table: PiecewiseFunction, path) -> None:
    """Write a table to a versioned, schema-tagged JSON file.

    Floats are serialized with ``repr`` (shortest round-trip), so a rebuild
    with identical parameters produces a byte-identical file and loading
    restores bit-identical coefficients.
    """
    payload = {
        "schema": SCHEMA_TAG,
        "kind": table.kind,
        "u_max": table.u_max,
        "target_rel_err": table.target_rel_err,
        "knots": [float(k) for k in table.knots],
        "coefficients": [[float(c) for c in row] for row in table.coeffs],
        "certificate": [float(c) for c in table.certificate],
    }
    Path(path).write_text(json.dumps(payload, indent=1) + "\n")


def load_piecewise(path) -> PiecewiseFunction:
    """Load a table previously written by :func:`save_piecewise`."""
    payload = json.loads(Path(path).read_text())
    schema = payload.get("schema")
    if schema != SCHEMA_TAG:
        raise DomainError(f"unsupported table schema {schema!r} (expected {SCHEMA_TAG!r})")
    return PiecewiseFunction(
        kind=payload["kind"],
        knots=np.asarray(payload["knots"], dtype=float),
        coeffs=np.asarray(payload["coefficients"], dtype=float),
        u_max=float(payload["u_max"]),
        target_rel_err=float(payload["target_rel_err"]),
        certificate=np.asarray(payload["certificate"], dtype=float),
    )
