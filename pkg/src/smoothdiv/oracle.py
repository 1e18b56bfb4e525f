"""Exact, sieve-backed ground truth at desk scale.

Conventions, fixed once for all counting functions: counts run over integers
n <= floor(x); "prime <= y" means p <= floor(y); divisor thresholds d > z are
strict.  P+(1) = 1 and P-(1) = infinity, so n = 1 is y-smooth and y-rough for
every y, and its largest y-smooth divisor is 1.

The workhorse is a smallest-prime-factor (SPF) table, which answers smooth
parts, P+ and P- in O(log n) per query.  Counting loops are vectorized:

* psi_exact / s_exact / weighted sums enumerate smooth numbers by breadth-first
  products over the prime list (smooth numbers are sparse, so generation beats
  scanning);
* theta_exact builds the full smooth-part array with stride multiplications;
* phi_exact marks rough numbers with stride writes.

All reciprocal sums use exactly rounded compensated summation (math.fsum), so
results are independent of enumeration order.

The Monte Carlo oracle for the DSA risk probability uses the counter-based,
splittable Philox PRNG (numpy) with a fixed key; reruns with the same seed are
byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np

from . import special
from .errors import DomainError, ResourceError
from .params import DsaParams, ScaledParams
from .piecewise import PiecewiseFunction

#: Default sieve memory ceiling (table entries).
DEFAULT_SIEVE_CEILING = 2**31


class WeightKind(Enum):
    """Weight applied to the reciprocal smooth-divisor sums."""

    BUCHSTAB_OMEGA = "buchstab_omega"
    DICKMAN_RHO = "dickman_rho"


@dataclass(frozen=True, eq=False)
class SieveTables:
    """Smallest-prime-factor table and prime list up to ``limit``.

    Immutable after construction; shareable across threads.  ``spf[n]`` is the
    least prime factor of n for 2 <= n <= limit (spf[1] = 1).
    """

    limit: int
    spf: np.ndarray
    primes: np.ndarray

    def primes_upto(self, y: float) -> np.ndarray:
        """Primes p <= y from the table (requires y <= limit)."""
        if y > self.limit:
            raise ResourceError(f"primes up to {y} exceed the sieve limit {self.limit}")
        hi = int(np.searchsorted(self.primes, math.floor(y), side="right"))
        return self.primes[:hi]


def build_sieve(limit: int, ceiling: int = DEFAULT_SIEVE_CEILING) -> SieveTables:
    """Build SPF and prime tables for 2..limit (deterministic)."""
    limit = int(limit)
    if limit < 2:
        raise DomainError("sieve limit must be at least 2")
    if limit > ceiling:
        raise ResourceError(f"sieve limit {limit} exceeds the ceiling {ceiling}")
    spf = np.zeros(limit + 1, dtype=np.uint32)
    for i in range(2, math.isqrt(limit) + 1):
        if spf[i] == 0:
            sl = spf[i * i :: i]
            sl[sl == 0] = i
    untouched = np.flatnonzero(spf[2:] == 0) + 2  # primes
    spf[untouched] = untouched
    spf[1] = 1
    return SieveTables(limit=limit, spf=spf, primes=untouched.astype(np.int64))


def smooth_part(n: int, y: float, t: SieveTables) -> int:
    """n_y: the largest y-smooth divisor of n (product of p^a || n with p <= y)."""
    n = int(n)
    if n < 1:
        raise DomainError("smooth_part requires n >= 1")
    if n > t.limit:
        raise ResourceError(f"n={n} exceeds the sieve limit {t.limit}")
    s = 1
    while n > 1:
        p = int(t.spf[n])
        if p > y:
            break
        while n % p == 0:
            n //= p
            s *= p
    return s


# -- smooth-number enumeration ---------------------------------------------------


def smooth_numbers(primes, bound: float) -> np.ndarray:
    """All integers <= bound whose prime factors all lie in ``primes``.

    Breadth-first products: for each prime, every existing smooth number is
    multiplied by each feasible power.  Returns an unsorted int64 array
    (always containing 1); order never matters downstream because the
    reciprocal sums are exactly rounded.
    """
    cap = int(math.floor(bound))
    if cap < 1:
        return np.zeros(0, dtype=np.int64)
    out = np.ones(1, dtype=np.int64)
    for p in (int(q) for q in primes):
        if p > cap:
            break
        chunks = [out]
        cur = out[out <= cap // p] * p
        while cur.size:
            chunks.append(cur)
            cur = cur[cur <= cap // p] * p
        out = np.concatenate(chunks)
    return out


# -- exact counting functions ------------------------------------------------------


def _floor_x(x: float, t: SieveTables) -> int:
    fx = int(math.floor(x))
    if fx > t.limit:
        raise ResourceError(f"x={x} exceeds the sieve limit {t.limit}")
    return fx


def psi_exact(x: float, y: float, t: SieveTables) -> int:
    """#{n <= x : P+(n) <= y}, by smooth-number enumeration."""
    fx = _floor_x(x, t)
    if fx < 1:
        return 0
    return int(smooth_numbers(t.primes_upto(min(y, fx)), fx).size)


def _rough_indicator(fx: int, y: float, t: SieveTables) -> np.ndarray:
    rough = np.ones(fx + 1, dtype=bool)
    rough[0] = False
    for p in t.primes_upto(min(y, fx)):
        rough[int(p) :: int(p)] = False
    return rough


def phi_exact(x: float, y: float, t: SieveTables) -> int:
    """#{n <= x : P-(n) > y}; n = 1 counts (P-(1) = infinity)."""
    fx = _floor_x(x, t)
    if fx < 1:
        return 0
    return int(np.count_nonzero(_rough_indicator(fx, y, t)))


def _smooth_part_array(fx: int, y: float, t: SieveTables) -> np.ndarray:
    """sp[n] = n_y for 0 <= n <= fx, via stride multiplications per prime power."""
    sp = np.ones(fx + 1, dtype=np.int64)
    for p in t.primes_upto(min(y, fx)):
        q = int(p)
        while q <= fx:
            sp[q::q] *= int(p)
            q *= int(p)
    return sp


def theta_exact(x: float, y: float, z: float, t: SieveTables) -> int:
    """#{n <= x : n_y > z}, counted directly from the smooth-part array."""
    fx = _floor_x(x, t)
    if fx < 1:
        return 0
    sp = _smooth_part_array(fx, y, t)
    return int(np.count_nonzero(sp[1:] > z))


def theta_exact_decomposed(x: float, y: float, z: float, t: SieveTables) -> int:
    """theta via the unique decomposition n = d*e, P+(d) <= y, P-(e) > y:

        theta(x, y, z) = sum over smooth d > z of phi(x/d, y).

    Must equal ``theta_exact`` exactly; the two routes share no counting code.
    """
    fx = _floor_x(x, t)
    if fx < 1:
        return 0
    rough_cum = np.cumsum(_rough_indicator(fx, y, t).astype(np.int64))
    d = smooth_numbers(t.primes_upto(min(y, fx)), fx)
    d = d[d > z]
    if d.size == 0:
        return 0
    return int(rough_cum[fx // d].sum())


def zeta_one_y(y: float) -> float:
    """The truncated Euler product over primes p <= y of (1 - 1/p)^-1.

    Exact finite product, evaluated as exp of a compensated log-sum; the empty
    product (y < 2) is 1.
    """
    if not math.isfinite(y) or y < 0:
        raise DomainError("zeta_one_y requires finite y >= 0")
    primes = _primes_standalone(int(math.floor(y)) if y >= 2 else 0)
    if primes.size == 0:
        return 1.0
    return math.exp(-math.fsum(math.log1p(-1.0 / int(p)) for p in primes))


@lru_cache(maxsize=4)
def _primes_cached(n: int) -> np.ndarray:
    is_comp = np.zeros(n + 1, dtype=bool)
    is_comp[:2] = True
    for i in range(2, math.isqrt(n) + 1):
        if not is_comp[i]:
            is_comp[i * i :: i] = True
    return np.flatnonzero(~is_comp).astype(np.int64)


def _primes_standalone(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    if n > DEFAULT_SIEVE_CEILING:
        raise ResourceError(f"prime sieve up to {n} exceeds the ceiling")
    return _primes_cached(n)


def s_exact(y: float, z: float, t: SieveTables) -> float:
    """S(y, z) = sum of 1/d over y-smooth d > z, exactly as
    zeta(1, y) - (finite partial sum); the infinite tail is captured
    analytically by the Euler product.

    Exact up to floating summation error: the partial sum is compensated.
    """
    if z > t.limit:
        raise ResourceError(f"z={z} exceeds the sieve limit {t.limit}")
    partial = 0.0
    if z >= 1:
        d = smooth_numbers(t.primes_upto(min(y, max(z, 2.0))), z)
        partial = math.fsum((1.0 / di for di in d.tolist()))
    return zeta_one_y(y) - partial


def weighted_smooth_sum(
    p: ScaledParams,
    w: WeightKind,
    t: SieveTables,
    rho_table: PiecewiseFunction | None = None,
    omega_table: PiecewiseFunction | None = None,
) -> float:
    """sum of weight(u - u_d)/d over y-smooth d in (z, x/y], u_d = log d/log y.

    The weight is the Buchstab or Dickman function; summation is exactly
    rounded, so the result does not depend on enumeration order.
    """
    hi = p.x / p.y
    if hi > t.limit:
        raise ResourceError(f"x/y={hi} exceeds the sieve limit {t.limit}")
    d = smooth_numbers(t.primes_upto(min(p.y, max(hi, 2.0))), hi)
    d = d[d > p.z]
    if d.size == 0:
        return 0.0
    u_d = np.log(d.astype(float)) / math.log(p.y)
    args = p.u - u_d
    if w is WeightKind.BUCHSTAB_OMEGA:
        weights = special.omega(args, table=omega_table)
    elif w is WeightKind.DICKMAN_RHO:
        weights = special.rho(args, table=rho_table)
    else:
        raise DomainError(f"unknown weight kind {w!r}")
    terms = weights / d.astype(float)
    return math.fsum(terms.tolist())


# -- Monte Carlo oracle for the DSA risk probability -------------------------------


def _sample_kbit(rng: np.random.Generator, k: int, samples: int):
    """Uniform k-bit integers (top bit set).  numpy path for k <= 62, word
    assembly into Python ints above."""
    if k <= 62:
        return rng.integers(1 << (k - 1), 1 << k, size=samples, dtype=np.int64)
    nbits = k - 1
    nwords = (nbits + 63) // 64
    words = rng.integers(0, np.iinfo(np.uint64).max, size=(samples, nwords),
                         dtype=np.uint64, endpoint=True)
    mask = (1 << nbits) - 1
    top = 1 << nbits
    return [top | (int.from_bytes(row.tobytes(), "little") & mask) for row in words]


def _smooth_parts_int64(ns: np.ndarray, primes: np.ndarray) -> np.ndarray:
    rem = ns.copy()
    sp = np.ones_like(ns)
    for p in primes.tolist():
        idx = np.flatnonzero(rem % p == 0)
        while idx.size:
            rem[idx] //= p
            sp[idx] *= p
            idx = idx[rem[idx] % p == 0]
    return sp


def _smooth_part_bigint(n: int, primorial: int) -> int:
    s = 1
    g = math.gcd(n, primorial)
    while g > 1:
        s *= g
        n //= g
        g = math.gcd(n, g)
    return s


def eta_empirical(
    d: DsaParams, samples: int, seed: int, t: SieveTables
) -> tuple[float, float]:
    """Monte Carlo estimate of the DSA risk probability.

    Samples n uniformly from [2**(k-1), 2**k), extracts the 2**l-smooth part
    by dividing out every sieved prime <= 2**l, and tests whether it exceeds
    2**m.  Returns (sample proportion, binomial standard error).  Deterministic
    for a fixed seed (Philox counter-based PRNG keyed by the seed).
    """
    if samples < 1:
        raise DomainError("need at least one sample")
    bound = 1 << d.l
    if bound > t.limit:
        raise ResourceError(
            f"trial division needs primes up to 2^{d.l} = {bound}, beyond the "
            f"sieve limit {t.limit}"
        )
    primes = t.primes_upto(float(bound))
    rng = np.random.Generator(np.random.Philox(key=seed))
    ns = _sample_kbit(rng, d.k, samples)
    threshold = 1 << d.m
    if d.m >= d.k:
        hits = 0  # smooth part <= n < 2**k <= 2**m: can never exceed the threshold
    elif isinstance(ns, np.ndarray):
        sp = _smooth_parts_int64(ns, primes)
        hits = int(np.count_nonzero(sp > threshold))
    else:
        primorial = math.prod(int(p) for p in primes.tolist())
        hits = sum(1 for n in ns if _smooth_part_bigint(n, primorial) > threshold)
    est = hits / samples
    std_err = math.sqrt(est * (1.0 - est) / samples)
    return est, std_err
