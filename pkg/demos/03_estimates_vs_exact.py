#!/usr/bin/env python3
"""Asymptotic estimates against exact sieve counts at desk scale.

theta(x, y, z) counts integers n <= x whose largest y-smooth divisor exceeds
z.  The estimate is

    theta ~ (rho(u) + C_or(u, v)) x - gamma C_or'(u, v) x / log y,

with an explicit error envelope evaluated at implied constant 1.  The same
machinery covers the smooth count psi, the rough count phi, and the
reciprocal smooth sum S(y, z); every estimate is compared here against an
exact, independently counted value.
"""

import math

from smoothdiv import (
    ScaledParams,
    build_sieve,
    phi_estimate,
    phi_exact,
    psi_estimate_hildebrand,
    psi_estimate_saias,
    psi_exact,
    s_estimate,
    s_exact,
    theta_estimate,
    theta_exact,
    theta_exact_decomposed,
)

t = build_sieve(10**6)
print("sieve built to 1e6")

print("\n=== theta: count vs estimate ===")
for (x, y, z) in [(1e6, 31.6227766, 1000.0), (1e6, 100.0, 500.0), (1e5, 17.78279, 316.2)]:
    p = ScaledParams(x, y, z)
    est = theta_estimate(p)
    exact = theta_exact(x, y, z, t)
    print(f"x={x:.0e} y={y:8.2f} z={z:7.1f}: exact={exact:>7} "
          f"estimate={est.value:11.1f} envelope={est.error_envelope:10.1f} "
          f"ratio={abs(exact - est.value) / est.error_envelope:.3f} "
          f"in_domain={est.in_theorem_domain}")

print("\n=== the two exact routes agree to the integer ===")
x, y, z = 10**5, 20.0, 100.0
print(f"direct smooth-part count:   {theta_exact(x, y, z, t)}")
print(f"sum of phi(x/d) over smooth d > z: {theta_exact_decomposed(x, y, z, t)}")

print("\n=== psi: first-order vs second-order estimate ===")
for u in (2.0, 2.5, 3.0):
    x = 1e6
    y = x ** (1 / u)
    exact = psi_exact(x, y, t)
    h = psi_estimate_hildebrand(x, y)
    s = psi_estimate_saias(x, y)
    print(f"u={u}: exact={exact:>7}  first-order={h.value:10.1f} "
          f"(err {abs(exact - h.value) / exact:6.2%})  second-order={s.value:10.1f} "
          f"(err {abs(exact - s.value) / exact:6.2%})")

print("\n=== phi: rough numbers ===")
for y in (20.0, 100.0, 500.0):
    exact = phi_exact(1e6, y, t)
    est = phi_estimate(1e6, y)
    print(f"y={y:5.0f}: exact={exact:>7} estimate={est.value:10.1f} "
          f"ratio={abs(exact - est.value) / est.error_envelope:.3f}")

print("\n=== S(y, z): reciprocal sum over smooth d > z ===")
for (y, z) in [(100.0, 10.0), (100.0, 1e4), (1000.0, 1e6)]:
    exact = s_exact(y, z, t)
    est = s_estimate(y, z)
    branch = "z >= y log y" if z >= y * math.log(y) else "z < y log y"
    print(f"y={y:6.0f} z={z:8.0e}: exact={exact:8.5f} estimate={est.value:8.5f} "
          f"envelope={est.error_envelope:.4f} [{branch}]")
