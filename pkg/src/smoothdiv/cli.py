"""Command-line surface with machine-readable output.

Subcommands:

* ``special``   -- evaluate rho, rho', rho'', omega, omega' at a point;
* ``estimate``  -- asymptotic estimates (theta, psi-h, psi-s, phi, s, lemma6)
                   with main/second terms, error envelope, and domain flags;
* ``exact``     -- exact sieve-backed counts (theta, psi, phi, s, smoothpart);
* ``compare``   -- exact vs. estimate over a parameter grid, emitted as a
                   comparison-report JSON document;
* ``dsa-risk``  -- the DSA large-subgroup exposure probability, analytic and
                   optionally Monte Carlo;
* ``validate``  -- run the invariant suites.

Exit codes: 0 success, 2 usage error, 3 resource limit, 4 domain error.
Numbers in JSON/CSV output are decimal strings with 17 significant digits, so
values round-trip exactly and identical invocations (including ``--seed``)
produce byte-identical output.  A JSON config file (``--config`` or the
``SMOOTHDIV_CONFIG`` environment variable) can set tolerances, the sieve
ceiling, and the table ranges; command-line flags override it.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from dataclasses import dataclass, field, fields
from functools import lru_cache
from pathlib import Path

from . import __version__, convolution, estimators, harness, oracle, special, validation
from .errors import DomainError, ResourceError
from .params import DsaParams, ScaledParams

CONFIG_ENV_VAR = "SMOOTHDIV_CONFIG"

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_DOMAIN = 4


class UsageError(Exception):
    """Bad or missing flags for a subcommand (exit code 2)."""


def fmt17(x) -> str:
    """Render a value as a string; floats get 17 significant digits."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, str)):
        return str(x)
    return f"{float(x):.17g}"


@dataclass(frozen=True)
class Settings:
    """Runtime configuration; every field can come from the config file."""

    target_rel_err: float = special.DEFAULT_TARGET_REL_ERR
    abs_tol: float = convolution.DEFAULT_ABS_TOL
    rel_tol: float = convolution.DEFAULT_REL_TOL
    sieve_ceiling: int = oracle.DEFAULT_SIEVE_CEILING
    rho_u_max: int = special.DEFAULT_RHO_U_MAX
    omega_u_cut: int = special.DEFAULT_OMEGA_U_CUT
    epsilon: float = estimators.DEFAULT_EPSILON


def load_settings(config_path: str | None) -> Settings:
    path = config_path or os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return Settings()
    try:
        raw = json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file {path} is not valid JSON: {exc}")
    known = {f.name: f.type for f in fields(Settings)}
    unknown = set(raw) - set(known)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    return Settings(**raw)


@lru_cache(maxsize=4)
def _tables_for(target_rel_err: float, rho_u_max: int, omega_u_cut: int):
    if (target_rel_err == special.DEFAULT_TARGET_REL_ERR
            and rho_u_max == special.DEFAULT_RHO_U_MAX
            and omega_u_cut == special.DEFAULT_OMEGA_U_CUT):
        return special.default_dickman(), special.default_buchstab()
    return (special.build_dickman_table(rho_u_max, target_rel_err=target_rel_err),
            special.build_buchstab_table(omega_u_cut, target_rel_err=target_rel_err))


def _quad_spec(s: Settings) -> convolution.QuadratureSpec:
    return convolution.QuadratureSpec(abs_tol=s.abs_tol, rel_tol=s.rel_tol)


# -- output record -------------------------------------------------------------


@dataclass(frozen=True)
class OutputRecord:
    """One command's machine-readable result.

    Field order is stable for diffing; all numeric values are decimal strings
    with 17 significant digits, so serialization round-trips losslessly.
    """

    command: str
    inputs: dict
    outputs: dict
    flags: list = field(default_factory=list)
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": {k: fmt17(v) for k, v in self.inputs.items()},
            "outputs": {k: fmt17(v) for k, v in self.outputs.items()},
            "flags": list(self.flags),
            "version": self.version,
        }

    def render(self, fmt: str) -> str:
        d = self.to_dict()
        if fmt == "json":
            return json.dumps(d, indent=1) + "\n"
        if fmt == "csv":
            cols = (["command"] + [f"in_{k}" for k in d["inputs"]]
                    + [f"out_{k}" for k in d["outputs"]] + ["flags", "version"])
            vals = ([d["command"]] + list(d["inputs"].values())
                    + list(d["outputs"].values())
                    + [";".join(d["flags"]), d["version"]])
            return ",".join(cols) + "\n" + ",".join(vals) + "\n"
        if fmt == "table":
            lines = [f"command: {d['command']}"]
            for section in ("inputs", "outputs"):
                for k, v in d[section].items():
                    lines.append(f"  {k} = {v}")
            for fl in d["flags"]:
                lines.append(f"  [{fl}]")
            lines.append(f"  version {d['version']}")
            return "\n".join(lines) + "\n"
        raise UsageError(f"unknown format {fmt!r}")


def parse_output_record(text: str) -> OutputRecord:
    """Inverse of the JSON rendering (values stay decimal strings)."""
    d = json.loads(text)
    validate_output_record(d)
    return OutputRecord(command=d["command"], inputs=d["inputs"],
                        outputs=d["outputs"], flags=d["flags"], version=d["version"])


def validate_output_record(d: dict) -> None:
    """Structural check against the published output-record schema."""
    expected = ["command", "inputs", "outputs", "flags", "version"]
    if list(d.keys()) != expected:
        raise ValueError(f"record keys {list(d.keys())} != {expected}")
    if not isinstance(d["command"], str) or not isinstance(d["version"], str):
        raise ValueError("command and version must be strings")
    for section in ("inputs", "outputs"):
        if not isinstance(d[section], dict):
            raise ValueError(f"{section} must be an object")
        for k, v in d[section].items():
            if not isinstance(k, str) or not isinstance(v, str):
                raise ValueError(f"{section} entries must map strings to strings")
    if not isinstance(d["flags"], list) or not all(isinstance(f, str) for f in d["flags"]):
        raise ValueError("flags must be a list of strings")


# -- flag helpers ----------------------------------------------------------------


def _need(args, *names):
    vals = []
    for n in names:
        v = getattr(args, n, None)
        if v is None:
            raise UsageError(f"--{n} is required for this command")
        vals.append(v)
    return vals


def _estimate_flags(result) -> list[str]:
    flags = [f"in_theorem_domain={'true' if result.in_theorem_domain else 'false'}"]
    flags.extend(n for n in result.domain_notes if "FAIL" in n)
    return flags


def _sieve_for(limit_needed: float, args, settings: Settings) -> oracle.SieveTables:
    limit = int(args.limit) if getattr(args, "limit", None) else int(math.ceil(limit_needed))
    if limit < limit_needed:
        raise UsageError(f"--limit {limit} is below the required {limit_needed:g}")
    return oracle.build_sieve(max(limit, 2), ceiling=settings.sieve_ceiling)


# -- subcommands -------------------------------------------------------------------


def cmd_special(args, settings: Settings) -> OutputRecord:
    rt, ot = _tables_for(settings.target_rel_err, settings.rho_u_max, settings.omega_u_cut)
    fn = args.fn
    u = args.u
    table = rt if fn.startswith("rho") else ot
    value = {
        "rho": lambda: special.rho(u, table=rt),
        "rho1": lambda: special.rho_prime(u, table=rt),
        "rho2": lambda: special.rho_double_prime(u, table=rt),
        "omega": lambda: special.omega(u, table=ot),
        "omega1": lambda: special.omega_prime(u, table=ot),
    }[fn]()
    return OutputRecord(
        command="special",
        inputs={"fn": fn, "u": u},
        outputs={"value": value,
                 "table_max_certificate": table.max_certificate,
                 "table_target_rel_err": table.target_rel_err},
    )


def cmd_estimate(args, settings: Settings) -> OutputRecord:
    rt, ot = _tables_for(settings.target_rel_err, settings.rho_u_max, settings.omega_u_cut)
    spec = _quad_spec(settings)
    eps = settings.epsilon if args.epsilon is None else args.epsilon
    kind = args.kind
    if kind == "theta":
        x, y, z = _need(args, "x", "y", "z")
        r = estimators.theta_estimate(ScaledParams(x, y, z), rt, ot, spec, eps)
        inputs = {"x": x, "y": y, "z": z}
    elif kind == "psi-h":
        x, y = _need(args, "x", "y")
        r = estimators.psi_estimate_hildebrand(x, y, rt, eps)
        inputs = {"x": x, "y": y}
    elif kind == "psi-s":
        x, y = _need(args, "x", "y")
        r = estimators.psi_estimate_saias(x, y, rt, eps)
        inputs = {"x": x, "y": y}
    elif kind == "phi":
        x, y = _need(args, "x", "y")
        r = estimators.phi_estimate(x, y, rt, ot, eps)
        inputs = {"x": x, "y": y}
    elif kind == "s":
        y, z = _need(args, "y", "z")
        r = estimators.s_estimate(y, z, rt, spec, eps)
        inputs = {"y": y, "z": z}
    elif kind == "lemma6":
        x, y, z = _need(args, "x", "y", "z")
        r = estimators.lemma6_estimate(ScaledParams(x, y, z), rt, ot, spec)
        inputs = {"x": x, "y": y, "z": z}
    else:
        raise UsageError(f"unknown estimate kind {kind!r}")
    return OutputRecord(
        command=f"estimate {kind}",
        inputs=inputs,
        outputs={"main_term": r.main_term, "second_term": r.second_term,
                 "value": r.value, "error_envelope": r.error_envelope},
        flags=_estimate_flags(r),
    )


def cmd_exact(args, settings: Settings) -> OutputRecord:
    kind = args.kind
    if kind == "theta":
        x, y, z = _need(args, "x", "y", "z")
        t = _sieve_for(x, args, settings)
        outputs = {"value": oracle.theta_exact(x, y, z, t)}
        inputs = {"x": x, "y": y, "z": z}
    elif kind == "psi":
        x, y = _need(args, "x", "y")
        t = _sieve_for(x, args, settings)
        outputs = {"value": oracle.psi_exact(x, y, t)}
        inputs = {"x": x, "y": y}
    elif kind == "phi":
        x, y = _need(args, "x", "y")
        t = _sieve_for(x, args, settings)
        outputs = {"value": oracle.phi_exact(x, y, t)}
        inputs = {"x": x, "y": y}
    elif kind == "s":
        y, z = _need(args, "y", "z")
        t = _sieve_for(max(z, 2.0), args, settings)
        outputs = {"value": oracle.s_exact(y, z, t)}
        inputs = {"y": y, "z": z}
    elif kind == "smoothpart":
        n, y = _need(args, "n", "y")
        t = _sieve_for(n, args, settings)
        outputs = {"value": oracle.smooth_part(int(n), y, t)}
        inputs = {"n": int(n), "y": y}
    else:
        raise UsageError(f"unknown exact kind {kind!r}")
    return OutputRecord(command=f"exact {kind}", inputs=inputs, outputs=outputs)


def _parse_x_list(spec: str) -> list[float]:
    try:
        xs = [float(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise UsageError(f"malformed x list {spec!r}")
    if not xs or any(not math.isfinite(x) or x <= 0 for x in xs):
        raise UsageError(f"malformed x list {spec!r}")
    return xs


def cmd_compare(args, settings: Settings) -> tuple[str, str | None]:
    """Exact vs. estimate over the requested grid; returns (stdout text, report path)."""
    xs = _parse_x_list(args.x)
    if (args.u is None) == (args.y is None):
        raise UsageError("give exactly one of --u (y = x^(1/u)) or --y (fixed)")
    kind = args.kind
    needs_z = kind in ("theta", "s", "lemma6")
    if needs_z and (args.v is None) == (args.z is None):
        raise UsageError("give exactly one of --v (z = y^v) or --z (fixed)")
    rows = []
    t = _sieve_for(max(xs), args, settings)
    for x in xs:
        y = x ** (1.0 / args.u) if args.u is not None else args.y
        z = (y ** args.v if args.v is not None else args.z) if needs_z else None
        params = {"x": x, "y": y} | ({"z": z} if needs_z else {})
        if kind == "theta":
            est = estimators.theta_estimate(ScaledParams(x, y, z))
            exact = float(oracle.theta_exact(x, y, z, t))
        elif kind == "psi-h":
            est = estimators.psi_estimate_hildebrand(x, y)
            exact = float(oracle.psi_exact(x, y, t))
        elif kind == "psi-s":
            est = estimators.psi_estimate_saias(x, y)
            exact = float(oracle.psi_exact(x, y, t))
        elif kind == "phi":
            est = estimators.phi_estimate(x, y)
            exact = float(oracle.phi_exact(x, y, t))
        elif kind == "s":
            est = estimators.s_estimate(y, z)
            exact = oracle.s_exact(y, z, t)
        elif kind == "lemma6":
            est = estimators.lemma6_estimate(ScaledParams(x, y, z))
            exact = oracle.weighted_smooth_sum(
                ScaledParams(x, y, z), oracle.WeightKind.BUCHSTAB_OMEGA, t)
        else:
            raise UsageError(f"unknown compare kind {kind!r}")
        note = "" if est.in_theorem_domain else "; ".join(
            n for n in est.domain_notes if "FAIL" in n)
        rows.append(harness.ReportRow(params, exact, est.value,
                                      est.error_envelope, est.in_theorem_domain, note))
    ratios = sorted(r.ratio for r in rows)
    import numpy as np

    report = harness.ComparisonReport(
        f"compare-{kind}", tuple(rows), seed=0, version=__version__,
        summary={"max_ratio": max(ratios), "median_ratio": float(np.median(ratios))})
    if args.report:
        report.save(args.report)
    return report.to_json(), args.report


def cmd_dsa_risk(args, settings: Settings) -> OutputRecord:
    rt, ot = _tables_for(settings.target_rel_err, settings.rho_u_max, settings.omega_u_cut)
    spec = _quad_spec(settings)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        d = DsaParams(args.k, args.l, args.m)
        w_k = estimators.wp(d, rt, ot, spec)
        analytic = estimators.eta(d, rt, ot, spec)
    flags = [f"regime_warning={str(w.message)}" for w in caught]
    inputs = {"k": args.k, "l": args.l, "m": args.m}
    outputs = {"wp": w_k, "eta": analytic}
    if args.empirical:
        t = _sieve_for(float(1 << args.l), args, settings)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            emp, se = oracle.eta_empirical(d, args.empirical, args.seed, t)
        inputs["samples"] = args.empirical
        inputs["seed"] = args.seed
        outputs["empirical"] = emp
        outputs["empirical_std_err"] = se
        outputs["sigma_distance"] = abs(analytic - emp) / se if se > 0 else math.inf
    return OutputRecord(command="dsa-risk", inputs=inputs, outputs=outputs, flags=flags)


def cmd_validate(args, settings: Settings) -> tuple[str, bool]:
    sieve = None
    if args.suite in ("estimators", "oracle", "all"):
        sieve = oracle.build_sieve(int(args.limit) if args.limit else 10**6,
                                   ceiling=settings.sieve_ceiling)
    results = validation.run_suite(args.suite, seed=args.seed, sieve=sieve)
    lines = [r.line() for r in results]
    n_fail = sum(1 for r in results if not r.passed)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    if n_fail:
        failed = ", ".join(f"{r.suite}.{r.name}" for r in results if not r.passed)
        lines.append(f"FAILED: {failed}")
    return "\n".join(lines) + "\n", n_fail == 0


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="smoothdiv",
        description="Counts and densities of integers with a large smooth divisor.",
    )
    p.add_argument("--config", help="path to a JSON config file "
                   f"(or set {CONFIG_ENV_VAR})")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("special", help="evaluate rho, omega, or a derivative")
    sp.add_argument("--fn", required=True, choices=["rho", "rho1", "rho2", "omega", "omega1"])
    sp.add_argument("--u", required=True, type=float)
    sp.add_argument("--format", default="json", choices=["json", "csv", "table"])

    es = sub.add_parser("estimate", help="asymptotic estimate with error envelope")
    es.add_argument("kind", choices=["theta", "psi-h", "psi-s", "phi", "s", "lemma6"])
    es.add_argument("--x", type=float)
    es.add_argument("--y", type=float)
    es.add_argument("--z", type=float)
    es.add_argument("--epsilon", type=float, default=None)
    es.add_argument("--format", default="json", choices=["json", "csv", "table"])

    ex = sub.add_parser("exact", help="exact sieve-backed value")
    ex.add_argument("kind", choices=["theta", "psi", "phi", "s", "smoothpart"])
    ex.add_argument("--x", type=float)
    ex.add_argument("--y", type=float)
    ex.add_argument("--z", type=float)
    ex.add_argument("--n", type=float)
    ex.add_argument("--limit", type=float, help="sieve limit (default: as needed)")
    ex.add_argument("--format", default="json", choices=["json", "csv", "table"])

    cp = sub.add_parser("compare", help="exact vs. estimate over a grid")
    cp.add_argument("--kind", default="theta",
                    choices=["theta", "psi-h", "psi-s", "phi", "s", "lemma6"])
    cp.add_argument("--x", required=True, help="comma-separated list, e.g. 1e5,1e6,1e7")
    cp.add_argument("--u", type=float, help="derive y = x^(1/u)")
    cp.add_argument("--y", type=float, help="fixed y")
    cp.add_argument("--v", type=float, help="derive z = y^v")
    cp.add_argument("--z", type=float, help="fixed z")
    cp.add_argument("--limit", type=float, help="sieve limit (default: max x)")
    cp.add_argument("--report", help="also write the report JSON to this path")

    dr = sub.add_parser("dsa-risk", help="DSA large-subgroup exposure probability")
    dr.add_argument("--k", required=True, type=int, help="modulus-factor bit length")
    dr.add_argument("--l", required=True, type=int, help="smoothness exponent (y = 2^l)")
    dr.add_argument("--m", required=True, type=int, help="subgroup-prime bit length")
    dr.add_argument("--empirical", type=int, metavar="SAMPLES",
                    help="also run a seeded Monte Carlo with this many samples")
    dr.add_argument("--seed", type=int, default=7)
    dr.add_argument("--limit", type=float, help="sieve limit (default: 2^l)")
    dr.add_argument("--format", default="json", choices=["json", "csv", "table"])

    va = sub.add_parser("validate", help="run invariant suites")
    va.add_argument("suite", choices=["special", "convolution", "estimators", "oracle", "all"])
    va.add_argument("--seed", type=int, default=validation.DEFAULT_SEED)
    va.add_argument("--limit", type=float, help="sieve limit for oracle-backed checks")

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = load_settings(args.config)
        if args.subcommand == "special":
            sys.stdout.write(cmd_special(args, settings).render(args.format))
        elif args.subcommand == "estimate":
            sys.stdout.write(cmd_estimate(args, settings).render(args.format))
        elif args.subcommand == "exact":
            sys.stdout.write(cmd_exact(args, settings).render(args.format))
        elif args.subcommand == "compare":
            text, _path = cmd_compare(args, settings)
            sys.stdout.write(text)
        elif args.subcommand == "dsa-risk":
            sys.stdout.write(cmd_dsa_risk(args, settings).render(args.format))
        elif args.subcommand == "validate":
            text, ok = cmd_validate(args, settings)
            sys.stdout.write(text)
            return EXIT_OK if ok else EXIT_FAILURE
        return EXIT_OK
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
