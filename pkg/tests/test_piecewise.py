import json
import math

import numpy as np
import pytest

from smoothdiv import DomainError, load_piecewise, save_piecewise
from smoothdiv.piecewise import PiecewiseFunction
from smoothdiv.special import build_buchstab_table, build_dickman_table


def test_roundtrip_is_bit_identical(tmp_path, dickman):
    path = tmp_path / "dickman.json"
    save_piecewise(dickman, path)
    loaded = load_piecewise(path)
    assert np.array_equal(loaded.knots, dickman.knots)
    assert np.array_equal(loaded.coeffs, dickman.coeffs)
    assert np.array_equal(loaded.certificate, dickman.certificate)
    assert loaded.u_max == dickman.u_max
    assert loaded.target_rel_err == dickman.target_rel_err
    assert loaded.kind == dickman.kind
    # Saving again reproduces the file byte for byte.
    path2 = tmp_path / "again.json"
    save_piecewise(loaded, path2)
    assert path.read_bytes() == path2.read_bytes()


def test_rebuild_is_bit_identical(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    save_piecewise(build_buchstab_table(u_cut=8), a)
    save_piecewise(build_buchstab_table(u_cut=8), b)
    assert a.read_bytes() == b.read_bytes()


def test_schema_tag_checked(tmp_path):
    path = tmp_path / "bogus.json"
    path.write_text(json.dumps({"schema": "something-else/9", "kind": "dickman"}))
    with pytest.raises(DomainError, match="schema"):
        load_piecewise(path)


def test_knots_must_increase():
    with pytest.raises(DomainError, match="increasing"):
        PiecewiseFunction(
            kind="dickman",
            knots=np.array([0.0, 2.0, 1.0]),
            coeffs=np.zeros((2, 4)),
            u_max=2.0,
            target_rel_err=1e-10,
            certificate=np.zeros(2),
        )


def test_one_segment_per_knot_pair():
    with pytest.raises(DomainError, match="segment"):
        PiecewiseFunction(
            kind="dickman",
            knots=np.array([0.0, 1.0, 2.0]),
            coeffs=np.zeros((3, 4)),
            u_max=2.0,
            target_rel_err=1e-10,
            certificate=np.zeros(3),
        )


def test_unknown_kind_rejected():
    with pytest.raises(DomainError, match="kind"):
        PiecewiseFunction(
            kind="mystery",
            knots=np.array([0.0, 1.0]),
            coeffs=np.zeros((1, 4)),
            u_max=1.0,
            target_rel_err=1e-10,
            certificate=np.zeros(1),
        )


def test_exact_integration_matches_quadrature(dickman):
    # Antiderivative evaluation vs a crude Riemann check on one segment.
    a, b = 2.25, 2.75
    n = 20000
    xs = np.linspace(a, b, n + 1)
    mids = (xs[:-1] + xs[1:]) / 2.0
    riemann = float(np.sum(dickman.value(mids)) * (b - a) / n)
    assert dickman.integral(a, b) == pytest.approx(riemann, rel=1e-7)


def test_integration_range_checked(dickman):
    with pytest.raises(DomainError):
        dickman.integral(-1.0, 2.0)


def test_right_continuity_at_knots(dickman, buchstab):
    # Evaluation at an integer uses the segment to its right; continuity makes
    # the left limit agree to within the certified accuracy.
    for table, knot in ((dickman, 3.0), (dickman, 17.0), (buchstab, 4.0)):
        k = table.segment_index(knot)
        assert float(table.knots[k]) == knot
        left_limit = table._segment_right_value(k - 1)
        assert table.value(knot) == pytest.approx(left_limit, rel=1e-11)


def test_evaluation_outside_range_rejected(dickman):
    with pytest.raises(DomainError):
        dickman.value(np.array([5.0, 101.0]))
    with pytest.raises(DomainError):
        dickman.value(-0.5)


def test_buchstab_initial_segment_matches_reciprocal(buchstab):
    us = np.linspace(1.0, 2.0, 41)
    vals = buchstab.value(us)
    assert np.max(np.abs(vals - 1.0 / us) * us) <= buchstab.target_rel_err


def test_dickman_initial_segment_is_constant_one(dickman):
    assert list(dickman._rows[0]) == [1.0]
    assert dickman.value(0.123) == 1.0
