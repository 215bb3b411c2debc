import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import _wrap_map, sheet_paths
from troplag import catalog
from troplag.errors import SignRelationViolated
from troplag.realization.outer import bump, radial_sign_check, smooth_outer, smooth_step, wrap


def pl_value(ts, r, theta, sheet=0):
    """Unsmoothed potential <m, p(l)> with p(l) = l^2, read straight from the lift slopes.

    The base direction of l = r e^{it} is 2t; the sheet follows the upstairs turn number.
    """
    t = (theta + math.pi * sheet) % (2 * math.pi)
    base = 2 * t
    turn = int(base // (2 * math.pi))
    b = base % (2 * math.pi)
    angs = [math.atan2(v[1], v[0]) % (2 * math.pi) for v in ts.fan.ray_vectors]
    j = max(i for i, a in enumerate(angs) if a <= b)
    paths = sheet_paths(ts)
    s0 = 0 if turn == 0 else _wrap_map(ts)[paths[0][-1]]
    m = next(l.slope for l in ts.lifts if l.cone == j and l.sheet == paths[s0][j])
    return r**2 * (m[0] * math.cos(base) + m[1] * math.sin(base))


@pytest.fixture(scope="module")
def e111_outer():
    return smooth_outer(catalog.e111(), 10.0)


def test_smooth_step_is_a_step():
    x = np.linspace(-1, 2, 301)
    y = smooth_step(x)
    assert np.all(y[x <= 0] == 0) and np.all(y[x >= 1] == 1)
    assert np.all(np.diff(y) >= 0)
    assert smooth_step(0.5) == pytest.approx(0.5)


def test_bump_profile():
    assert bump(0.0, 1.0) == 1.0 and bump(0.49, 1.0) == 1.0 and bump(1.0, 1.0) == 0.0


def test_window_free_values_equal_tropical_potential(e111_outer):
    o = e111_outer
    ts = catalog.e111()
    rng = np.random.default_rng(1)
    checked = 0
    for _ in range(400):
        r, th = rng.uniform(10, 40), rng.uniform(0, 2 * math.pi)
        if min(abs(r * wrap(th - a)) for a in o.corners) < o.delta:
            continue
        checked += 1
        assert float(o.value(r, th, 0)) == pytest.approx(pl_value(ts, r, th), rel=1e-14)
    assert checked > 100


def test_values_just_outside_windows_are_unsmoothed(e111_outer):
    o = e111_outer
    ts = catalog.e111()
    for a in o.corners:
        for r in (10.0, 25.0):
            for side in (-1, 1):
                th = a + side * 1.0001 * o.delta / r
                assert float(o.value(r, th, 0)) == pytest.approx(pl_value(ts, r, th), rel=1e-15, abs=1e-12)


def test_windows_are_disjoint_at_R(e111_outer):
    o = e111_outer
    c = sorted(o.corners) + [o.corners[0] + 2 * math.pi]
    half = o.delta / o.R
    assert all(c[i + 1] - c[i] > 2 * half for i in range(len(o.corners)))


def test_lower_bound_relation_on_windows(e111_outer):
    o = e111_outer
    for a in o.corners:
        th = a + np.linspace(-o.delta / o.R, o.delta / o.R, 2001)
        assert np.all(np.abs(o.delta_f(th)) >= o.m_delta * abs(float(o.delta_f(a))) - 1e-12)


def test_zero_slopes_give_zero_potential():
    o = smooth_outer(catalog.split_trivial(), 5.0)
    assert not o.corners
    assert np.all(o.value(np.linspace(5, 9, 7), np.linspace(0, 6, 7), 0) == 0)


def test_sign_relation_e111():
    rep = radial_sign_check(smooth_outer(catalog.e111(), 10.0), (10.0, 30.0), 10_000)
    assert rep.ok and rep.checked > 9000


def test_sign_relation_vacuous_for_coinciding_sheets():
    rep = radial_sign_check(smooth_outer(catalog.split_trivial(), 5.0), (5.0, 15.0), 1000)
    assert rep.ok and rep.checked == 0


def test_corrupted_bump_is_caught():
    bad = smooth_outer(catalog.e111(), 10.0).with_m_delta(10.0)
    with pytest.raises(SignRelationViolated):
        radial_sign_check(bad, (10.0, 30.0), 10_000)


@given(st.sampled_from(["e111", "split_cross_n4", "split_hexagon_n6"]), st.floats(5.0, 50.0))
def test_outer_is_homogeneous_outside_windows(name, R):
    o = smooth_outer(getattr(catalog, name)(), R)
    th = np.linspace(0.01, o.domain, 97)
    r = 3 * R
    v1, v2 = o.value(r, th, 0), o.value(2 * r, th, 0)
    far = np.array([min(abs(r * wrap(t - a)) for a in o.corners) >= o.delta for t in th])
    assert np.allclose(v2[far], 2**o.k * v1[far], rtol=1e-12, atol=1e-9)
