import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.interpolate import PchipInterpolator

from troplag import catalog
from troplag.errors import MonotonicityFailure
from troplag.realization.glue import tropical_zeros
from troplag.realization.hyperelliptic import choose_R, default_polynomial, find_zeros, series_coefficients
from troplag.realization.outer import smooth_outer
from troplag.realization.rho import build_rho, match_targets, periodic_pchip, pchip_slopes

EPS = 0.1


@pytest.fixture(scope="module")
def e111_rho():
    model = series_coefficients(default_polynomial(1), 40)
    R = choose_R(model) + EPS
    sources = tropical_zeros(smooth_outer(catalog.e111(), R))
    return build_rho(sources, model, R, EPS), R


@given(st.lists(st.floats(-5, 5), min_size=4, max_size=12), st.integers(0, 2**31))
def test_slopes_match_scipy_pchip(ys, seed):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.uniform(0.1, 1.0, len(ys)))
    y = np.asarray(ys)
    ref = PchipInterpolator(x, y).derivative()(x)
    assert pchip_slopes(x, y) == pytest.approx(ref, abs=1e-12)


def test_interpolant_matches_scipy_inside_the_middle_period():
    S = np.array([0.3, 1.0, 2.2])
    Y = np.array([[0.35, 0.9, 2.4]])
    P = math.pi
    x = np.concatenate([S - P, S, S + P])
    y = np.concatenate([Y[0] - P, Y[0], Y[0] + P])
    t = np.linspace(0.3, 0.3 + P, 50, endpoint=False)
    ours = periodic_pchip(S, Y, P, t, rows=np.zeros(len(t), dtype=int))
    assert ours == pytest.approx(PchipInterpolator(x, y)(t), abs=1e-13)


def test_identity_when_sources_are_the_targets():
    model = series_coefficients([0, 1], 40)  # monomial: zeros never move
    R = choose_R(model) + EPS
    sources = find_zeros(model, R + EPS)
    rho = build_rho(sources, model, R, EPS)
    rr, tt = np.meshgrid(np.linspace(R - EPS, 5 * R, 30), np.linspace(0, math.pi, 200))
    assert np.abs(rho(rr, tt) - tt).max() < 1e-12


def test_e111_monotone_on_dense_samples(e111_rho):
    rho, R = e111_rho
    rr, tt = np.meshgrid(np.linspace(R - EPS, R + 2 * EPS, 40), np.linspace(0, math.pi, 10_000))
    _, d = rho(rr, tt, deriv=True)
    assert d.min() > 0


def test_periodicity(e111_rho):
    rho, R = e111_rho
    r = np.linspace(R - EPS, 3 * R, 25)[:, None]
    t = np.linspace(-2, 5, 300)[None, :]
    assert np.abs(rho(r, t + math.pi) - rho(r, t) - math.pi).max() < 1e-12


def test_identity_on_inner_collar(e111_rho):
    rho, R = e111_rho
    r = np.linspace(R - EPS, R, 11)[:, None]
    t = np.linspace(0, math.pi, 101)[None, :]
    assert np.all(rho(r, t) == np.broadcast_to(t, (11, 101)))


def test_sources_land_on_model_zeros_beyond_the_blend(e111_rho):
    rho, R = e111_rho
    for r in (R + EPS, 2 * R, 10 * R):
        zs = find_zeros(rho.model, r)
        got = np.sort(np.mod(rho(np.full(len(rho.sources), r), rho.sources), math.pi))
        assert got == pytest.approx(zs, abs=1e-10)


def test_radial_drift_decays_like_r_cubed():
    model = series_coefficients(default_polynomial(3), 40)
    R = choose_R(model) + EPS
    sources = find_zeros(model, R + EPS) + 0.01
    rho = build_rho(sources, model, R, EPS)
    near = rho.drift_constant((R + EPS, 3 * R))
    far = rho.drift_constant((3 * R, 30 * R))
    assert far <= 2 * near


def test_match_targets_picks_nearest_cyclic_labelling():
    P = math.pi
    shift, T = match_targets(np.array([0.1, 1.0, 2.0]), np.array([0.05, 1.1, 3.1]), P)
    assert T == pytest.approx([3.1 - P, 0.05, 1.1])
    assert shift == -1


def test_count_mismatch_raises():
    model = series_coefficients(default_polynomial(3), 40)
    with pytest.raises(MonotonicityFailure):
        build_rho(np.array([0.1, 1.0, 2.0]), model, choose_R(model) + EPS, EPS)


def test_json_summary(e111_rho):
    rho, R = e111_rho
    doc = rho.to_json()
    assert doc["R"] == R and len(doc["sources"]) == 3
