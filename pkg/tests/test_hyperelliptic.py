import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from oracles import grid_zeros, quad_primitive
from troplag.errors import DriftBoundViolated, InadmissiblePolynomial, WrongZeroCount
from troplag.realization.hyperelliptic import (choose_R, default_polynomial, find_zeros, newton_zeros,
                                               series_coefficients, track_zero_drift, zero_tracks)

XI = [0, 1]
XI_CUBED_MINUS = [0, -1, 0, 1]      # xi (xi^2 - 1)
XI2_PLUS_XI = [0, 1, 1]             # xi^2 + xi


def test_linear_model_is_two_thirds_r_cubed():
    m = series_coefficients(XI, 40)
    assert m.c[0] == pytest.approx(2 / 3, abs=1e-15)
    assert all(c == 0 for c in m.c[1:])
    r, th = 3.0, 0.4
    assert m.phi(r, th) == pytest.approx(2 / 3 * r**3 * math.cos(3 * th), rel=1e-14)


def test_cubic_monomial_is_two_fifths_r_fifth():
    m = series_coefficients([0, 0, 0, 1], 40, strict=False)
    r, th = 2.0, 1.1
    assert m.phi(r, th) == pytest.approx(0.4 * r**5 * math.cos(5 * th), rel=1e-13)


def test_even_model_carries_the_log_term():
    m = series_coefficients(XI2_PLUS_XI, 40)
    assert m.log_index is not None
    assert m.c_log == pytest.approx(-1 / 8, abs=1e-15)
    # leading terms of l^2/2 + l/2
    assert m.c[0] == pytest.approx(0.5) and m.c[1] == pytest.approx(0.5)


@pytest.mark.parametrize("f", [XI2_PLUS_XI, XI_CUBED_MINUS, default_polynomial(4), default_polynomial(5)])
@pytest.mark.parametrize("theta", [0.0, 0.3, 1.7])
def test_series_matches_radial_quadrature(f, theta):
    m = series_coefficients(f, 40)
    r0, r1 = m.R0, 50.0
    series = float(m.phi(r1, theta) - m.phi(r0, theta))
    quad = quad_primitive(f, m.k, r0, r1, theta)
    assert abs(series - quad) <= 1e-6 * abs(quad)


def test_gradient_matches_finite_differences():
    m = series_coefficients(default_polynomial(3), 40)
    r, th, h = 30.0, 0.77, 1e-5
    _, pr, pt = m.grad(r, th)
    assert pr == pytest.approx((m.phi(r + h, th) - m.phi(r - h, th)) / (2 * h), rel=1e-7)
    assert pt == pytest.approx((m.phi(r, th + h) - m.phi(r, th - h)) / (2 * h), rel=1e-7)


@pytest.mark.parametrize("f, why", [
    ([1, 0, -1], "leading"),            # -xi^2 + 1
    ([0, 0, 0, 1.0 - 1.0], "degree"),
    (np.poly([1, 1, 1])[::-1].tolist(), "multiplicity"),
])
def test_inadmissible_polynomials(f, why):
    with pytest.raises(InadmissiblePolynomial):
        series_coefficients(f, 40)


def test_triple_root_rejected_unless_relaxed():
    with pytest.raises(InadmissiblePolynomial):
        series_coefficients([0, 0, 0, 1], 40)
    assert series_coefficients([0, 0, 0, 1], 40, strict=False).d == 3


def test_series_order_must_cover_the_log_slot():
    with pytest.raises(InadmissiblePolynomial):
        series_coefficients(default_polynomial(5), 4)


def test_linear_zeros_at_r10():
    zs = find_zeros(series_coefficients(XI, 40), 10.0)
    assert zs == pytest.approx([math.pi / 6, math.pi / 2, 5 * math.pi / 6], abs=1e-12)


def test_cubic_has_five_zeros_matching_grid_oracle():
    m = series_coefficients(XI_CUBED_MINUS, 40)
    zs = find_zeros(m, 20.0)
    ref = grid_zeros(lambda t: float(m.phi(20.0, t)), m.period)
    assert len(zs) == 5
    assert zs == pytest.approx(ref, abs=1e-10)


def test_monomial_zeros_do_not_move():
    m = series_coefficients(XI, 40)
    tr = zero_tracks(m, [10.0, 100.0, 1000.0])
    exact = np.array([math.pi / 6, math.pi / 2, 5 * math.pi / 6])
    assert np.abs(tr - exact).max() <= 1e-12


def test_zero_count_failure_is_reported():
    m = series_coefficients(default_polynomial(5), 40)
    with pytest.raises(WrongZeroCount):
        find_zeros(m, 0.05)


@given(st.integers(1, 6), st.floats(30.0, 400.0))
def test_zero_count_is_d_plus_2(d, r):
    m = series_coefficients(default_polynomial(d), 40)
    r = max(r, choose_R(m))
    assert len(find_zeros(m, r)) == d + 2


@given(st.integers(1, 5), st.floats(40.0, 300.0))
def test_newton_refines_to_roots(d, r):
    m = series_coefficients(default_polynomial(d), 40)
    r = max(r, choose_R(m))
    zs = find_zeros(m, r)
    again = newton_zeros(m, np.array([r]), zs + 1e-4)[0]
    assert again == pytest.approx(zs, abs=1e-11)


def test_drift_monomial_is_stationary():
    rep = track_zero_drift(series_coefficients(XI, 40), (20.0, 200.0))
    assert all(math.isinf(e) for e in rep.exponents)


def test_drift_odd_exponent():
    rep = track_zero_drift(series_coefficients(XI_CUBED_MINUS, 40), (20.0, 200.0))
    assert rep.required == 3.0
    assert min(rep.exponents) >= 3.0 - 0.2


def test_drift_even_exponent():
    rep = track_zero_drift(series_coefficients(XI2_PLUS_XI, 40), (20.0, 200.0))
    assert rep.required == 2.0
    assert min(rep.exponents) >= 2.0 - 0.2


def test_drift_violation_raises():
    m = series_coefficients(XI2_PLUS_XI, 40)
    with pytest.raises(DriftBoundViolated):
        track_zero_drift(m, (20.0, 200.0), tolerance=-5.0)


def test_sign_and_leading_rescaling():
    m = series_coefficients(default_polynomial(3), 40)
    half = m.with_leading(0.25)
    assert half.phi(20.0, 0.3) == pytest.approx(0.5 * m.phi(20.0, 0.3), rel=1e-14)
    assert m.with_sign(-1).phi(20.0, 0.3) == pytest.approx(-m.phi(20.0, 0.3), rel=1e-15)


def test_roots_constructor():
    m = series_coefficients(roots=[0, 0, 1, 1])
    assert sorted(z.real for z in m.double_roots) == [0.0, 1.0]
    assert m.coefficients == pytest.approx((0, 0, 1, -2, 1))
