import warnings

import numpy as np
import pytest

from troplag import catalog
from troplag.errors import BranchPointSkipped, EmptySubject
from troplag.fan import p2_fan
from troplag.multisection import genericity_count
from troplag.realization.cloud import sample_lagrangian
from troplag.realization.glue import realize
from troplag.render import num, render_cloud, render_fan, render_svg, render_tropical


def test_p2_fan_draws_three_rays_and_three_cone_labels():
    svg = render_fan(p2_fan())
    assert svg.count('class="ray"') == 3
    assert svg.count('class="cone-label"') == 3
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")


@pytest.mark.parametrize("make", [catalog.e111, catalog.split_cross_n4, catalog.split_hexagon_n6, catalog.maximal_n1])
def test_one_marker_per_crossing(make):
    ts = make()
    svg = render_tropical(ts)
    assert svg.count('class="crossing"') == len(genericity_count(ts).crossings)


def test_e111_has_three_crossing_markers():
    svg = render_tropical(catalog.e111())
    assert svg.count('class="crossing"') == 3
    assert "N = 3" in svg


def test_tropical_rendering_is_byte_identical():
    assert render_tropical(catalog.e111()) == render_tropical(catalog.e111())


@pytest.fixture(scope="module")
def clouds():
    out = {}
    for name, real in (("e111", realize(catalog.e111())),
                       ("hexagon", realize(catalog.split_hexagon_n6(), roots=[0, 0, 1, 1]))):
        gp = real.glued
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BranchPointSkipped)
            cloud = sample_lagrangian(gp, n_r=20, n_theta=20, r_min=0.0)
        double = [(z.real, z.imag) for z, m in gp.model.roots if m == 2]
        single = [(z.real, z.imag) for z, m in gp.model.roots if m == 1]
        out[name] = (cloud, double, single)
    return out


@pytest.mark.parametrize("name, n_double", [("e111", 0), ("hexagon", 2)])
def test_cloud_marks_each_double_root(clouds, name, n_double):
    cloud, double, single = clouds[name]
    assert len(double) == n_double
    svg = render_cloud(cloud.xi, cloud.sheet, double, single)
    assert svg.count('class="immersed"') == n_double
    assert svg.count('class="branch"') == len(single)
    assert svg.count('class="pt"') == len(cloud)
    assert svg == render_cloud(cloud.xi, cloud.sheet, double, single)


def test_cloud_is_thinned_beyond_max_points(clouds):
    cloud, _, _ = clouds["e111"]
    svg = render_cloud(cloud.xi, cloud.sheet, max_points=100)
    assert 0 < svg.count('class="pt"') <= 100


def test_empty_subjects_are_refused():
    with pytest.raises(EmptySubject):
        render_cloud(np.array([], dtype=complex), np.array([], dtype=int))
    with pytest.raises(EmptySubject):
        render_svg(None)
    with pytest.raises(EmptySubject):
        render_svg(object())


def test_dispatch_matches_direct_calls():
    ts = catalog.e111()
    assert render_svg(ts) == render_tropical(ts)
    assert render_svg(ts.fan) == render_fan(ts.fan)


def test_numbers_are_six_significant_digits():
    assert num(1 / 3) == "0.333333"
    assert num(-0.0) == "0"
    assert num(123456789) == "1.23457e+08"
