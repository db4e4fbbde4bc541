"""Geometry primitives: speed law, sampled curves, travel-time quadrature."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brachisto import geometry as geo
from brachisto.errors import CurveNotAdmissible, EmptyCurve


def radial_curve(n, r_end=0.0):
    s = np.linspace(0.0, 1.0, n)
    r = 1.0 + (r_end - 1.0) * s
    xy = np.stack([r, np.zeros_like(r)], axis=1)
    return geo.SampledCurve(s, xy)


def test_speed_law_values():
    assert geo.speed(1.0) == 0.0
    assert geo.speed(0.5) == pytest.approx(1.0)
    assert math.isinf(geo.speed(0.0))
    r = np.linspace(0.01, 1.0, 50)
    assert np.all(np.diff(geo.speed(r)) < 0.0)


def test_radial_time_closed_form():
    # antiderivative of 1/v along a radius; full drop is pi/2
    assert geo.radial_time(0.0) == 0.0
    assert geo.radial_time(1.0) == pytest.approx(math.pi / 2, abs=1e-15)
    # derivative check at interior points
    for r in (0.2, 0.5, 0.9):
        h = 1e-6
        num = (geo.radial_time(r + h) - geo.radial_time(r - h)) / (2 * h)
        assert num == pytest.approx(1.0 / geo.speed(r), rel=1e-7)


def test_radial_drop_matches_closed_form():
    t = geo.tof_sampled(radial_curve(10001))
    assert t == pytest.approx(math.pi / 2, abs=2e-6)


def test_diameter_matches_closed_form():
    # (1,0) to (-1,0) through the origin: two radial drops back to back
    s = np.linspace(0.0, 1.0, 10001)
    r = 1.0 - 2.0 * s
    xy = np.stack([r, np.zeros_like(r)], axis=1)
    t = geo.tof_sampled(geo.SampledCurve(s, xy))
    assert t == pytest.approx(math.pi, abs=2e-6)


def test_partial_radial_drop():
    for r_end in (0.3, 0.62, 0.9):
        t = geo.tof_sampled(radial_curve(4001, r_end))
        expected = math.pi / 2 - geo.radial_time(r_end)
        assert t == pytest.approx(expected, abs=1e-6)


def test_refinement_second_order():
    # crooked but admissible curve; halving h should shrink the error ~4x
    def curve(n):
        s = np.linspace(0.0, 1.0, n)
        r = 1.0 - 0.8 * s
        th = 0.9 * s * np.sin(2.0 * s)
        xy = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
        return geo.SampledCurve(s, xy)

    ref = geo.tof_sampled(curve(100001))
    e1 = abs(geo.tof_sampled(curve(1001)) - ref)
    e2 = abs(geo.tof_sampled(curve(4001)) - ref)
    assert e2 < e1 / 3.0
    assert e1 < 1e-5


def test_invariances():
    s = np.linspace(0.0, 1.0, 801)
    r = 1.0 - 0.7 * s
    th = 0.5 * np.sin(3.0 * s) * s
    xy = np.stack([r * np.cos(th), r * np.sin(th)], axis=1)
    c = geo.SampledCurve(s, xy)
    t = geo.tof_sampled(c)
    assert geo.tof_sampled(geo.reflected(c)) == pytest.approx(t, abs=1e-13)
    assert geo.tof_sampled(geo.rotated(c, 2.34)) == pytest.approx(t, abs=1e-12)
    rev = geo.SampledCurve(s, xy[::-1].copy())
    assert geo.tof_sampled(rev) == pytest.approx(t, abs=1e-13)


def test_fill_times_consistent_with_tof():
    c = geo.fill_times(radial_curve(500))
    assert c.t_cum[0] == 0.0
    assert np.all(np.diff(c.t_cum) >= 0.0)
    assert c.t_cum[-1] == pytest.approx(geo.tof_sampled(c), abs=1e-14)


def test_validation_rejects_bad_curves():
    s = np.linspace(0.0, 1.0, 5)
    with pytest.raises(CurveNotAdmissible):
        geo.SampledCurve(s, np.full((5, 2), 1.2))  # outside the disk
    with pytest.raises(EmptyCurve):
        geo.SampledCurve(s[::-1], np.zeros((5, 2)))  # s not increasing
    with pytest.raises(EmptyCurve):
        geo.tof_sampled(geo.SampledCurve(s, np.zeros((5, 2))))  # no length


def test_polar_point_round_trip():
    p = geo.PolarPoint(0.7, 2.2)
    q = p.to_cartesian().to_polar()
    assert q.r == pytest.approx(0.7, abs=1e-15)
    assert q.theta == pytest.approx(2.2, abs=1e-15)


def test_normalize_angle():
    # maps to [-pi, pi]; the branch cut itself may land on either sign
    assert abs(geo.normalize_angle(3 * math.pi)) == pytest.approx(math.pi, abs=1e-15)
    assert geo.normalize_angle(-0.1) == pytest.approx(-0.1, abs=1e-16)
    assert geo.normalize_angle(2.5 * math.pi) == pytest.approx(0.5 * math.pi, abs=1e-15)


def test_resample_preserves_endpoints_and_time():
    c = geo.fill_times(radial_curve(3001, 0.2))
    c2 = geo.resample(c, 301)
    assert np.allclose(c2.xy[0], c.xy[0])
    assert np.allclose(c2.xy[-1], c.xy[-1])
    assert geo.tof_sampled(c2) == pytest.approx(geo.tof_sampled(c), abs=1e-5)


def test_csv_round_trip_exact():
    c = geo.fill_times(radial_curve(40, 0.35)).with_params(family="radial")
    text = geo.curve_to_csv(c)
    assert text.splitlines()[0] == geo.CSV_HEADER
    back = geo.curve_from_csv(text)
    assert np.array_equal(np.asarray(back.s), np.round(np.asarray(c.s), 12)) or np.allclose(
        back.s, c.s, atol=1e-11
    )
    assert np.allclose(back.xy, c.xy, atol=1e-11)
    # serialize again: byte-identical after one round trip
    assert geo.curve_to_csv(back) == geo.curve_to_csv(geo.curve_from_csv(geo.curve_to_csv(back)))


def test_json_round_trip():
    c = geo.fill_times(radial_curve(25, 0.5)).with_params(family="radial", D=0.0)
    d = geo.curve_to_json_dict(c)
    back = geo.curve_from_json_dict(d)
    assert back.params["family"] == "radial"
    assert np.allclose(back.xy, c.xy, atol=1e-11)
    assert np.allclose(back.t_cum, c.t_cum, atol=1e-11)


def test_curve_distance():
    a = radial_curve(200)
    b = geo.rotated(a, 0.3)
    d = geo.curve_distance(a, b)
    assert d > 0.0
    assert geo.curve_distance(a, a) == 0.0
    # distance dominated by the rim points, 2*sin(0.15) apart
    assert d == pytest.approx(2 * math.sin(0.15), abs=1e-2)


@given(st.floats(0.05, 0.95), st.floats(-math.pi, math.pi))
@settings(max_examples=60, deadline=None)
def test_segment_time_positive_and_reversible(r, th):
    a = np.array([[0.9 * math.cos(0.1), 0.9 * math.sin(0.1)]])
    b = np.array([[r * math.cos(th), r * math.sin(th)]])
    if np.allclose(a, b):
        return
    fwd = geo.segment_times(np.vstack([a, b]))
    bwd = geo.segment_times(np.vstack([b, a]))
    assert fwd.sum() > 0.0
    assert fwd.sum() == pytest.approx(bwd.sum(), rel=1e-12)
