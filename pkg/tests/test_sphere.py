import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from infgeom.calculus import derivative_at
from infgeom.errors import NotInCodomain, NotOnSphere, NotTangent, PoleProximity, RayExcluded, ZeroInput
from infgeom.sampling import random_perp
from infgeom.seqspace import FinSeq, e, weak_inner, weak_norm
from infgeom.sphere import (
    SpherePoint,
    SphereTangent,
    StereoChart,
    extended_chart,
    geodesic,
    geodesic_velocity,
    stereo_forward,
    stereo_inverse,
    tangent_check,
    transition,
)

PLUS = StereoChart()
MINUS = StereoChart(sign="minus")


def oracle_forward(x: np.ndarray, a: np.ndarray, sign: int = 1) -> np.ndarray:
    # direct evaluation of the projection from +-a on dense arrays
    xa = x @ a
    return (x - xa * a) / (1 - sign * xa)


def test_sphere_point_validation():
    SpherePoint(FinSeq([0.6, 0.8]))
    with pytest.raises(NotOnSphere):
        SpherePoint(FinSeq([1.0, 1.0]))
    assert json.loads(SpherePoint(e(2)).to_json()) == [0.0, 1.0]


def test_forward_examples():
    assert stereo_forward(PLUS, SpherePoint(-1.0 * e(1))) == FinSeq()
    b = SpherePoint(FinSeq([0, 0.6, 0.8]))
    assert stereo_forward(PLUS, b).isclose(b.coords, 1e-15)
    with pytest.raises(PoleProximity):
        stereo_forward(PLUS, SpherePoint(e(1)))
    with pytest.raises(PoleProximity):
        stereo_forward(MINUS, SpherePoint(-1.0 * e(1)))


def test_forward_matches_dense_oracle(rng):
    for _ in range(100):
        x = rng.normal(size=6)
        x /= np.linalg.norm(x)
        a = np.zeros(6)
        a[0] = 1
        y = stereo_forward(PLUS, SpherePoint(FinSeq(x)))
        np.testing.assert_allclose(y.padded(6), oracle_forward(x, a), atol=1e-12)
        assert abs(y[0]) <= 1e-12
        y = stereo_forward(MINUS, SpherePoint(FinSeq(x)))
        np.testing.assert_allclose(y.padded(6), oracle_forward(x, a, -1), atol=1e-12)


def test_inverse_examples(rng):
    assert stereo_inverse(PLUS, FinSeq()).coords == -1.0 * e(1)
    assert stereo_inverse(MINUS, FinSeq()).coords == e(1)
    b = FinSeq([0, 0, 1.0])
    assert stereo_inverse(PLUS, b).coords.isclose(b, 1e-15)
    with pytest.raises(NotInCodomain):
        stereo_inverse(PLUS, FinSeq([0.1, 1.0]))
    for _ in range(200):
        y = random_perp(rng, 10)
        assert stereo_forward(PLUS, stereo_inverse(PLUS, y)).isclose(y, 1e-10 * max(1, weak_norm(y)))


def test_transition_examples():
    y = FinSeq([0, 2.0])
    assert transition(y) == FinSeq([0, 0.5])
    u = FinSeq([0, 0.6, 0.8])
    assert transition(u).isclose(u, 1e-15)
    y = FinSeq([0, 1.5, -0.3, 2.0])
    assert transition(transition(y)).isclose(y, 1e-12)
    with pytest.raises(ZeroInput):
        transition(FinSeq())


def test_chart_compatibility(rng):
    # magnitudes in [0.1, 10]; for |y| -> 0 the stored point approaches -a and
    # the composite loses accuracy like eps/|y|^3
    for _ in range(500):
        y = random_perp(rng, 16)
        y = y * (math.exp(rng.uniform(math.log(0.1), math.log(10))) / weak_norm(y))
        lhs = stereo_forward(MINUS, stereo_inverse(PLUS, y))
        assert weak_norm(lhs - transition(y)) <= 1e-12


def test_custom_pole(rng):
    a = FinSeq([0.0, 0.6, 0.0, 0.8])
    chart = StereoChart(pole=a)
    x = SpherePoint.normalized(FinSeq(rng.normal(size=5)))
    y = stereo_forward(chart, x)
    assert abs(weak_inner(y, a)) <= 1e-12
    assert stereo_inverse(chart, y).coords.isclose(x.coords, 1e-12)


def test_pole_independence(rng):
    c2 = StereoChart(pole=SpherePoint.normalized(FinSeq([1.0, 1.0, -0.5])))
    for _ in range(100):
        x = SpherePoint.normalized(FinSeq(rng.normal(size=4)))
        y = stereo_forward(PLUS, x)
        z = stereo_forward(c2, stereo_inverse(PLUS, y))
        assert stereo_forward(PLUS, stereo_inverse(c2, z)).isclose(y, 1e-10 * max(1, weak_norm(y)))


def test_extended_chart_examples():
    z = SpherePoint.normalized(FinSeq([0.3, -1.0, 2.0])).coords
    assert abs(extended_chart(z)[0]) <= 1e-15
    b = FinSeq([0, 0.6, 0.8])
    assert extended_chart(2.0 * b).isclose(b + e(1), 1e-15)
    with pytest.raises(RayExcluded):
        extended_chart(e(1))
    with pytest.raises(RayExcluded):
        extended_chart(3.0 * e(1))
    with pytest.raises(RayExcluded):
        extended_chart(FinSeq())


def test_extended_chart_agrees_with_chart_on_sphere(rng):
    for _ in range(50):
        x = SpherePoint.normalized(FinSeq(rng.normal(size=5)))
        r = rng.uniform(0.5, 3)
        out = extended_chart(r * x.coords)
        assert out.isclose(stereo_forward(PLUS, x) + (r - 1) * e(1), 1e-12)


def test_tangent_check_examples():
    assert tangent_check(SpherePoint(e(1)), e(2))
    assert not tangent_check(SpherePoint(e(1)), e(1))
    v = math.pi / 2 * e(2)
    c = lambda t: geodesic(SpherePoint(e(1)), v, t).coords  # noqa: E731
    vel = derivative_at(c, 0.0, 1e-4)
    assert abs(weak_inner(e(1), vel)) <= 1e-8
    with pytest.raises(NotTangent):
        SphereTangent(SpherePoint(e(1)), e(1))


def test_geodesic_examples():
    x = SpherePoint(e(1))
    assert geodesic(x, math.pi / 2 * e(2), 1.0).coords.isclose(e(2), 1e-15)
    assert geodesic(x, math.pi * e(2), 1.0).coords.isclose(-1.0 * e(1), 1e-15)
    w = FinSeq([0, 0.3, -2.0])
    assert geodesic(x, w, 0.0).coords == x.coords
    assert geodesic(x, FinSeq(), 5.0).coords == x.coords
    assert geodesic(x, SphereTangent(x, w), 0.0).coords == x.coords


def _tangent_pair(rng):
    x = SpherePoint.normalized(FinSeq(rng.normal(size=6)))
    w = FinSeq(rng.normal(size=6))
    return x, w - weak_inner(w, x.coords) * x.coords


def test_geodesic_velocity_matches_fd(rng):
    for _ in range(50):
        x, v = _tangent_pair(rng)
        t = rng.uniform(-2, 2)
        fd = derivative_at(lambda s: geodesic(x, v, s).coords, t, 1e-3)
        assert fd.isclose(geodesic_velocity(x, v, t), 1e-8 * max(1, weak_norm(v)))
    x, v = _tangent_pair(rng)
    assert derivative_at(lambda s: geodesic(x, v, s).coords, 0.0, 1e-3).isclose(v, 1e-8 * max(1, weak_norm(v)))


@given(st.integers(0, 2**32 - 1), st.floats(-1, 1), st.floats(-1, 1))
def test_geodesic_group_property(seed, s, t):
    rng = np.random.default_rng(seed)
    x, v = _tangent_pair(rng)
    nv = weak_norm(v)
    s, t = s * 0.49 * math.pi / nv, t * 0.49 * math.pi / nv
    mid = geodesic(x, v, s)
    twice = geodesic(mid, geodesic_velocity(x, v, s), t)
    assert geodesic(x, v, s + t).coords.isclose(twice.coords, 1e-10)
    # closed form on the plane span{x, v/|v|}
    ang = nv * (s + t)
    expected = math.cos(ang) * x.coords + (math.sin(ang) / nv) * v
    assert twice.coords.isclose(expected, 1e-10)


@given(st.integers(0, 2**32 - 1))
def test_sphere_preservation(seed):
    rng = np.random.default_rng(seed)
    y = random_perp(rng, 16)
    assert abs(weak_norm(stereo_inverse(PLUS, 10 * y).coords) - 1) <= 1e-12
    x, v = _tangent_pair(rng)
    assert abs(weak_norm(geodesic(x, v, rng.uniform(-10, 10)).coords) - 1) <= 1e-12
