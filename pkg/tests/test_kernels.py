"""The compiled extension and the pure-Python kernels must agree bitwise:
the rest of the package treats them as interchangeable."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import spannerkit._kernels_py as pure
from spannerkit import kernels

compiled = pytest.importorskip(
    "spannerkit._kernels", reason="compiled kernels unavailable"
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
ks = st.integers(min_value=2, max_value=16)


def test_compiled_backend_selected():
    assert kernels.USING_COMPILED
    assert kernels.azimuth is compiled.azimuth


@given(dx=finite, dy=finite)
@settings(max_examples=500, deadline=None)
def test_azimuth_bitwise(dx, dy):
    if dx == 0.0 and dy == 0.0:
        return
    assert compiled.azimuth(dx, dy) == pure.azimuth(dx, dy)


@given(dx=finite, dy=finite, k=ks)
@settings(max_examples=500, deadline=None)
def test_cone_index_bitwise(dx, dy, k):
    if dx == 0.0 and dy == 0.0:
        return
    assert compiled.cone_index(dx, dy, k) == pure.cone_index(dx, dy, k)


@given(dx=finite, dy=finite, k=ks)
@settings(max_examples=500, deadline=None)
def test_projection_bitwise(dx, dy, k):
    if dx == 0.0 and dy == 0.0:
        return
    assert compiled.theta_projection_len(dx, dy, k) == pure.theta_projection_len(dx, dy, k)


def test_cone_index_on_exact_boundaries():
    for k in (4, 5, 6, 7, 9, 12):
        theta = 2 * math.pi / k
        for i in range(k):
            az = i * theta + theta / 2
            dx, dy = math.sin(az), math.cos(az)
            assert compiled.cone_index(dx, dy, k) == pure.cone_index(dx, dy, k) == i


def test_point_in_tri_bitwise():
    rng = random.Random(7)
    for _ in range(2000):
        vals = [rng.uniform(-10, 10) for _ in range(8)]
        eps = rng.choice([0.0, 1e-9, 1e-6])
        assert compiled.point_in_tri(*vals, eps) == pure.point_in_tri(*vals, eps)


def test_cone_edges_bitwise_across_configs():
    rng = random.Random(31)
    xs = [rng.random() for _ in range(160)]
    ys = [rng.random() for _ in range(160)]
    for k, proj, mask in [
        (6, True, 0b010101),
        (6, True, 0),
        (6, False, 0),
        (5, True, 0),
        (5, False, 0),
        (7, True, 0),
        (12, False, 0),
    ]:
        assert compiled.cone_edges(xs, ys, k, proj, mask) == pure.cone_edges(
            xs, ys, k, proj, mask
        )


def test_cone_edges_deterministic():
    rng = random.Random(99)
    xs = [rng.random() for _ in range(60)]
    ys = [rng.random() for _ in range(60)]
    a = kernels.cone_edges(xs, ys, 6, True, 0b010101)
    b = kernels.cone_edges(xs, ys, 6, True, 0b010101)
    assert a == b
