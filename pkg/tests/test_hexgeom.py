import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hexsum.hexgeom import (
    SQRT3,
    CartesianPoint,
    GridSpec,
    HexPoint,
    Side,
    cartesian_from_hex,
    hex_from_cartesian,
    hex_grid,
    hexnorm,
    in_cartesian_hexagon,
    region_classify,
)

coord = st.floats(-50, 50, allow_nan=False)


def test_from_pair_sets_third_coordinate():
    p = HexPoint.from_pair(0.3, 1.1)
    assert p.t3 == pytest.approx(-1.4)
    assert p.diffs() == pytest.approx((-0.8, 2.5, -1.7))


def test_sum_constraint_is_enforced():
    with pytest.raises(ValueError):
        HexPoint(1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        HexPoint(math.nan, 0.0, 0.0)
    HexPoint(1.0, 2.0, -3.0 + 1e-13)


def test_forward_map_example():
    t = hex_from_cartesian(CartesianPoint(1.0, 0.0))
    assert t.as_tuple() == pytest.approx((SQRT3 / 2, 0.0, -SQRT3 / 2))


def test_inverse_of_unit_vertex():
    # t1 - t3 = sqrt(3) x1
    x = cartesian_from_hex(HexPoint(1.0, 0.0, -1.0))
    assert (x.x1, x.x2) == pytest.approx((2 / SQRT3, 0.0))


@given(coord, coord)
def test_round_trip(x1, x2):
    x = cartesian_from_hex(hex_from_cartesian(CartesianPoint(x1, x2)))
    assert x.x1 == pytest.approx(x1, abs=1e-12)
    assert x.x2 == pytest.approx(x2, abs=1e-12)


@given(coord, coord, coord, coord)
def test_inner_product_scaling(x1, x2, y1, y2):
    s = hex_from_cartesian(CartesianPoint(x1, x2))
    t = hex_from_cartesian(CartesianPoint(y1, y2))
    assert x1 * y1 + x2 * y2 == pytest.approx(2 / 3 * s.dot(t), abs=1e-9 * (1 + abs(s.dot(t))))


@given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
def test_hexagon_membership_matches_norm(x1, x2):
    t = hex_from_cartesian(CartesianPoint(x1, x2))
    if abs(hexnorm(t) - 1) > 1e-9:
        assert in_cartesian_hexagon(CartesianPoint(x1, x2)) == (hexnorm(t) <= 1)


def test_hexnorm_and_arithmetic():
    p = HexPoint(0.5, -2.0, 1.5)
    q = HexPoint.from_pair(1.0, 1.0)
    assert hexnorm(p) == 2.0
    assert (p + q).as_tuple() == pytest.approx((1.5, -1.0, -0.5))
    assert (p - q).as_tuple() == pytest.approx((-0.5, -3.0, 3.5))
    assert (-p).as_tuple() == (-0.5, 2.0, -1.5)
    assert (2 * p).as_tuple() == (1.0, -4.0, 3.0)


def test_region_labels():
    assert region_classify(HexPoint(0.2, 0.1, -0.3)).name == "E---"
    assert region_classify(HexPoint(0.6, 0.0, -0.6)).outside_count == 1
    assert region_classify(HexPoint(2.0, -1.0, -1.0)).outside_count == 2
    assert region_classify(HexPoint(3.0, 0.5, -3.5)).name == "E+++"
    edge = region_classify(HexPoint(0.5, 0.0, -0.5))
    assert edge.on_boundary and Side.BOUNDARY in edge.pattern
    with pytest.raises(ValueError):
        region_classify(HexPoint.origin(), threshold=0.0)


def test_grid_order_is_row_major():
    g = GridSpec.square(-1, 1, 3)
    x1, x2, t1, t2, t3 = g.arrays()
    assert list(x1[:3]) == [-1.0, 0.0, 1.0]
    assert list(x2[:3]) == [-1.0, -1.0, -1.0]
    assert np.allclose(t1 + t2 + t3, 0)
    assert len(hex_grid(g)) == g.size == 9


def test_hexplane_grid():
    g = GridSpec("hexplane", (1.0, 2.0), (0.5, 0.5), (2, 3))
    x1, x2, t1, t2, t3 = g.arrays()
    assert t1.tolist() == [0.5, 1.5] * 3
    assert np.allclose(x1, (t1 - t3) / SQRT3)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(system="polar", center=(0, 0), half_widths=(1, 1), resolution=(3, 3)),
        dict(system="cartesian", center=(0, 0), half_widths=(0, 1), resolution=(3, 3)),
        dict(system="cartesian", center=(0, 0), half_widths=(1, 1), resolution=(1, 3)),
    ],
)
def test_grid_validation(kwargs):
    with pytest.raises(ValueError):
        GridSpec(**kwargs)
