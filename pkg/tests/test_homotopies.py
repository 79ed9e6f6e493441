import pytest

from isotower.errors import InvalidInput
from isotower.homotopies import (
    FAMILIES,
    MID_1,
    MID_2,
    MID_3,
    TOP_1,
    TOP_2,
    composite,
    escape_norm,
    null_homotopy,
)
from isotower.linalg import deviation, scale_of
from isotower.random_instances import random_injective, random_thom_point, random_tower_point
from isotower.tower import ThomPoint, TowerPoint, in_Y_k, point_deviation, thom_deviation

D0, D1 = 3, 4


def _point(name, seed):
    if name == TOP_1:
        return random_injective(D1, D0, seed)
    if name == TOP_2:
        return random_tower_point(D0, D1, D0, seed)
    if name == MID_1:
        return random_thom_point(D0, D1, 1, seed)
    if name == MID_2:
        return random_tower_point(D0, D1, 1, seed)
    return random_tower_point(D0, D1, 0, seed)


def _distance(a, b):
    if isinstance(a, TowerPoint):
        return point_deviation(a, b)
    if isinstance(a, ThomPoint):
        return thom_deviation(a, b)
    if isinstance(a, tuple):
        return max(_distance(x, y) for x, y in zip(a, b))
    if isinstance(a, float):
        return abs(a - b) / max(1.0, abs(a))
    return deviation(a, b) / scale_of(a, b)


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_homotopy_starts_at_the_composite(name):
    for seed in range(3):
        point = _point(name, seed)
        if name == MID_3 and in_Y_k(point.alpha, point.k + 1):
            continue
        assert _distance(null_homotopy(name, 0.0, point), composite(name, point)) < 1e-9


@pytest.mark.parametrize("name", sorted(FAMILIES))
def test_homotopy_escapes(name):
    point = _point(name, 7)
    assert escape_norm(name, 1e3, point) > escape_norm(name, 0.0, point)


def test_negative_time_is_rejected():
    with pytest.raises(InvalidInput):
        null_homotopy(TOP_1, -1.0, random_injective(D1, D0, 0))


def test_unknown_family():
    with pytest.raises(InvalidInput):
        null_homotopy("bottom-9", 0.0, None)
    with pytest.raises(InvalidInput):
        composite("bottom-9", None)


def test_top_2_needs_a_top_point():
    with pytest.raises(InvalidInput):
        null_homotopy(TOP_2, 0.0, random_tower_point(D0, D1, 1, 0))


def test_mid_families_need_inner_levels():
    with pytest.raises(InvalidInput):
        null_homotopy(MID_1, 0.0, random_thom_point(D0, D1, D0, 0))
    with pytest.raises(InvalidInput):
        null_homotopy(MID_2, 0.0, random_tower_point(D0, D1, D0, 0))
