from fractions import Fraction as F

import pytest

from lamkit import PolygonClass, build_pullback_tree, parse_angle
from lamkit.fdl import root_fdl


@pytest.fixture(scope="session")
def rabbit_root():
    return root_fdl(2, [PolygonClass((F(1, 7), F(2, 7), F(4, 7)))])


@pytest.fixture(scope="session")
def rabbit_tree(rabbit_root):
    return build_pullback_tree(rabbit_root, 5)


@pytest.fixture(scope="session")
def basilica_root():
    return root_fdl(2, [PolygonClass((F(1, 3), F(2, 3)))])


@pytest.fixture(scope="session")
def basilica_tree(basilica_root):
    return build_pullback_tree(basilica_root, 8)


@pytest.fixture(scope="session")
def cubic_root():
    ta = PolygonClass(tuple(parse_angle(t, 3) for t in ("_001", "_010", "_100")))
    tb = PolygonClass(tuple(parse_angle(t, 3) for t in ("_112", "_121", "_211")))
    return root_fdl(3, [ta, tb])


@pytest.fixture(scope="session")
def cubic_tree(cubic_root):
    return build_pullback_tree(cubic_root, 3)
