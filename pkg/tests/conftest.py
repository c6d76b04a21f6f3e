import pytest

from gdslab.manifolds import builtin_manifold
from gdslab.voronoi import PointSet, torus_voronoi


@pytest.fixture(scope="session")
def sphere2():
    return builtin_manifold("sphere", 2)


@pytest.fixture(scope="session")
def sphere3():
    return builtin_manifold("sphere", 3)


@pytest.fixture(scope="session")
def sphere4():
    return builtin_manifold("sphere", 4)


@pytest.fixture(scope="session")
def rp2():
    return builtin_manifold("tP", 1)


@pytest.fixture(scope="session")
def torus2():
    return builtin_manifold("torus", 2, 3)


@pytest.fixture(scope="session")
def torus3():
    return builtin_manifold("torus", 3, 3)


@pytest.fixture(scope="session")
def klein():
    return builtin_manifold("klein")


@pytest.fixture(scope="session")
def voronoi2():
    return torus_voronoi(2, PointSet.random(2, 25, seed=7))


@pytest.fixture(scope="session")
def voronoi3():
    return torus_voronoi(3, PointSet.random(3, 14, seed=0))


@pytest.fixture(scope="session")
def small_voronoi2():
    return torus_voronoi(2, PointSet.random(2, 5, seed=11))
