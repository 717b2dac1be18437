"""
Test configuration and fixtures
"""

import pytest

from app.services.complex_kernel import SpaceBuilder
from app.services.fixtures import build_fixture, grid_space


@pytest.fixture(scope="session")
def fan():
    """Three filled triangles sharing one vertex (space K)."""
    return build_fixture("triangle_fan3")


@pytest.fixture(scope="session")
def fan_prime():
    """The same fan drawn in a second universe (space K')."""
    return build_fixture("triangle_fan3_prime")


@pytest.fixture(scope="session")
def figure2():
    return build_fixture("two_cycles")


@pytest.fixture(scope="session")
def single_cycle():
    return build_fixture("cycle_figure3a")


@pytest.fixture(scope="session")
def intersecting_cycles():
    return build_fixture("intersecting_cycles_3b")


@pytest.fixture(scope="session")
def ribbon():
    return build_fixture("ribbon_4b")


@pytest.fixture(scope="session")
def earrings():
    return build_fixture("hawaiian_earrings")


@pytest.fixture(scope="session")
def necklace():
    return build_fixture("hawaiian_necklace")


@pytest.fixture(scope="session")
def butterfly():
    return build_fixture("hawaiian_butterfly")


@pytest.fixture
def fresh_fan():
    """A fan whose registry a test may change."""
    return build_fixture("triangle_fan3")


@pytest.fixture(scope="session")
def grid():
    """Fully triangulated 6 x 6 grid without registered shapes."""
    return grid_space(6, 6, "grid6")


@pytest.fixture
def lone_triangle():
    """One closed triangle registered as 'tri'."""
    builder = SpaceBuilder("lone")
    a, b, c = builder.point(0, 0), builder.point(2, 0), builder.point(0, 2)
    tri = builder.triangle(a, b, c)
    builder.register("tri", [tri], [a])
    return builder.build()


@pytest.fixture
def fan_document_text():
    """Small but complete document: two triangles sharing a vertex."""
    return (
        "# two triangles\n"
        "proxima-space 1\n"
        "space pair\n"
        "vertex 0 0 0\n"
        "vertex 1 1 0\n"
        "vertex 2 1 1\n"
        "vertex 3 2 1\n"
        "vertex 4 2 2\n"
        "cell 0 0 0\n"
        "cell 1 0 1\n"
        "cell 2 0 2\n"
        "cell 3 0 3\n"
        "cell 4 0 4\n"
        "cell 5 1 0 1\n"
        "cell 6 1 1 2\n"
        "cell 7 1 0 2\n"
        "cell 8 1 2 3\n"
        "cell 9 1 3 4\n"
        "cell 10 1 2 4\n"
        "cell 11 2 0 1 2\n"
        "cell 12 2 2 3 4\n"
        "complex pair 11 12 | 2\n"
        "probe beta0 beta0\n"
        "map identity identity\n"
    )
