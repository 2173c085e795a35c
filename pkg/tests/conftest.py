import pytest

from facelab import build_complex, build_poset


@pytest.fixture
def four_cycle():
    return build_complex(4, [(1, 2), (2, 3), (3, 4), (1, 4)])


@pytest.fixture
def path4():
    return build_complex(4, [(1, 2), (2, 3), (3, 4)])


@pytest.fixture
def rp2():
    """The 6-vertex triangulation of the projective plane."""
    return build_complex(
        6,
        [
            (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 2, 6), (1, 5, 6),
            (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6),
        ],
    )


@pytest.fixture
def torus9():
    """A 9-vertex grid triangulation of the torus (3x3, wrapped)."""

    def index(i, j):
        return 3 * (i % 3) + (j % 3) + 1

    triangles = []
    for i in range(3):
        for j in range(3):
            triangles.append((index(i, j), index(i + 1, j), index(i, j + 1)))
            triangles.append((index(i + 1, j), index(i, j + 1), index(i + 1, j + 1)))
    return build_complex(9, triangles)


@pytest.fixture
def two_triangle_poset():
    """Two triangles glued along their whole boundary: a 2-sphere."""
    return build_poset(
        ["0", "v1", "v2", "v3", "e12", "e13", "e23", "ta", "tb"],
        [
            ["0", "v1"], ["0", "v2"], ["0", "v3"],
            ["v1", "e12"], ["v2", "e12"],
            ["v1", "e13"], ["v3", "e13"],
            ["v2", "e23"], ["v3", "e23"],
            ["e12", "ta"], ["e13", "ta"], ["e23", "ta"],
            ["e12", "tb"], ["e13", "tb"], ["e23", "tb"],
        ],
    )


@pytest.fixture
def two_edge_poset():
    """Two edges on the same two vertices: a circle."""
    return build_poset(
        ["0", "v1", "v2", "a", "b"],
        [["0", "v1"], ["0", "v2"], ["v1", "a"], ["v2", "a"], ["v1", "b"], ["v2", "b"]],
    )
