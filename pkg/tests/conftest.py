from fractions import Fraction

import pytest

from src.models.finite.finite_model import FiniteModel
from src.models.torus.torus_model import TorusModel
from src.triangulation.triangulation import Triangulation
from src.words.word import Alphabet

SIMPLEX4_BOUNDARY = [[1, 2, 3, 4], [0, 2, 3, 4], [0, 1, 3, 4], [0, 1, 2, 4], [0, 1, 2, 3]]
TWO_TET_SPHERE = [[0, 1, 2, 3], [0, 1, 2, 3]]


def stellar_subdivide(facets, index, label):
    """Cone the facet at `index` from a new vertex `label`."""
    facet = list(facets[index])
    cone = [[label if j == i else facet[j] for j in range(4)] for i in range(4)]
    return [f for k, f in enumerate(facets) if k != index] + cone


def one_tet(first_face_perm):
    """A single tetrahedron with face 0 glued to face 1 and face 2 glued to face 3."""
    sigma = (0, 1, 3, 2)
    inverse = [0] * 4
    for i, image in enumerate(first_face_perm):
        inverse[image] = i
    return Triangulation([[(0, 1, tuple(first_face_perm)), (0, 0, tuple(inverse)), (0, 3, sigma), (0, 2, sigma)]])


@pytest.fixture
def z4_model():
    return FiniteModel.cyclic(4, [2], {"s": 1})


@pytest.fixture
def torus_model():
    return TorusModel(Alphabet(("a", "b")), [(Fraction(1, 3), Fraction(1, 5)), (Fraction(2, 7), Fraction(0))],
                      dimension=2)


@pytest.fixture
def simplex4_boundary():
    return Triangulation.from_facets(SIMPLEX4_BOUNDARY)


@pytest.fixture
def two_tet_sphere():
    return Triangulation.from_facets(TWO_TET_SPHERE)


@pytest.fixture
def triangulation_corpus():
    """Closed triangulations with at most ten tetrahedra."""
    facet_lists = [
        TWO_TET_SPHERE,
        SIMPLEX4_BOUNDARY,
        stellar_subdivide(TWO_TET_SPHERE, 0, 4),
        stellar_subdivide(stellar_subdivide(TWO_TET_SPHERE, 0, 4), 0, 5),
        stellar_subdivide(SIMPLEX4_BOUNDARY, 0, 5),
    ]
    corpus = [Triangulation.from_facets(facets) for facets in facet_lists]
    corpus.append(one_tet((1, 0, 2, 3)))
    corpus.append(one_tet((1, 2, 3, 0)))
    return corpus
