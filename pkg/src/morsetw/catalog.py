"""A few standard triangulations used by tests and demos."""

from __future__ import annotations

import itertools

from .complex import SimplicialComplex, validate_complex


def boundary_of_simplex(dim: int) -> SimplicialComplex:
    """Boundary of the ``dim``-simplex; ``dim`` is 3 (a 2-sphere) or 4 (a 3-sphere)."""
    return validate_complex(itertools.combinations(range(dim + 1), dim))


def single_triangle() -> SimplicialComplex:
    return validate_complex([(0, 1, 2)])


def single_tetrahedron() -> SimplicialComplex:
    return validate_complex([(0, 1, 2, 3)])


def two_glued_tetrahedra() -> SimplicialComplex:
    return validate_complex([(0, 1, 2, 3), (0, 1, 2, 4)])


def disjoint_union(*parts: SimplicialComplex) -> SimplicialComplex:
    faces, shift = [], 0
    for K in parts:
        faces += [tuple(v + shift for v in f) for f in K.maximal_faces]
        shift += max(K.vertices) + 1
    return validate_complex(faces)


def torus() -> SimplicialComplex:
    """Seven-vertex torus."""
    return validate_complex(
        [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)]
        + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)])


def projective_plane() -> SimplicialComplex:
    """Six-vertex real projective plane."""
    return validate_complex([
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
        (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)])


def cross_polytope_boundary() -> SimplicialComplex:
    """Boundary of the 4-dimensional cross-polytope: 8 vertices, 16 tetrahedra."""
    return validate_complex(
        [tuple(2 * i + s for i, s in enumerate(signs))
         for signs in itertools.product((0, 1), repeat=4)])


def join_of_triangle_boundaries() -> SimplicialComplex:
    """Join of two triangle boundaries: a 3-sphere with 6 vertices, 9 tetrahedra."""
    a = list(itertools.combinations((0, 1, 2), 2))
    b = list(itertools.combinations((3, 4, 5), 2))
    return validate_complex([e + f for e in a for f in b])
