import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from morsetw.catalog import (
    boundary_of_simplex,
    disjoint_union,
    projective_plane,
    single_tetrahedron,
    single_triangle,
    torus,
    two_glued_tetrahedra,
)
from morsetw.complex import (
    brute_force_er,
    critical_set,
    dual_graph,
    erase_greedy,
    external_triangles,
    hasse_diagram,
    primal_graph,
    spine,
    triangle_components,
    validate_complex,
)
from morsetw.errors import (
    DegenerateFace,
    DuplicateFace,
    MixedDimension,
    NotDimension3,
    TriangleInMoreThanTwoTetrahedra,
)
from morsetw.graph import Graph

ALL_TRIANGLES_6 = list(itertools.combinations(range(6), 3))
complexes_2d = st.lists(st.sampled_from(ALL_TRIANGLES_6), min_size=1, max_size=10, unique=True).map(validate_complex)


@pytest.fixture
def sphere2():
    return boundary_of_simplex(3)


@pytest.fixture
def sphere3():
    return boundary_of_simplex(4)


# -- graph ---------------------------------------------------------------


def test_graph_canonicalises_arcs():
    G = Graph(3, ((2, 1), (0, 1)))
    assert G.arcs == ((0, 1), (1, 2))
    assert G.neighbors(1) == {0, 2}
    assert G.degree(1) == 2


@pytest.mark.parametrize("arcs", [((0, 0),), ((0, 1), (1, 0)), ((0, 5),)])
def test_graph_rejects_bad_arcs(arcs):
    with pytest.raises(ValueError):
        Graph(3, arcs)


def test_graph_partition_must_cross_arcs():
    with pytest.raises(ValueError):
        Graph(3, ((0, 1),), partition=(1, 1, 2))


def test_two_colouring():
    assert Graph(4, ((0, 1), (1, 2), (2, 3))).is_bipartite
    assert not Graph(3, ((0, 1), (1, 2), (0, 2))).is_bipartite


def test_components():
    G = Graph(5, ((0, 1), (3, 4)))
    assert sorted(map(sorted, G.components())) == [[0, 1], [2], [3, 4]]
    assert not G.is_connected()


# -- validation ----------------------------------------------------------


def test_single_triangle_closure():
    K = validate_complex([(0, 1, 2)])
    assert K.f_vector == (3, 3, 1)
    assert K.dimension == 2


def test_duplicate_face_after_sorting():
    with pytest.raises(DuplicateFace):
        validate_complex([(0, 1, 2), (0, 2, 1)])


def test_boundary_of_4_simplex_counts(sphere3):
    assert sphere3.f_vector == (5, 10, 10, 5)


def test_mixed_and_degenerate():
    with pytest.raises(MixedDimension):
        validate_complex([(0, 1, 2), (0, 1, 2, 3)])
    with pytest.raises(DegenerateFace):
        validate_complex([(0, 0, 1)])


def test_faces_are_sorted():
    K = validate_complex([(2, 1, 0), (3, 2, 1)])
    assert K.maximal_faces == ((0, 1, 2), (1, 2, 3))
    assert (1, 2) in K and (0, 3) not in K


# -- derived graphs ------------------------------------------------------


def test_hasse_single_triangle():
    H = hasse_diagram(single_triangle())
    assert (len(H.simplices), len(H.arcs)) == (7, 9)


def test_hasse_boundary_tetrahedron(sphere2):
    H = hasse_diagram(sphere2)
    assert (len(H.simplices), len(H.arcs)) == (14, 24)


@given(complexes_2d)
def test_hasse_arc_count(K):
    H = hasse_diagram(K)
    # each k-simplex has k+1 facets (vertices have none)
    assert len(H.arcs) == sum(len(s) for s in H.simplices if len(s) > 1)


def test_spine_boundary_tetrahedron(sphere2):
    G = spine(sphere2)
    assert (len(G.side(1)), len(G.side(2)), len(G.arcs)) == (4, 6, 12)
    assert all(G.degree(u) == 3 for u in G.side(1))
    assert all(G.degree(u) == 2 for u in G.side(2))


def test_spine_boundary_4_simplex(sphere3):
    G = spine(sphere3)
    assert (len(G.side(1)), len(G.side(2)), len(G.arcs)) == (10, 10, 30)
    assert all(G.degree(u) == 3 for u in G.nodes)


def test_spine_single_triangle():
    G = spine(single_triangle())
    assert (G.node_count, len(G.arcs)) == (4, 3)


@given(complexes_2d)
def test_spine_shape(K):
    G = spine(K)
    assert G.is_bipartite
    assert len(G.side(1)) == len(K.triangles)
    assert len(G.side(2)) == len(K.edges)
    assert sum(G.degree(u) for u in G.side(1)) == 3 * len(K.triangles)
    assert all(len(G.labels[u]) == 3 for u in G.side(1))


def test_dual_graph_examples(sphere3):
    K5 = dual_graph(sphere3)
    assert (K5.node_count, len(K5.arcs)) == (5, 10)
    assert len(dual_graph(single_tetrahedron()).arcs) == 0
    assert dual_graph(two_glued_tetrahedra()).arcs == ((0, 1),)


def test_dual_graph_errors(sphere2):
    with pytest.raises(NotDimension3):
        dual_graph(sphere2)
    with pytest.raises(TriangleInMoreThanTwoTetrahedra):
        dual_graph(validate_complex([(0, 1, 2, 3), (0, 1, 2, 4), (0, 1, 2, 5)]))


def test_dual_degree_sum_on_closed(sphere3):
    G = dual_graph(sphere3)
    assert sum(G.degree(u) for u in G.nodes) == 2 * len(sphere3.triangles)


def test_primal_graph(sphere2):
    assert len(primal_graph(sphere2).arcs) == 6


def test_double_of_two_tetrahedra_is_rejected():
    # gluing two copies of one tetrahedron along all faces is not simplicial
    with pytest.raises(DuplicateFace):
        validate_complex([(0, 1, 2, 3), (0, 1, 2, 3)])


# -- erasure -------------------------------------------------------------


def test_external_examples(sphere2):
    t = (0, 1, 2)
    assert external_triangles(single_triangle()) == {t}
    assert external_triangles(sphere2) == set()
    assert external_triangles([(0, 1, 2), (1, 2, 3)]) == {(0, 1, 2), (1, 2, 3)}


def test_erase_examples(sphere2):
    r = erase_greedy(single_triangle())
    assert r.erasable and r.residual == frozenset() and r.erase_order == [(0, 1, 2)]
    r = erase_greedy(sphere2)
    assert not r.erasable and len(r.residual) == 4 and r.erase_order == []
    r = erase_greedy(sphere2.triangles[1:])
    assert r.erasable and len(r.erase_order) == 3


def _random_erase(tris, rng):
    """Erase in a random order among currently external triangles."""
    alive = set(tris)
    while True:
        ext = sorted(external_triangles(alive)) if alive else []
        if not ext:
            return frozenset(alive)
        alive.remove(rng.choice(ext))


@given(complexes_2d, st.integers(0, 10**6))
@settings(max_examples=50)
def test_erasure_is_confluent(K, seed):
    rng = random.Random(seed)
    residual = erase_greedy(K).residual
    for _ in range(10):
        assert _random_erase(K.triangles, rng) == residual


@given(complexes_2d)
def test_erase_order_is_valid(K):
    r = erase_greedy(K)
    alive = set(K.triangles)
    for t in r.erase_order:
        assert t in external_triangles(alive)
        alive.remove(t)
    assert frozenset(alive) == r.residual


@given(complexes_2d)
def test_external_means_removable_first(K):
    ext = external_triangles(K)
    for t in K.triangles:
        others = set(K.triangles) - {t}
        # t is external iff one of its edges is in no other triangle
        free = any(not any(set(e) <= set(o) for o in others) for e in itertools.combinations(t, 2))
        assert (t in ext) == free


def test_brute_force_er_examples(sphere2):
    assert brute_force_er(single_triangle(), 0) == 0
    assert brute_force_er(sphere2, 2) == 1
    assert brute_force_er(disjoint_union(sphere2, sphere2), 3) == 2
    assert brute_force_er(disjoint_union(sphere2, sphere2), 1) is None


def test_brute_force_er_surfaces():
    assert brute_force_er(torus()) == 1
    assert brute_force_er(projective_plane()) == 1


def _er_by_subsets(K):
    """Plain subset enumeration by increasing size (no pruning)."""
    tris = K.triangles
    for k in range(len(tris) + 1):
        for drop in itertools.combinations(tris, k):
            if erase_greedy(tris, drop).erasable:
                return k


@given(st.lists(st.sampled_from(list(itertools.combinations(range(5), 3))), min_size=1, max_size=8, unique=True))
@settings(max_examples=60)
def test_brute_force_er_matches_plain_enumeration(tris):
    K = validate_complex(tris)
    assert brute_force_er(K) == _er_by_subsets(K)


@given(complexes_2d)
def test_er_zero_iff_greedy_erasable(K):
    assert (brute_force_er(K) == 0) == erase_greedy(K).erasable


@given(complexes_2d)
@settings(max_examples=40)
def test_er_is_sum_over_components(K):
    total = sum(brute_force_er(c) for c in triangle_components(K))
    assert brute_force_er(K) == total


@given(complexes_2d)
@settings(max_examples=40)
def test_critical_set_is_a_certificate(K):
    crit = critical_set(K)
    assert len(crit) == brute_force_er(K)
    assert erase_greedy(K, crit).erasable
