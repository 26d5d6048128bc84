"""Simplicial complexes of dimension 2 and 3 and the graphs derived from them.

A complex is given by its maximal faces (triangles or tetrahedra). All lower
faces are derived on demand. Node ids in derived graphs are dense and assigned
in sorted simplex order, so every construction here is deterministic.
"""

from __future__ import annotations

import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .errors import (
    DegenerateFace,
    DuplicateFace,
    InvalidFace,
    MixedDimension,
    NotDimension3,
    TriangleInMoreThanTwoTetrahedra,
)
from .graph import Graph

Simplex = tuple


@dataclass(frozen=True)
class SimplicialComplex:
    """Pure simplicial complex given by sorted maximal faces of one size.

    Build instances with :func:`validate_complex`; the constructor trusts its
    input.
    """

    maximal_faces: tuple

    @property
    def dimension(self) -> int:
        return len(self.maximal_faces[0]) - 1

    @cached_property
    def _faces(self) -> dict:
        by_dim = defaultdict(set)
        for face in self.maximal_faces:
            for k in range(1, len(face) + 1):
                by_dim[k - 1].update(itertools.combinations(face, k))
        return {d: tuple(sorted(s)) for d, s in by_dim.items()}

    def faces(self, dim: int) -> tuple:
        """All ``dim``-simplexes, sorted."""
        return self._faces.get(dim, ())

    @property
    def vertices(self) -> tuple:
        return tuple(v for (v,) in self.faces(0))

    @property
    def edges(self) -> tuple:
        return self.faces(1)

    @property
    def triangles(self) -> tuple:
        return self.faces(2)

    @property
    def tetrahedra(self) -> tuple:
        return self.faces(3)

    @cached_property
    def _index(self) -> dict:
        return {s: i for d in self._faces for i, s in enumerate(self._faces[d])}

    def index(self, simplex: Sequence[int]) -> int:
        """Position of ``simplex`` within the sorted list of its dimension."""
        return self._index[tuple(sorted(simplex))]

    def __contains__(self, simplex) -> bool:
        return tuple(sorted(simplex)) in self._index

    @property
    def f_vector(self) -> tuple:
        return tuple(len(self.faces(d)) for d in range(self.dimension + 1))

    @cached_property
    def triangle_cofaces(self) -> dict:
        """Map each triangle to the sorted tetrahedra containing it."""
        out = {t: [] for t in self.triangles}
        for tet in self.tetrahedra:
            for t in itertools.combinations(tet, 3):
                out[t].append(tet)
        return out

    def is_closed_3(self) -> bool:
        """True for 3-complexes where every triangle lies in exactly two tetrahedra."""
        return self.dimension == 3 and all(
            len(c) == 2 for c in self.triangle_cofaces.values())

    def __len__(self) -> int:
        return len(self.maximal_faces)


def validate_complex(faces: Iterable[Sequence[int]]) -> SimplicialComplex:
    """Canonicalise a list of maximal faces into a :class:`SimplicialComplex`.

    Every face must have 3 or 4 distinct non-negative vertices, all faces the
    same size, and no face may repeat (as a vertex set).
    """
    canon = []
    seen = set()
    size = None
    for raw in faces:
        face = tuple(int(v) for v in raw)
        if len(face) not in (3, 4):
            raise InvalidFace(f"face {face} must have 3 or 4 vertices")
        if size is None:
            size = len(face)
        elif len(face) != size:
            raise MixedDimension(f"face {face} has {len(face)} vertices, expected {size}")
        if any(v < 0 for v in face):
            raise InvalidFace(f"face {face} has a negative vertex index")
        key = tuple(sorted(face))
        if len(set(key)) != len(key):
            raise DegenerateFace(f"face {face} repeats a vertex")
        if key in seen:
            raise DuplicateFace(f"face {face} appears twice")
        seen.add(key)
        canon.append(key)
    if not canon:
        raise InvalidFace("a complex needs at least one face")
    return SimplicialComplex(tuple(sorted(canon)))


@dataclass(frozen=True)
class HasseDiagram:
    """Directed graph of all simplexes with arcs from each simplex to its facets.

    ``simplices`` is ordered by dimension, then lexicographically; ``arcs``
    holds ``(tau, sigma)`` index pairs with ``sigma`` a facet of ``tau``.
    """

    simplices: tuple
    arcs: tuple

    @cached_property
    def index(self) -> dict:
        return {s: i for i, s in enumerate(self.simplices)}

    def dim(self, node: int) -> int:
        return len(self.simplices[node]) - 1

    def level(self, i: int) -> list:
        """Arcs of the bipartite level between ``i``- and ``(i+1)``-simplexes."""
        return [(a, b) for a, b in self.arcs if self.dim(b) == i]


def hasse_diagram(K: SimplicialComplex) -> HasseDiagram:
    simplices = tuple(s for d in range(K.dimension + 1) for s in K.faces(d))
    index = {s: i for i, s in enumerate(simplices)}
    arcs = []
    for tau in simplices:
        if len(tau) == 1:
            continue
        for sigma in itertools.combinations(tau, len(tau) - 1):
            arcs.append((index[tau], index[sigma]))
    return HasseDiagram(simplices, tuple(arcs))


def spine(K: SimplicialComplex) -> Graph:
    """Bipartite triangle/edge incidence graph.

    Triangles come first (side 1, ids ``0 .. #triangles-1``), then edges
    (side 2). Labels hold the simplex tuples.
    """
    tris = K.triangles
    edges = K.edges
    t_count = len(tris)
    e_index = {e: t_count + i for i, e in enumerate(edges)}
    arcs = []
    for i, t in enumerate(tris):
        for e in itertools.combinations(t, 2):
            arcs.append((i, e_index[e]))
    partition = (1,) * t_count + (2,) * len(edges)
    return Graph(t_count + len(edges), tuple(arcs), partition, tris + edges)


def dual_graph(K: SimplicialComplex) -> Graph:
    """One node per tetrahedron, one arc per triangle shared by two tetrahedra."""
    if K.dimension != 3:
        raise NotDimension3("the dual graph needs a 3-dimensional complex")
    tets = K.tetrahedra
    t_index = {t: i for i, t in enumerate(tets)}
    arcs = set()
    for tri, cof in K.triangle_cofaces.items():
        if len(cof) > 2:
            raise TriangleInMoreThanTwoTetrahedra(f"triangle {tri} lies in {len(cof)} tetrahedra")
        if len(cof) == 2:
            a, b = t_index[cof[0]], t_index[cof[1]]
            arcs.add((min(a, b), max(a, b)))
    return Graph(len(tets), tuple(arcs), labels=tets)


def primal_graph(K: SimplicialComplex) -> Graph:
    """The 1-skeleton, labelled by vertex ids."""
    verts = K.vertices
    v_index = {v: i for i, v in enumerate(verts)}
    arcs = [(v_index[a], v_index[b]) for a, b in K.edges]
    return Graph(len(verts), tuple(arcs), labels=verts)


# ---------------------------------------------------------------------------
# erasability

TriangleSet = Union[SimplicialComplex, Iterable[Sequence[int]]]


def _triangle_list(K: TriangleSet) -> list:
    if isinstance(K, SimplicialComplex):
        return list(K.triangles)
    return sorted({tuple(sorted(t)) for t in K})


def _edge_star(triangles: Iterable[Simplex]) -> dict:
    star = defaultdict(set)
    for t in triangles:
        for e in itertools.combinations(t, 2):
            star[e].add(t)
    return star


def external_triangles(K: TriangleSet) -> set:
    """Triangles having an edge that lies in no other triangle."""
    tris = _triangle_list(K)
    star = _edge_star(tris)
    return {t for t in tris
            if any(len(star[e]) == 1 for e in itertools.combinations(t, 2))}


class EraseResult(NamedTuple):
    erasable: bool
    residual: frozenset
    erase_order: list


def erase_greedy(K: TriangleSet, removed: Iterable[Sequence[int]] = ()) -> EraseResult:
    """Erase external triangles until none is left.

    Triangles in ``removed`` are deleted up front (they are the critical
    set). Because erasing a triangle only ever frees edges, any maximal run
    reaches the same residual; ties are broken by sorted order.
    """
    gone = {tuple(sorted(t)) for t in removed}
    alive = set(_triangle_list(K)) - gone
    star = _edge_star(alive)
    heap = [t for t in alive
            if any(len(star[e]) == 1 for e in itertools.combinations(t, 2))]
    heapq.heapify(heap)
    order = []
    while heap:
        t = heapq.heappop(heap)
        if t not in alive:
            continue
        alive.discard(t)
        order.append(t)
        for e in itertools.combinations(t, 2):
            s = star[e]
            s.discard(t)
            if len(s) == 1:
                heapq.heappush(heap, next(iter(s)))
    return EraseResult(not alive, frozenset(alive), order)


class _Eraser:
    """Integer-indexed greedy eraser over a fixed triangle universe (search helper)."""

    def __init__(self, triangles: Sequence[Simplex]):
        self.triangles = list(triangles)
        e_ids = {}
        self.tri_edges = []
        for t in self.triangles:
            ids = []
            for e in itertools.combinations(t, 2):
                ids.append(e_ids.setdefault(e, len(e_ids)))
            self.tri_edges.append(ids)
        self.edge_tris = [[] for _ in e_ids]
        for i, ids in enumerate(self.tri_edges):
            for e in ids:
                self.edge_tris[e].append(i)

    def residual(self, alive: frozenset) -> frozenset:
        alive = set(alive)
        deg = {}
        for t in alive:
            for e in self.tri_edges[t]:
                deg[e] = deg.get(e, 0) + 1
        stack = [t for t in alive if any(deg[e] == 1 for e in self.tri_edges[t])]
        while stack:
            t = stack.pop()
            if t not in alive:
                continue
            alive.discard(t)
            for e in self.tri_edges[t]:
                deg[e] -= 1
                if deg[e] == 1:
                    for u in self.edge_tris[e]:
                        if u in alive:
                            stack.append(u)
        return frozenset(alive)


def brute_force_er(K: TriangleSet, k_max: Optional[int] = None) -> Optional[int]:
    """Exact erasability number by exhaustive search over critical sets.

    Sizes are tried in increasing order up to ``k_max`` (default: all
    triangles); returns ``None`` if no critical set of size ``<= k_max``
    works. The search only branches on triangles that survive greedy erasure
    of the current complex: a critical triangle that could have been erased
    anyway is never needed, since erasability is monotone under deletion.
    Identical residuals are explored once.
    """
    tris = _triangle_list(K)
    if k_max is None:
        k_max = len(tris)
    er = _Eraser(tris)
    start = er.residual(frozenset(range(len(tris))))
    memo = {}

    def within(alive: frozenset, k: int) -> bool:
        if not alive:
            return True
        if k == 0:
            return False
        key = (alive, k)
        hit = memo.get(key)
        if hit is not None:
            return hit
        ok = False
        seen = set()
        for t in sorted(alive):
            nxt = er.residual(alive - {t})
            if nxt in seen:
                continue
            seen.add(nxt)
            if within(nxt, k - 1):
                ok = True
                break
        memo[key] = ok
        return ok

    for k in range(k_max + 1):
        if within(start, k):
            return k
    return None


def critical_set(K: TriangleSet, k_max: Optional[int] = None) -> Optional[list]:
    """A minimum critical triangle set found by :func:`brute_force_er`'s search."""
    tris = _triangle_list(K)
    k = brute_force_er(tris, k_max)
    if k is None:
        return None
    er = _Eraser(tris)

    def search(alive, k):
        if not alive:
            return []
        if k == 0:
            return None
        for t in sorted(alive):
            rest = search(er.residual(alive - {t}), k - 1)
            if rest is not None:
                return [tris[t]] + rest
        return None

    return search(er.residual(frozenset(range(len(tris)))), k)


def triangle_components(K: TriangleSet) -> list:
    """Groups of triangles connected through shared vertices, in sorted order."""
    tris = _triangle_list(K)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in tris:
        for v in t[1:]:
            a, b = find(t[0]), find(v)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups = defaultdict(list)
    for t in tris:
        groups[find(t[0])].append(t)
    return [groups[r] for r in sorted(groups)]
