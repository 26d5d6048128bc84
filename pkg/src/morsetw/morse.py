"""Morse matchings on simplicial complexes.

Optimal matchings on closed 3-manifolds are assembled from three parts: a
maximum alternating cycle-free matching on the spine (triangle/edge pairs),
a spanning tree of the remaining 1-skeleton (vertex/edge pairs) and a
spanning tree of the remaining dual graph (tetrahedron/triangle pairs).
"""

from __future__ import annotations

import itertools
from collections import defaultdict, deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .acfm import ACFMResult, is_alternating_cycle_free, max_acfm
from .complex import SimplicialComplex, hasse_diagram, spine, validate_complex
from .errors import (
    DisconnectedGamma,
    NotClosed3Manifold,
    NotAMatching,
    NotCodimensionOne,
    NotInComplex,
    SpinePairsNotCycleFree,
    VerificationError,
)
from .graph import Graph
from .treewidth import exact_treewidth, heuristic_decomposition, make_nice

EXACT_NODE_LIMIT = 20


class MorseCheck(NamedTuple):
    valid: bool
    critical_counts: tuple


@dataclass(frozen=True)
class MorseMatching:
    """Matched ``(tau, sigma)`` pairs, ``sigma`` a facet of ``tau``."""

    pairs: frozenset
    critical: tuple

    @property
    def total(self) -> int:
        return sum(self.critical)


def _canonical_pairs(K: SimplicialComplex, pairs: Iterable) -> list:
    out = []
    for tau, sigma in pairs:
        tau, sigma = tuple(sorted(tau)), tuple(sorted(sigma))
        for s in (tau, sigma):
            if s not in K:
                raise NotInComplex(f"{s} is not a simplex of the complex")
        if len(tau) != len(sigma) + 1 or not set(sigma) < set(tau):
            raise NotCodimensionOne(f"{sigma} is not a facet of {tau}")
        out.append((tau, sigma))
    return out


def _level_has_cycle(up: dict, facets_of) -> bool:
    """Directed cycle search in one level of the modified Hasse diagram.

    ``up`` maps each matched lower simplex to its partner. Arcs run from a
    higher simplex to its facets, except matched ones which run upward.
    """
    # Only matched simplexes can lie on a cycle, so walk from those.
    nodes = set(up) | set(up.values())
    high = len(next(iter(up))) + 1
    succ = {}
    for s in nodes:
        if len(s) == high:
            succ[s] = [f for f in facets_of(s) if f in nodes and up.get(f) != s]
        else:
            succ[s] = [up[s]]
    state = dict.fromkeys(nodes, 0)
    for start in sorted(nodes):
        if state[start]:
            continue
        stack = [(start, iter(succ[start]))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                state[node] = 2
                stack.pop()
            elif state[nxt] == 1:
                return True
            elif state[nxt] == 0:
                state[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def _facets(s):
    return itertools.combinations(s, len(s) - 1)


def validate_morse_matching(K: SimplicialComplex, pairs: Iterable) -> MorseCheck:
    """Check that ``pairs`` is a Morse matching and count critical simplexes.

    A cycle of the modified Hasse diagram stays between two adjacent
    dimensions, so each level is searched separately.
    """
    pairs = _canonical_pairs(K, pairs)
    used = set()
    valid = True
    for tau, sigma in pairs:
        if tau in used or sigma in used:
            valid = False
        used.update((tau, sigma))
    counts = [len(K.faces(d)) for d in range(K.dimension + 1)]
    for s in used:
        counts[len(s) - 1] -= 1
    if valid:
        levels = defaultdict(dict)
        for tau, sigma in pairs:
            levels[len(sigma) - 1][sigma] = tau
        for up in levels.values():
            if _level_has_cycle(up, _facets):
                valid = False
                break
    return MorseCheck(valid, tuple(counts))


def hasse_matching_acyclic(K: SimplicialComplex, pairs: Iterable) -> bool:
    """Whole-diagram cycle check of ``H(M)`` (independent of the level split)."""
    H = hasse_diagram(K)
    idx = H.index
    flipped = {(idx[tuple(sorted(t))], idx[tuple(sorted(s))]) for t, s in pairs}
    succ = defaultdict(list)
    indeg = [0] * len(H.simplices)
    for a, b in H.arcs:
        if (a, b) in flipped:
            a, b = b, a
        succ[a].append(b)
        indeg[b] += 1
    stack = [u for u in range(len(H.simplices)) if indeg[u] == 0]
    seen = 0
    while stack:
        u = stack.pop()
        seen += 1
        for w in succ[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == len(H.simplices)


def _bfs_tree(n: int, adjacency: list, root: int):
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w, via in sorted(adjacency[u]):
            if w not in parent:
                parent[w] = (u, via)
                queue.append(w)
    return parent


def spine_pairs_from_matching(K: SimplicialComplex, arcs: Iterable) -> list:
    """Translate spine-graph arcs into ``(triangle, edge)`` simplex pairs."""
    G = spine(K)
    out = []
    for u, v in arcs:
        t, e = (u, v) if G.partition[u] == 1 else (v, u)
        out.append((G.labels[t], G.labels[e]))
    return sorted(out)


def complete_matching_3manifold(K: SimplicialComplex, spine_pairs: Iterable) -> MorseMatching:
    """Extend a cycle-free spine matching to a Morse matching with ``c0 = c3 = 1``.

    Every vertex but the lowest is paired with the edge to its parent in a
    breadth-first spanning tree of the 1-skeleton minus the spine-matched
    edges; every tetrahedron but the lowest is paired likewise through the
    dual graph minus the spine-matched triangles.
    """
    if K.dimension != 3 or not K.is_closed_3():
        raise NotClosed3Manifold("every triangle must lie in exactly two tetrahedra")
    G = spine(K)
    where = G.label_index()
    sp = []
    for a, b in spine_pairs:
        a, b = tuple(sorted(a)), tuple(sorted(b))
        t, e = (a, b) if len(a) == 3 else (b, a)
        if t not in where or e not in where or not G.has_arc(where[t], where[e]):
            raise SpinePairsNotCycleFree(f"({t}, {e}) is not a spine arc")
        sp.append((t, e))
    try:
        free = is_alternating_cycle_free(G, [(where[t], where[e]) for t, e in sp])
    except NotAMatching as exc:
        raise SpinePairsNotCycleFree(str(exc)) from exc
    if not free:
        raise SpinePairsNotCycleFree("spine pairs contain an alternating cycle")
    used_edges = {e for _, e in sp}
    used_tris = {t for t, _ in sp}

    verts = K.vertices
    v_idx = {v: i for i, v in enumerate(verts)}
    adj = [[] for _ in verts]
    for e in K.edges:
        if e not in used_edges:
            a, b = v_idx[e[0]], v_idx[e[1]]
            adj[a].append((b, e))
            adj[b].append((a, e))
    tree = _bfs_tree(len(verts), adj, 0)
    if len(tree) != len(verts):
        raise DisconnectedGamma("1-skeleton minus matched edges is disconnected")
    pairs = list(sp)
    for child, link in tree.items():
        if link is not None:
            pairs.append((link[1], (verts[child],)))

    tets = K.tetrahedra
    t_idx = {t: i for i, t in enumerate(tets)}
    dadj = [[] for _ in tets]
    for tri, cof in K.triangle_cofaces.items():
        if tri not in used_tris:
            a, b = t_idx[cof[0]], t_idx[cof[1]]
            dadj[a].append((b, tri))
            dadj[b].append((a, tri))
    dtree = _bfs_tree(len(tets), dadj, 0)
    if len(dtree) != len(tets):
        raise DisconnectedGamma("dual graph minus matched triangles is disconnected")
    for child, link in dtree.items():
        if link is not None:
            pairs.append((tets[child], link[1]))

    check = validate_morse_matching(K, pairs)
    if not check.valid or check.critical_counts[0] != 1 or check.critical_counts[3] != 1:
        raise VerificationError(f"completion is not a valid Morse matching: {check}")
    return MorseMatching(frozenset(pairs), check.critical_counts)


def decompose(G: Graph, exact_limit: int = EXACT_NODE_LIMIT, seed=None):
    """Nice decomposition: exact treewidth for small graphs, min-fill otherwise."""
    if G.node_count <= exact_limit:
        _, D = exact_treewidth(G, exact_limit)
    else:
        D = heuristic_decomposition(G, seed=seed)
    return make_nice(D, G)


def spine_acfm(K, exact_limit: int = EXACT_NODE_LIMIT, seed=None, trace=None) -> ACFMResult:
    G = spine(K)
    if G.node_count == 0:
        return ACFMResult(0, 0, frozenset())
    return max_acfm(G, decompose(G, exact_limit, seed), trace)


def optimal_morse_3manifold(K: SimplicialComplex, exact_limit: int = EXACT_NODE_LIMIT, seed=None):
    """Morse matching with the fewest critical simplexes on a closed 3-manifold.

    Returns ``(matching, c)``.
    """
    if K.dimension != 3 or not K.is_closed_3():
        raise NotClosed3Manifold("every triangle must lie in exactly two tetrahedra")
    result = spine_acfm(K, exact_limit, seed)
    M = complete_matching_3manifold(K, spine_pairs_from_matching(K, result.witness))
    V, E, T, N = K.f_vector
    expected = 2 + (E - result.size - (V - 1)) + (T - result.size - (N - 1))
    if M.total != expected:
        raise VerificationError(f"critical count {M.total} != {expected}")
    return M, M.total


def _as_complex(K):
    if isinstance(K, SimplicialComplex):
        return K
    tris = list(K)
    return validate_complex(tris) if tris else None


def erasability_via_acfm(K, exact_limit: int = 0, seed=None, trace=None) -> int:
    """Erasability number as the minimum number of unmatched triangles on the spine."""
    K = _as_complex(K)
    if K is None:
        return 0
    return spine_acfm(K, exact_limit, seed, trace).unmatched_n1


def critical_triangles_via_acfm(K, exact_limit: int = 0, seed=None) -> list:
    """Triangles left unmatched by an optimal spine matching.

    Deleting them leaves an erasable complex; this is checked before return.
    """
    from .complex import erase_greedy

    K = _as_complex(K)
    if K is None:
        return []
    result = spine_acfm(K, exact_limit, seed)
    G = spine(K)
    matched = {u for arc in result.witness for u in arc}
    crit = [G.labels[u] for u in G.side(1) if u not in matched]
    if not erase_greedy(K, crit).erasable:
        raise VerificationError("unmatched triangles do not form a critical set")
    return crit
