"""Tree decompositions: validation, construction, niceification, transfer.

Widths follow the usual convention ``max |bag| - 1``. Exact treewidth is
computed by a search over elimination prefixes and is meant for small graphs
(20 nodes by default); everything larger goes through the min-fill heuristic.
"""

from __future__ import annotations

import functools
import itertools
import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Optional, Sequence

from .complex import SimplicialComplex, dual_graph, spine
from .errors import (
    DisconnectedEdgeStar,
    InvalidDualDecomposition,
    InvalidInputDecomposition,
    TooLarge,
    VerificationError,
)
from .graph import Graph


@dataclass(frozen=True)
class TreeDecomposition:
    """Bags (sorted node tuples) on the nodes of an undirected tree."""

    bags: tuple
    tree_arcs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "bags", tuple(tuple(sorted(set(b))) for b in self.bags))
        object.__setattr__(self, "tree_arcs",
                           tuple(tuple(sorted(a)) for a in self.tree_arcs))

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def __len__(self) -> int:
        return len(self.bags)

    @cached_property
    def tree_adjacency(self) -> tuple:
        adj = [[] for _ in self.bags]
        for a, b in self.tree_arcs:
            adj[a].append(b)
            adj[b].append(a)
        return tuple(tuple(sorted(a)) for a in adj)


class DecompositionReport(NamedTuple):
    valid: bool
    violations: list

    def __bool__(self):
        return self.valid


def _tree_violations(D: TreeDecomposition) -> list:
    k = len(D.bags)
    if k == 0:
        return ["tree: decomposition has no bags"]
    out = []
    for a, b in D.tree_arcs:
        if not (0 <= a < k and 0 <= b < k) or a == b:
            return [f"tree: invalid tree arc {(a, b)}"]
    if len(set(D.tree_arcs)) != len(D.tree_arcs):
        out.append("tree: repeated tree arc")
    seen = {0}
    queue = [0]
    while queue:
        u = queue.pop()
        for w in D.tree_adjacency[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    if len(seen) != k:
        missing = min(set(range(k)) - seen)
        out.append(f"tree: bag {missing} is not connected to bag 0")
    if len(D.tree_arcs) != k - 1:
        out.append(f"tree: {len(D.tree_arcs)} tree arcs for {k} bags (expected {k - 1})")
    return out


def _coherence_violations(D: TreeDecomposition) -> list:
    where = {}
    for i, bag in enumerate(D.bags):
        for x in bag:
            where.setdefault(x, []).append(i)
    out = []
    for x in sorted(where):
        holders = set(where[x])
        start = where[x][0]
        seen = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in D.tree_adjacency[u]:
                if w in holders and w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != holders:
            out.append(f"coherence: bags holding node {x} are not connected "
                       f"(e.g. bags {start} and {min(holders - seen)})")
    return out


def validate_decomposition(G: Graph, D: TreeDecomposition) -> DecompositionReport:
    """Check tree-ness, node coverage, arc coverage and coherence.

    Violations are reported as strings naming the property and a witness.
    """
    violations = []
    for i, bag in enumerate(D.bags):
        for x in bag:
            if not 0 <= x < G.node_count:
                violations.append(f"range: bag {i} holds unknown node {x}")
    if violations:
        return DecompositionReport(False, violations)
    violations += _tree_violations(D)
    covered = set().union(*D.bags) if D.bags else set()
    for x in G.nodes:
        if x not in covered:
            violations.append(f"node coverage: node {x} is in no bag")
    bag_sets = [set(b) for b in D.bags]
    for u, v in G.arcs:
        if not any(u in b and v in b for b in bag_sets):
            violations.append(f"arc coverage: arc {(u, v)} is in no bag")
    if not any(v.startswith("tree") for v in violations):
        violations += _coherence_violations(D)
    return DecompositionReport(not violations, violations)


# ---------------------------------------------------------------------------
# elimination orderings


def decomposition_from_ordering(G: Graph, order: Sequence[int]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating nodes in ``order``.

    Each node gets the bag ``{v} | later neighbours in the filled graph``,
    hung below its earliest-eliminated later neighbour. Bags contained in
    their parent are merged away; component roots are chained together.
    """
    n = G.node_count
    if sorted(order) != list(range(n)):
        raise ValueError("order must be a permutation of the nodes")
    if n == 0:
        return TreeDecomposition(((),), ())
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(G.adjacency[v]) for v in range(n)]
    bags = {}
    parent = {}
    for v in order:
        later = {w for w in adj[v] if pos[w] > pos[v]}
        bags[v] = frozenset(later | {v})
        parent[v] = min(later, key=pos.__getitem__) if later else None
        for a, b in itertools.combinations(later, 2):
            adj[a].add(b)
            adj[b].add(a)

    # contract bags that are subsets of their parent bag
    rep = {}
    for v in reversed(order):
        p = parent[v]
        if p is not None and bags[v] <= bags[rep[p]]:
            rep[v] = rep[p]
        else:
            rep[v] = v
    kept = [v for v in order if rep[v] == v]
    idx = {v: i for i, v in enumerate(kept)}
    arcs = []
    roots = []
    for v in kept:
        p = parent[v]
        if p is None:
            roots.append(idx[v])
        else:
            arcs.append((idx[v], idx[rep[p]]))
    arcs += list(zip(roots, roots[1:]))
    return TreeDecomposition(tuple(tuple(sorted(bags[v])) for v in kept), tuple(arcs))


def elimination_width(G: Graph, order: Sequence[int]) -> int:
    """Width of the decomposition induced by ``order`` (max later-degree)."""
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(G.adjacency[v]) for v in G.nodes]
    width = 0
    for v in order:
        later = [w for w in adj[v] if pos[w] > pos[v]]
        width = max(width, len(later))
        for a, b in itertools.combinations(later, 2):
            adj[a].add(b)
            adj[b].add(a)
    return width


def min_fill_ordering(G: Graph, seed: Optional[int] = None) -> list:
    """Greedy min-fill elimination ordering.

    Ties go to the lowest node index, or to a seeded random priority when
    ``seed`` is given.
    """
    n = G.node_count
    prio = list(range(n))
    if seed is not None:
        random.Random(seed).shuffle(prio)
    adj = [set(G.adjacency[v]) for v in range(n)]
    alive = set(range(n))
    order = []
    while alive:
        best = None
        for v in alive:
            nb = list(adj[v])
            fill = 0
            for i, a in enumerate(nb):
                adj_a = adj[a]
                for b in nb[i + 1:]:
                    if b not in adj_a:
                        fill += 1
            key = (fill, len(nb), prio[v])
            if best is None or key < best[0]:
                best = (key, v)
        v = best[1]
        nb = list(adj[v])
        for a, b in itertools.combinations(nb, 2):
            adj[a].add(b)
            adj[b].add(a)
        for a in nb:
            adj[a].discard(v)
        alive.discard(v)
        order.append(v)
    return order


def heuristic_decomposition(G: Graph, seed: Optional[int] = None) -> TreeDecomposition:
    """Valid decomposition from a min-fill elimination ordering (upper bound)."""
    return decomposition_from_ordering(G, min_fill_ordering(G, seed))


def minor_min_width(G: Graph) -> int:
    """Minor-min-width lower bound on the treewidth."""
    adj = {v: set(G.adjacency[v]) for v in G.nodes}
    lb = 0
    while len(adj) > 1:
        v = min(adj, key=lambda x: (len(adj[x]), x))
        nb = adj[v]
        lb = max(lb, len(nb))
        if nb:
            u = min(nb, key=lambda x: (len(adj[x]), x))
            for w in nb:
                if w != u:
                    adj[w].discard(v)
                    adj[w].add(u)
                    adj[u].add(w)
            adj[u].discard(v)
        del adj[v]
    return lb


def _prefix_search(masks: Sequence[int], n: int, k: int) -> Optional[list]:
    """Elimination ordering of width ``<= k``, or None.

    Depth-first search over sets ``S`` of eliminated nodes. Eliminating ``v``
    after ``S`` costs ``|Q(S, v)|``: the nodes outside ``S | {v}`` reachable
    from ``v`` through ``S``. A node whose ``Q`` is a clique of the filled
    graph is eliminated without branching.
    """
    full = (1 << n) - 1
    parent = {0: None}
    stack = [0]
    while stack:
        S = stack.pop()
        rest = full & ~S
        if bin(rest).count("1") <= k + 1:
            order = []
            cur = S
            while parent[cur] is not None:
                prev, v = parent[cur]
                order.append(v)
                cur = prev
            order.reverse()
            return order + [v for v in range(n) if rest >> v & 1]
        # components of G[S] with their outer neighbourhoods
        comps = []
        todo = S
        while todo:
            low = todo & -todo
            comp = low
            frontier = low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                nb = masks[b.bit_length() - 1] & S & ~comp
                comp |= nb
                frontier |= nb
            todo &= ~comp
            outer = 0
            c = comp
            while c:
                b = c & -c
                c ^= b
                outer |= masks[b.bit_length() - 1]
            comps.append((comp, outer & ~S))
        q = {}
        r = rest
        while r:
            b = r & -r
            r ^= b
            v = b.bit_length() - 1
            m = masks[v] & ~S
            for comp, outer in comps:
                if masks[v] & comp:
                    m |= outer
            q[v] = m & ~b
        forced = None
        for v, m in q.items():
            if bin(m).count("1") > k:
                continue
            clique = True
            mm = m
            while mm:
                b = mm & -mm
                mm ^= b
                u = b.bit_length() - 1
                if (m & ~b) & ~q[u]:
                    clique = False
                    break
            if clique:
                forced = v
                break
        if forced is not None:
            choices = [forced]
        else:
            choices = [v for v, m in q.items() if bin(m).count("1") <= k]
        for v in sorted(choices, reverse=True):
            T = S | (1 << v)
            if T not in parent:
                parent[T] = (S, v)
                stack.append(T)
    return None


def exact_treewidth(G: Graph, node_limit: int = 20):
    """Exact treewidth and a witness decomposition of that width.

    Tries widths upward from the minor-min-width lower bound, each by an
    exhaustive search over elimination prefixes, stopping at the min-fill
    upper bound. Raises :class:`TooLarge` above ``node_limit`` nodes.
    """
    n = G.node_count
    if n > node_limit:
        raise TooLarge(f"{n} nodes exceeds exact treewidth limit {node_limit}")
    upper = heuristic_decomposition(G)
    if n == 0:
        return 0, upper
    order = _exact_order(n, G.arcs, minor_min_width(G), upper.width)
    if order is None:
        return upper.width, upper
    D = decomposition_from_ordering(G, order)
    return D.width, D


@functools.lru_cache(maxsize=64)
def _exact_order(n: int, arcs: tuple, lower: int, upper: int) -> Optional[list]:
    masks = [0] * n
    for u, v in arcs:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    for k in range(lower, upper):
        order = _prefix_search(masks, n, k)
        if order is not None:
            return order
    return None


# ---------------------------------------------------------------------------
# nice decompositions

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class NiceBag(NamedTuple):
    bag: tuple
    kind: str
    vertex: Optional[int]
    children: tuple


@dataclass(frozen=True)
class NiceTreeDecomposition:
    """Rooted nice decomposition with bags stored in post-order.

    Children always precede their parent, so a forward scan is a valid
    bottom-up traversal; the root is the last bag. ``kind`` records the
    structural role; :meth:`tag` additionally reports ``"root"``.
    """

    nodes: tuple

    @property
    def root(self) -> int:
        return len(self.nodes) - 1

    @property
    def width(self) -> int:
        return max(len(b.bag) for b in self.nodes) - 1

    def __len__(self) -> int:
        return len(self.nodes)

    def tag(self, i: int) -> str:
        return "root" if i == self.root else self.nodes[i].kind

    def as_tree_decomposition(self) -> TreeDecomposition:
        arcs = [(c, i) for i, b in enumerate(self.nodes) for c in b.children]
        return TreeDecomposition(tuple(b.bag for b in self.nodes), tuple(arcs))

    def check(self) -> list:
        """Violations of the nice-bag clauses, one string per offending bag."""
        out = []
        if len(self.nodes[self.root].bag) != 1:
            out.append(f"root bag {self.root} has size {len(self.nodes[self.root].bag)}")
        has_parent = [False] * len(self.nodes)
        for i, b in enumerate(self.nodes):
            for c in b.children:
                if not 0 <= c < i:
                    out.append(f"bag {i}: child {c} is not earlier in post-order")
                    continue
                if has_parent[c]:
                    out.append(f"bag {c} has two parents")
                has_parent[c] = True
            kids = [self.nodes[c].bag for c in b.children if 0 <= c < i]
            here = set(b.bag)
            if b.kind == LEAF:
                if kids or len(b.bag) != 1:
                    out.append(f"leaf bag {i} must be a childless singleton")
            elif b.kind == JOIN:
                if len(kids) != 2 or any(k != b.bag for k in kids):
                    out.append(f"join bag {i} needs two children with identical bags")
            elif b.kind == INTRODUCE:
                if (len(kids) != 1 or b.vertex not in here or b.vertex in kids[0]
                        or here - {b.vertex} != set(kids[0])):
                    out.append(f"introduce bag {i} must add exactly node {b.vertex}")
            elif b.kind == FORGET:
                if (len(kids) != 1 or b.vertex in here or b.vertex not in kids[0]
                        or set(kids[0]) - {b.vertex} != here):
                    out.append(f"forget bag {i} must drop exactly node {b.vertex}")
            else:
                out.append(f"bag {i} has unknown kind {b.kind!r}")
        orphans = [i for i in range(len(self.nodes) - 1) if not has_parent[i]]
        if orphans:
            out.append(f"bags {orphans[:5]} are not attached to the tree")
        return out


def _drop_empty_bags(D: TreeDecomposition) -> TreeDecomposition:
    empty = [i for i, b in enumerate(D.bags) if not b]
    if not empty or len(empty) == len(D.bags):
        return D
    adj = [set(a) for a in D.tree_adjacency]
    for i in empty:
        nb = sorted(adj[i])
        for a in nb:
            adj[a].discard(i)
        for a, b in zip(nb, nb[1:]):
            adj[a].add(b)
            adj[b].add(a)
        adj[i] = set()
    keep = [i for i, b in enumerate(D.bags) if b]
    idx = {v: j for j, v in enumerate(keep)}
    arcs = {(min(idx[a], idx[b]), max(idx[a], idx[b]))
            for a in keep for b in adj[a]}
    return TreeDecomposition(tuple(D.bags[i] for i in keep), tuple(sorted(arcs)))


def make_nice(D: TreeDecomposition, graph: Optional[Graph] = None) -> NiceTreeDecomposition:
    """Convert a tree decomposition into a nice one of the same width.

    The root is the bag holding the lowest node; children are visited in
    order of their lowest node; introduce and forget runs use ascending node
    order. The input must be a tree with coherent bags (and a decomposition
    of ``graph`` when one is given).
    """
    if graph is not None:
        report = validate_decomposition(graph, D)
    else:
        v = _tree_violations(D)
        if not v:
            v = _coherence_violations(D)
        report = DecompositionReport(not v, v)
    if not report.valid:
        raise InvalidInputDecomposition("input is not a valid tree decomposition",
                                        report.violations)
    D = _drop_empty_bags(D)
    bags = D.bags
    if not any(bags):
        raise InvalidInputDecomposition("decomposition covers no nodes")

    inf = float("inf")
    root = min(range(len(bags)), key=lambda i: (bags[i][0], i))
    children = [[] for _ in bags]
    order = []
    seen = {root}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        order.append(u)
        for w in D.tree_adjacency[u]:
            if w not in seen:
                seen.add(w)
                children[u].append(w)
                queue.append(w)
    for c in children:
        c.sort(key=lambda i: (bags[i][0] if bags[i] else inf, i))

    nodes = []

    def add(bag, kind, vertex, kids):
        nodes.append(NiceBag(tuple(bag), kind, vertex, tuple(kids)))
        return len(nodes) - 1

    def chain(node_id, cur, target):
        cur = list(cur)
        for x in sorted(set(cur) - set(target)):
            cur.remove(x)
            node_id = add(cur, FORGET, x, (node_id,))
        for x in sorted(set(target) - set(cur)):
            cur = sorted(cur + [x])
            node_id = add(cur, INTRODUCE, x, (node_id,))
        return node_id

    top = {}
    for i in reversed(order):
        bag = bags[i]
        if not children[i]:
            first = bag[0]
            top[i] = chain(add((first,), LEAF, None, ()), (first,), bag)
            continue
        branches = [chain(top[c], bags[c], bag) for c in children[i]]
        acc = branches[0]
        for b in branches[1:]:
            acc = add(bag, JOIN, None, (acc, b))
        top[i] = acc
    chain(top[root], bags[root], (bags[root][0],))
    return NiceTreeDecomposition(tuple(nodes))


def nice_bag_bound(width: int, bag_count: int, n: int) -> int:
    """Linear bag-count budget that every output of :func:`make_nice` respects."""
    return 4 * (width + 2) * (bag_count + n)


# ---------------------------------------------------------------------------
# dual graph to spine


def _edge_star_connected(K: SimplicialComplex, e: tuple) -> bool:
    star = [t for t in K.tetrahedra if set(e) <= set(t)]
    seen = {star[0]}
    stack = [star[0]]
    while stack:
        t = stack.pop()
        for u in star:
            if u not in seen and len(set(t) & set(u)) == 3:
                seen.add(u)
                stack.append(u)
    return len(seen) == len(star)


def spine_decomposition_from_dual(K: SimplicialComplex,
                                  D_dual: TreeDecomposition) -> TreeDecomposition:
    """Decomposition of ``spine(K)`` on the same tree as a dual-graph decomposition.

    Each bag becomes all triangles and edges of its tetrahedra, so a dual
    width of ``k`` gives spine width at most ``10k + 9``. Coherence needs the
    tetrahedra around every edge to be connected through shared triangles,
    as they are in any 3-manifold.
    """
    G_dual = dual_graph(K)
    report = validate_decomposition(G_dual, D_dual)
    if not report.valid:
        raise InvalidDualDecomposition("not a decomposition of the dual graph",
                                       report.violations)
    t_count = len(K.triangles)
    tets = K.tetrahedra
    for e in K.edges:
        if not _edge_star_connected(K, e):
            raise DisconnectedEdgeStar(
                f"tetrahedra around edge {e} are not connected through triangles")
    bags = []
    for bag in D_dual.bags:
        nodes = set()
        for i in bag:
            tet = tets[i]
            nodes.update(K.index(t) for t in itertools.combinations(tet, 3))
            nodes.update(t_count + K.index(e) for e in itertools.combinations(tet, 2))
        bags.append(tuple(sorted(nodes)))
    D = TreeDecomposition(tuple(bags), D_dual.tree_arcs)
    check = validate_decomposition(spine(K), D)
    if not check.valid:
        raise VerificationError(f"transferred decomposition is invalid: {check.violations}")
    return D
