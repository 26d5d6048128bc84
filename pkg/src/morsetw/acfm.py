"""Maximum alternating cycle-free matching.

A matching ``M`` has no alternating cycle exactly when ``G[V(M)]`` has ``M``
as its only perfect matching (the symmetric difference of two perfect
matchings is a union of alternating cycles). The dynamic program below uses
that: each class fixes which bag nodes are matched (``v``) and keeps, for
every subset ``T`` of those nodes, how many matchings of the processed part
cover all matched forgotten nodes and exactly ``T`` (capped at 2). A node set
is accepted at the root iff that count is exactly 1, and its unique perfect
matching is the witness. Nothing here depends on the graph being bipartite.

Arcs are charged to exactly one introduce bag each, so counts never see an
arc twice when two subtrees meet at a join.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional

from .errors import (
    InvalidDecomposition,
    NotAMatching,
    ParityViolation,
    TooLarge,
    VerificationError,
    WitnessVerificationFailed,
)
from .graph import Graph
from .treewidth import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    NiceTreeDecomposition,
    heuristic_decomposition,
    make_nice,
    validate_decomposition,
)


# ---------------------------------------------------------------------------
# checking a given matching


def _normalise_matching(G: Graph, M: Iterable) -> dict:
    mate = {}
    for arc in M:
        u, v = arc
        if not G.has_arc(u, v):
            raise NotAMatching(f"{(u, v)} is not an arc of the graph")
        if u in mate or v in mate:
            raise NotAMatching(f"node of {(u, v)} is matched twice")
        mate[u] = v
        mate[v] = u
    return mate


def _has_directed_cycle(G: Graph, mate: dict, color: tuple) -> bool:
    # matched arcs point side 2 -> side 1, unmatched ones side 1 -> side 2;
    # an alternating cycle is then exactly a directed cycle.
    nodes = list(mate)
    indeg = dict.fromkeys(nodes, 0)
    out = {u: [] for u in nodes}
    for u in nodes:
        for w in G.adjacency[u]:
            if w not in mate:
                continue
            matched = mate[u] == w
            if (color[u] == 2) == matched:
                out[u].append(w)
                indeg[w] += 1
    stack = [u for u in nodes if indeg[u] == 0]
    done = 0
    while stack:
        u = stack.pop()
        done += 1
        for w in out[u]:
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return done != len(nodes)


def _count_perfect_matchings(G: Graph, nodes: Iterable[int], cap: int = 2) -> int:
    masks = G.adjacency_masks
    memo = {0: 1}

    def count(s):
        hit = memo.get(s)
        if hit is not None:
            return hit
        low = s & -s
        v = low.bit_length() - 1
        rest = s ^ low
        total = 0
        nb = masks[v] & rest
        while nb and total < cap:
            b = nb & -nb
            nb ^= b
            total += count(rest ^ b)
        total = min(total, cap)
        memo[s] = total
        return total

    return count(sum(1 << v for v in nodes))


def _has_second_perfect_matching(G: Graph, mate: dict) -> bool:
    nodes = sorted(mate)
    if len(nodes) <= 24:
        return _count_perfect_matchings(G, nodes) > 1
    import networkx as nx

    H = nx.Graph()
    H.add_nodes_from(nodes)
    H.add_edges_from(G.subgraph_arcs(nodes))
    for u in nodes:
        w = mate[u]
        if u > w:
            continue
        H.remove_edge(u, w)
        other = nx.max_weight_matching(H, maxcardinality=True)
        H.add_edge(u, w)
        if 2 * len(other) == len(nodes):
            return True
    return False


def _peels(G: Graph, mate: dict) -> bool:
    """True if matched pairs can be removed one by one, each time through a
    node whose only remaining matched neighbour is its mate."""
    alive = set(mate)
    deg = {u: sum(1 for w in G.adjacency[u] if w in alive) for u in alive}
    stack = [u for u in alive if deg[u] == 1]
    while stack:
        u = stack.pop()
        if u not in alive or deg[u] != 1:
            continue
        for x in (u, mate[u]):
            alive.discard(x)
        for x in (u, mate[u]):
            for w in G.adjacency[x]:
                if w in alive:
                    deg[w] -= 1
                    if deg[w] == 1:
                        stack.append(w)
    return not alive


def is_alternating_cycle_free(G: Graph, M: Iterable) -> bool:
    """True iff the matching ``M`` admits no alternating cycle in ``G``.

    Two independent routes are evaluated. The direct one searches for a
    directed cycle in the orientation induced by ``M`` (bipartite graphs) or
    for a second perfect matching of ``G[V(M)]`` (general graphs). The other
    peels matched pairs through nodes whose only matched neighbour is their
    mate. On bipartite graphs the two must agree; on general graphs peeling
    is only sufficient, so only that direction is asserted.
    """
    mate = _normalise_matching(G, M)
    if not mate:
        return True
    color = G.two_coloring
    if color is not None:
        free = not _has_directed_cycle(G, mate, color)
    else:
        free = not _has_second_perfect_matching(G, mate)
    peeled = _peels(G, mate)
    if color is not None and peeled != free:
        raise VerificationError("cycle search and peeling disagree")
    if peeled and not free:
        raise VerificationError("peeled matching reported as cyclic")
    return free


class ACFMResult(NamedTuple):
    size: int
    unmatched_n1: Optional[int]
    witness: frozenset


def _unmatched_side1(G: Graph, size: int) -> Optional[int]:
    if G.partition is None:
        return None
    return len(G.side(1)) - size


def _matchings(G: Graph):
    arcs = G.arcs
    used = set()
    chosen = []

    def rec(i):
        if i == len(arcs):
            yield list(chosen)
            return
        yield from rec(i + 1)
        u, v = arcs[i]
        if u not in used and v not in used:
            used.update((u, v))
            chosen.append(arcs[i])
            yield from rec(i + 1)
            chosen.pop()
            used.difference_update((u, v))

    yield from rec(0)


def brute_force_acfm(G: Graph, max_arcs: int = 24) -> ACFMResult:
    """Largest alternating cycle-free matching by enumerating every matching.

    Among maximum-size cycle-free matchings the first in enumeration order is
    returned.
    """
    if len(G.arcs) > max_arcs:
        raise TooLarge(f"{len(G.arcs)} arcs exceeds brute-force limit {max_arcs}")
    by_size = defaultdict(list)
    for m in _matchings(G):
        by_size[len(m)].append(m)
    for size in sorted(by_size, reverse=True):
        for m in by_size[size]:
            if is_alternating_cycle_free(G, m):
                return ACFMResult(size, _unmatched_side1(G, size), frozenset(m))
    raise AssertionError("the empty matching is always cycle-free")


# ---------------------------------------------------------------------------
# dynamic program


@dataclass(frozen=True)
class MatchingClass:
    """One equivalence class of partial solutions at a bag.

    ``v`` is the bitmask (over node ids) of bag nodes that will be matched.
    ``profile`` is a sorted tuple of ``(T, count)``: ``count`` (capped at 2)
    matchings of the processed subgraph cover every matched forgotten node
    and exactly the bag nodes in ``T``. ``m`` counts unmatched forgotten
    nodes; ``cert`` is the bitmask of all matched nodes processed so far.
    """

    v: int
    profile: tuple
    m: int
    cert: int

    @property
    def key(self) -> tuple:
        return (self.v, self.profile)

    def bits(self, bag) -> list:
        return [self.v >> x & 1 for x in bag]

    def counts(self) -> dict:
        return dict(self.profile)


ClassTable = dict


def _add(table: dict, v: int, prof: dict, m: int, cert: int) -> None:
    # a class can only end with exactly one perfect matching if some term is 1
    if 1 not in prof.values():
        return
    key = (v, tuple(sorted(prof.items())))
    old = table.get(key)
    if old is None or (m, cert) < (old.m, old.cert):
        table[key] = MatchingClass(v, key[1], m, cert)


def handle_leaf(x: int) -> ClassTable:
    """Leaf bag ``{x}``: ``x`` is either left out or reserved for matching."""
    table = {}
    _add(table, 0, {0: 1}, 0, 0)
    _add(table, 1 << x, {0: 1}, 0, 1 << x)
    return table


def handle_introduce(T_child: ClassTable, x: int, bag, G: Graph,
                     arcs: Optional[Iterable[int]] = None) -> ClassTable:
    """Introduce ``x``; ``arcs`` lists the bag neighbours whose arc to ``x`` is
    charged to this bag (default: all of them)."""
    bx = 1 << x
    in_bag = set(bag)
    if arcs is None:
        partners = sorted(y for y in G.adjacency[x] if y in in_bag)
    else:
        partners = sorted(y for y in arcs if y in in_bag and y != x)
    out = {}
    for cls in T_child.values():
        _add(out, cls.v, dict(cls.profile), cls.m, cls.cert)
        live = [1 << y for y in partners if cls.v >> y & 1]
        prof = {}
        for T, c in cls.profile:
            prof[T] = min(2, prof.get(T, 0) + c)
            for by in live:
                if not T & by:
                    T2 = T | bx | by
                    prof[T2] = min(2, prof.get(T2, 0) + c)
        _add(out, cls.v | bx, prof, cls.m, cls.cert | bx)
    return out


def handle_forget(T_child: ClassTable, x: int, bag) -> ClassTable:
    """Forget ``x``: an unmatched ``x`` adds one to ``m``; a matched ``x``
    must already be covered."""
    bx = 1 << x
    out = {}
    for cls in T_child.values():
        if not cls.v & bx:
            _add(out, cls.v, dict(cls.profile), cls.m + 1, cls.cert)
        else:
            prof = {T ^ bx: c for T, c in cls.profile if T & bx}
            _add(out, cls.v ^ bx, prof, cls.m, cls.cert)
    return out


def handle_join(T_left: ClassTable, T_right: ClassTable, bag, G: Graph) -> ClassTable:
    """Join: both sides must reserve the same bag nodes; partial matchings
    combine when their covered sets are disjoint."""
    right = defaultdict(list)
    for cls in T_right.values():
        right[cls.v].append(cls)
    out = {}
    for a in T_left.values():
        for b in right.get(a.v, ()):
            prof = {}
            for T1, c1 in a.profile:
                for T2, c2 in b.profile:
                    if T1 & T2:
                        continue
                    T = T1 | T2
                    prof[T] = min(2, prof.get(T, 0) + c1 * c2)
            _add(out, a.v, prof, a.m + b.m, a.cert | b.cert)
    return out


def _root_choice(T_root: ClassTable):
    best = None
    for cls in T_root.values():
        counts = cls.counts()
        if cls.v == 0:
            if counts.get(0) != 1:
                continue
            m = cls.m + 1
        else:
            if counts.get(cls.v) != 1:
                continue
            m = cls.m
        if best is None or (m, cls.cert) < best[:2]:
            best = (m, cls.cert, cls)
    return best


def finalize_root(T_root: ClassTable, n: int):
    """``(min_unmatched, max_size)`` from the table of the singleton root bag."""
    best = _root_choice(T_root)
    if best is None:
        raise VerificationError("root table has no completable class")
    m = best[0]
    if (n - m) % 2:
        raise ParityViolation(f"{n} nodes with {m} unmatched is not even")
    return m, (n - m) // 2


def _charge_arcs(G: Graph, D: NiceTreeDecomposition) -> dict:
    owned = {}
    done = set()
    for i, node in enumerate(D.nodes):
        if node.kind != INTRODUCE:
            continue
        x = node.vertex
        mine = []
        for y in node.bag:
            if y != x and G.has_arc(x, y):
                key = (min(x, y), max(x, y))
                if key not in done:
                    done.add(key)
                    mine.append(y)
        owned[i] = mine
    return owned


def _unique_perfect_matching(G: Graph, nodes: list) -> list:
    import networkx as nx

    H = nx.Graph()
    H.add_nodes_from(nodes)
    H.add_edges_from(G.subgraph_arcs(nodes))
    pm = nx.max_weight_matching(H, maxcardinality=True)
    return sorted((min(a, b), max(a, b)) for a, b in pm)


def max_acfm(G: Graph, D: NiceTreeDecomposition, trace: Optional[list] = None) -> ACFMResult:
    """Maximum alternating cycle-free matching by dynamic programming over ``D``.

    If ``trace`` is a list, ``(bag_size, table_size)`` is appended for every
    bag. The witness is rebuilt from the certificate and re-checked.
    """
    problems = D.check()
    problems += validate_decomposition(G, D.as_tree_decomposition()).violations
    if problems:
        raise InvalidDecomposition("not a nice decomposition of the graph", problems)
    owned = _charge_arcs(G, D)
    tables = {}
    for i, node in enumerate(D.nodes):
        kids = node.children
        if node.kind == LEAF:
            table = handle_leaf(node.bag[0])
        elif node.kind == INTRODUCE:
            table = handle_introduce(tables.pop(kids[0]), node.vertex, node.bag, G, owned[i])
        elif node.kind == FORGET:
            table = handle_forget(tables.pop(kids[0]), node.vertex, node.bag)
        elif node.kind == JOIN:
            table = handle_join(tables.pop(kids[0]), tables.pop(kids[1]), node.bag, G)
        else:
            raise InvalidDecomposition(f"unknown bag kind {node.kind!r}")
        tables[i] = table
        if trace is not None:
            trace.append((len(node.bag), len(table)))

    n = G.node_count
    m, size = finalize_root(tables[D.root], n)
    cert = _root_choice(tables[D.root])[1]
    chosen = [u for u in range(n) if cert >> u & 1]
    witness = _unique_perfect_matching(G, chosen)
    if len(witness) != size or 2 * size != len(chosen):
        raise WitnessVerificationFailed(
            f"certificate of {len(chosen)} nodes yields {len(witness)} arcs, expected {size}")
    if not is_alternating_cycle_free(G, witness):
        raise WitnessVerificationFailed("witness matching has an alternating cycle")
    return ACFMResult(size, _unmatched_side1(G, size), frozenset(witness))


def solve_acfm(G: Graph, decomposition=None, trace: Optional[list] = None) -> ACFMResult:
    """Convenience driver: min-fill decomposition (unless given), niceify, solve."""
    if G.node_count == 0:
        return ACFMResult(0, _unmatched_side1(G, 0), frozenset())
    if decomposition is None:
        decomposition = heuristic_decomposition(G)
    if not isinstance(decomposition, NiceTreeDecomposition):
        decomposition = make_nice(decomposition, G)
    return max_acfm(G, decomposition, trace)
