"""Simple undirected graphs with an optional two-sided node partition."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Optional, Sequence


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on nodes ``0 .. node_count - 1``.

    ``arcs`` is canonicalised to sorted ``(u, v)`` pairs with ``u < v``.
    ``partition`` marks each node as side 1 or side 2; when present every arc
    must join the two sides. ``labels`` maps node ids back to whatever the
    nodes stand for (simplexes, for spines and dual graphs).
    """

    node_count: int
    arcs: tuple = ()
    partition: Optional[tuple] = None
    labels: Optional[tuple] = field(default=None, compare=False)

    def __post_init__(self):
        n = self.node_count
        if n < 0:
            raise ValueError("node_count must be non-negative")
        canon = set()
        for a in self.arcs:
            u, v = a
            if u == v:
                raise ValueError(f"self-loop at node {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"arc {a} out of range for {n} nodes")
            key = (u, v) if u < v else (v, u)
            if key in canon:
                raise ValueError(f"duplicate arc {key}")
            canon.add(key)
        object.__setattr__(self, "arcs", tuple(sorted(canon)))
        if self.partition is not None:
            part = tuple(self.partition)
            if len(part) != n or any(p not in (1, 2) for p in part):
                raise ValueError("partition must give side 1 or 2 for every node")
            for u, v in self.arcs:
                if part[u] == part[v]:
                    raise ValueError(f"arc {(u, v)} does not cross the partition")
            object.__setattr__(self, "partition", part)
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != n:
                raise ValueError("labels must have one entry per node")
            object.__setattr__(self, "labels", labels)

    @classmethod
    def from_arcs(cls, arcs: Iterable[Sequence[int]], node_count: Optional[int] = None,
                  **kwargs) -> "Graph":
        arcs = [tuple(a) for a in arcs]
        if node_count is None:
            node_count = 1 + max((max(a) for a in arcs), default=-1)
        return cls(node_count, tuple(arcs), **kwargs)

    @cached_property
    def adjacency(self) -> tuple:
        adj = [set() for _ in range(self.node_count)]
        for u, v in self.arcs:
            adj[u].add(v)
            adj[v].add(u)
        return tuple(frozenset(a) for a in adj)

    @cached_property
    def adjacency_masks(self) -> tuple:
        return tuple(sum(1 << w for w in nb) for nb in self.adjacency)

    def neighbors(self, u: int) -> frozenset:
        return self.adjacency[u]

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    @property
    def nodes(self) -> range:
        return range(self.node_count)

    def has_arc(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def side(self, k: int) -> tuple:
        """Nodes on side ``k`` (1 or 2) of the partition."""
        if self.partition is None:
            raise ValueError("graph has no partition")
        return tuple(u for u in self.nodes if self.partition[u] == k)

    @cached_property
    def two_coloring(self) -> Optional[tuple]:
        """A proper 2-colouring (the partition if given), or None if not bipartite."""
        if self.partition is not None:
            return self.partition
        color = [0] * self.node_count
        for s in self.nodes:
            if color[s]:
                continue
            color[s] = 1
            stack = [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if not color[w]:
                        color[w] = 3 - color[u]
                        stack.append(w)
                    elif color[w] == color[u]:
                        return None
        return tuple(color)

    @property
    def is_bipartite(self) -> bool:
        return self.two_coloring is not None

    def components(self) -> list:
        """Connected components as sorted node lists, ordered by smallest node."""
        seen = [False] * self.node_count
        out = []
        for s in self.nodes:
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                u = stack.pop()
                for w in self.adjacency[u]:
                    if not seen[w]:
                        seen[w] = True
                        comp.append(w)
                        stack.append(w)
            out.append(sorted(comp))
        return out

    def is_connected(self) -> bool:
        return len(self.components()) <= 1

    def subgraph_arcs(self, nodes: Iterable[int]) -> list:
        keep = set(nodes)
        return [(u, v) for u, v in self.arcs if u in keep and v in keep]

    def label_index(self) -> dict:
        if self.labels is None:
            raise ValueError("graph has no labels")
        return {lab: i for i, lab in enumerate(self.labels)}

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.nodes)
        g.add_edges_from(self.arcs)
        return g
