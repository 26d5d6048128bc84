"""Reductions between erasability and the minimum axiom set problem.

A minimum axiom set instance has sentences and implication relations
``(U, s)``: once every sentence of ``U`` is derived, so is ``s``. The task is
to find the fewest seed sentences whose closure is everything.

``erasability_to_mas`` turns a 2-complex into an instance whose sentences are
the triangles that greedy erasure cannot reach. ``mas_to_erasability_gadget``
goes the other way: each sentence becomes a punctured sphere and each relation
``(U, s)`` a bundle of tubes joining the spheres of ``U`` to one puncture of
the sphere of ``s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Hashable, Iterable, Optional

from .complex import (
    SimplicialComplex,
    _edge_star,
    _triangle_list,
    erase_greedy,
    external_triangles,
    validate_complex,
)
from .errors import BudgetExceeded, InputError, NotFound, TooLarge, UnknownSentence, VerificationError

SEARCH_LIMIT = 2_000_000
GADGET_BUDGET = 200_000


@dataclass(frozen=True)
class MasInstance:
    sentences: tuple
    relations: tuple = ()
    k: Optional[int] = None

    def __post_init__(self):
        sentences = tuple(self.sentences)
        if len(set(sentences)) != len(sentences):
            raise InputError("sentence ids must be unique")
        known = set(sentences)
        rels = []
        for U, s in self.relations:
            U = frozenset(U)
            missing = (U | {s}) - known
            if missing:
                raise UnknownSentence(f"unknown sentences {sorted(map(str, missing))}")
            rels.append((U, s))
        object.__setattr__(self, "sentences", sentences)
        object.__setattr__(self, "relations", tuple(rels))

    @property
    def free_relations(self) -> list:
        """Relations with empty premise: their conclusion needs no axiom."""
        return [r for r in self.relations if not r[0]]


def mas_closure(I: MasInstance, S0: Iterable[Hashable]) -> frozenset:
    """Least set containing ``S0`` and closed under the relations."""
    derived = set(S0)
    unknown = derived - set(I.sentences)
    if unknown:
        raise UnknownSentence(f"unknown sentences {sorted(map(str, unknown))}")
    # watch lists: each relation waits on its number of missing premises
    missing = [len(U - derived) for U, _ in I.relations]
    waiting: dict = {}
    for i, (U, _) in enumerate(I.relations):
        for u in U - derived:
            waiting.setdefault(u, []).append(i)
    queue = [I.relations[i][1] for i, n in enumerate(missing) if n == 0]
    while queue:
        s = queue.pop()
        if s in derived:
            continue
        derived.add(s)
        for i in waiting.get(s, ()):
            missing[i] -= 1
            if missing[i] == 0:
                queue.append(I.relations[i][1])
    return frozenset(derived)


def solve_mas_bruteforce(I: MasInstance, k_max: Optional[int] = None) -> int:
    """Size of a minimum axiom set, searching sizes ``0..k_max`` in order."""
    n = len(I.sentences)
    if k_max is None:
        k_max = n
    k_max = min(k_max, n)
    if sum(comb(n, k) for k in range(k_max + 1)) > SEARCH_LIMIT:
        raise TooLarge(f"{n} sentences with k_max={k_max} exceeds the search limit")
    everything = frozenset(I.sentences)
    # sentences that are never a conclusion must be axioms
    heads = {s for _, s in I.relations}
    forced = [s for s in I.sentences if s not in heads]
    optional = [s for s in I.sentences if s in heads]
    for k in range(len(forced), k_max + 1):
        for extra in itertools.combinations(optional, k - len(forced)):
            if mas_closure(I, forced + list(extra)) == everything:
                return k
    raise NotFound(f"no axiom set of size <= {k_max}")


def minimum_axiom_set(I: MasInstance, k_max: Optional[int] = None) -> list:
    """One minimum axiom set (same search as :func:`solve_mas_bruteforce`)."""
    k = solve_mas_bruteforce(I, k_max)
    heads = {s for _, s in I.relations}
    forced = [s for s in I.sentences if s not in heads]
    optional = [s for s in I.sentences if s in heads]
    everything = frozenset(I.sentences)
    for extra in itertools.combinations(optional, k - len(forced)):
        if mas_closure(I, forced + list(extra)) == everything:
            return forced + list(extra)
    raise VerificationError("axiom set vanished between searches")


def erasability_to_mas(K, k: Optional[int] = None) -> MasInstance:
    """Instance whose minimum axiom set size equals the erasability number.

    Greedy erasure runs first. On the residual every edge star has at least
    two triangles, so each relation ``(star(e) - {s}, s)`` has a nonempty
    premise.
    """
    tris = _triangle_list(K)
    residual = sorted(erase_greedy(tris).residual)
    relations = []
    for e, star in sorted(_edge_star(residual).items()):
        for s in sorted(star):
            relations.append((frozenset(star - {s}), s))
    return MasInstance(tuple(residual), tuple(relations), k)


# ---------------------------------------------------------------------------
# gadgets


@dataclass
class Gadget:
    """The gadget complex together with the provenance of its triangles."""

    complex: Optional[SimplicialComplex]
    sentence_triangles: dict = field(default_factory=dict)
    tube_triangles: dict = field(default_factory=dict)
    free_sentences: frozenset = frozenset()
    dropped_relations: tuple = ()

    @property
    def representatives(self) -> dict:
        return {s: (tris[0] if tris else None) for s, tris in self.sentence_triangles.items()}


def _ring_sphere(first: int, punctures: int):
    """Triangulated sphere with ``punctures`` vertex-disjoint triangles marked.

    Two rings of ``L`` vertices between a north and a south pole. Returns the
    kept triangles, the vertex triples of the removed ones and the next free
    vertex id.
    """
    L = max(4, 3 * punctures)
    north, south = first, first + 2 * L + 1
    r0 = [first + 1 + i for i in range(L)]
    r1 = [first + 1 + L + i for i in range(L)]
    tris = []
    for i in range(L):
        j = (i + 1) % L
        tris += [(north, r0[i], r0[j]), (r0[i], r0[j], r1[i]),
                 (r0[j], r1[i], r1[j]), (south, r1[i], r1[j])]
    holes = [(r0[3 * p], r0[3 * p + 1], r1[3 * p]) for p in range(punctures)]
    hole_set = {tuple(sorted(h)) for h in holes}
    kept = [tuple(sorted(t)) for t in tris if tuple(sorted(t)) not in hole_set]
    return kept, holes, south + 1


def _tube(a: tuple, c: tuple) -> list:
    """Annulus of six triangles between the 3-cycles ``a`` and ``c``."""
    out = []
    for i in range(3):
        j = (i + 1) % 3
        out.append(tuple(sorted((a[i], a[j], c[i]))))
        out.append(tuple(sorted((a[j], c[i], c[j]))))
    return out


def build_gadget(I: MasInstance, budget: int = GADGET_BUDGET) -> Gadget:
    """Gadget complex for ``I`` with per-part triangle bookkeeping.

    Sentences derivable from nothing need no axiom and get no sphere; they
    are removed from every premise. Relations whose conclusion is already a
    premise, or is free, are dropped since they never help.
    """
    free = mas_closure(I, ())
    relations, dropped = [], []
    for U, s in I.relations:
        if s in free or s in U:
            dropped.append((U, s))
        else:
            relations.append((sorted(U - free, key=_sort_key), s))
    sentences = [s for s in I.sentences if s not in free]

    # punctures: one per relation on the conclusion, two per premise sentence
    wanted = {s: 0 for s in sentences}
    for U, s in relations:
        wanted[s] += 1
        for u in U:
            wanted[u] += 2
    estimate = sum(4 * max(4, 3 * p) for p in wanted.values()) + sum(12 * len(U) for U, _ in relations)
    if estimate > budget:
        raise BudgetExceeded(f"gadget needs about {estimate} triangles, budget is {budget}")

    holes, sphere = {}, {}
    nxt = 0
    for s in sentences:
        kept, hs, nxt = _ring_sphere(nxt, wanted[s])
        sphere[s] = kept
        holes[s] = iter(hs)
    tubes = {}
    for idx, (U, s) in enumerate(relations):
        target = next(holes[s])
        tris = []
        for u in U:
            for _ in range(2):
                tris += _tube(next(holes[u]), target)
        tubes[idx] = tris

    all_tris = [t for ts in sphere.values() for t in ts] + [t for ts in tubes.values() for t in ts]
    K = validate_complex(all_tris) if all_tris else None
    if K is not None and external_triangles(K):
        raise VerificationError("gadget complex has external triangles")
    return Gadget(K, sphere, tubes, free, tuple(dropped))


def _sort_key(x):
    return (type(x).__name__, str(x))


def mas_to_erasability_gadget(I: MasInstance, budget: int = GADGET_BUDGET):
    """Complex whose erasability number equals the minimum axiom set size of ``I``.

    Returns ``(complex, representatives)`` where ``representatives`` maps each
    sentence to one triangle of its sphere (``None`` for sentences derivable
    without axioms). The complex is ``None`` when every sentence is free.
    """
    g = build_gadget(I, budget)
    reps = g.representatives
    for s in g.free_sentences:
        reps[s] = None
    return g.complex, reps
