"""Text formats: complexes, PACE-2017 graphs and decompositions, axiom set instances.

Complex files hold one maximal face per line as 3 or 4 non-negative
integers; ``#`` starts a comment. Graph and decomposition files follow the
PACE-2017 treewidth track with 1-based node ids.
"""

from __future__ import annotations

from typing import Iterable, Optional

from .complex import SimplicialComplex, validate_complex
from .errors import InvalidFace, ParseError
from .graph import Graph
from .reductions import MasInstance
from .treewidth import TreeDecomposition


def _lines(text: str, comment: str):
    """Numbered token lists; ``comment`` is ``#`` (inline) or ``c`` (PACE line prefix)."""
    for no, raw in enumerate(text.splitlines(), 1):
        toks = (raw.split("#", 1)[0] if comment == "#" else raw).split()
        if toks and not (comment == "c" and toks[0] == "c"):
            yield no, toks


def _int(tok: str, no: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", no) from None


def parse_complex(text: str) -> SimplicialComplex:
    faces, where = [], []
    for no, toks in _lines(text, "#"):
        if len(toks) not in (3, 4):
            raise ParseError(f"expected 3 or 4 vertices, got {len(toks)}", no)
        face = [_int(t, no) for t in toks]
        if any(v < 0 for v in face):
            raise ParseError("vertex ids must be non-negative", no)
        if faces and len(face) != len(faces[0]):
            raise ParseError("mixed triangles and tetrahedra", no)
        faces.append(face)
        where.append(no)
    if not faces:
        raise ParseError("no faces found")
    try:
        return validate_complex(faces)
    except InvalidFace as exc:
        # point at the first offending line where we can
        seen = {}
        for face, no in zip(faces, where):
            key = tuple(sorted(face))
            if len(set(face)) != len(face) or key in seen:
                raise ParseError(str(exc), no) from exc
            seen[key] = no
        raise ParseError(str(exc)) from exc


def write_complex(K: SimplicialComplex) -> str:
    return "".join(" ".join(map(str, f)) + "\n" for f in K.maximal_faces)


def read_complex(path) -> SimplicialComplex:
    with open(path, encoding="utf-8") as fh:
        return parse_complex(fh.read())


# ---------------------------------------------------------------------------
# PACE


def parse_graph_pace(text: str) -> Graph:
    header, arcs = None, []
    for no, toks in _lines(text, "c"):
        if toks[0] == "p":
            if header is not None:
                raise ParseError("duplicate header", no)
            if len(toks) != 4 or toks[1] != "tw":
                raise ParseError("header must be 'p tw <n> <m>'", no)
            header = (_int(toks[2], no), _int(toks[3], no))
            continue
        if header is None:
            raise ParseError("arc before header", no)
        if len(toks) != 2:
            raise ParseError("arc line must have two node ids", no)
        u, v = _int(toks[0], no), _int(toks[1], no)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise ParseError(f"node id out of range 1..{header[0]}", no)
        if u == v:
            raise ParseError("self loop", no)
        arcs.append((u - 1, v - 1))
    if header is None:
        raise ParseError("missing 'p tw' header")
    if len({tuple(sorted(a)) for a in arcs}) != len(arcs):
        raise ParseError("duplicate arc")
    if len(arcs) != header[1]:
        raise ParseError(f"header announces {header[1]} arcs, found {len(arcs)}")
    return Graph(header[0], tuple(arcs))


def write_graph_pace(G: Graph, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"p tw {G.node_count} {len(G.arcs)}")
    out += [f"{u + 1} {v + 1}" for u, v in G.arcs]
    return "\n".join(out) + "\n"


def parse_td_pace(text: str) -> TreeDecomposition:
    return parse_td_pace_sized(text)[0]


def parse_td_pace_sized(text: str):
    """Decomposition together with the node count from its header."""
    header = None
    bags: dict = {}
    arcs = []
    for no, toks in _lines(text, "c"):
        if toks[0] == "s":
            if header is not None:
                raise ParseError("duplicate header", no)
            if len(toks) != 5 or toks[1] != "td":
                raise ParseError("header must be 's td <bags> <width+1> <n>'", no)
            header = tuple(_int(t, no) for t in toks[2:])
            continue
        if header is None:
            raise ParseError("line before header", no)
        if toks[0] == "b":
            if len(toks) < 2:
                raise ParseError("bag line needs an id", no)
            i = _int(toks[1], no)
            if not 1 <= i <= header[0]:
                raise ParseError(f"bag id out of range 1..{header[0]}", no)
            if i in bags:
                raise ParseError(f"bag {i} defined twice", no)
            vs = [_int(t, no) for t in toks[2:]]
            if any(not 1 <= v <= header[2] for v in vs):
                raise ParseError(f"node id out of range 1..{header[2]}", no)
            bags[i] = tuple(v - 1 for v in vs)
        else:
            if len(toks) != 2:
                raise ParseError("tree arc line must have two bag ids", no)
            a, b = _int(toks[0], no), _int(toks[1], no)
            if not (1 <= a <= header[0] and 1 <= b <= header[0]):
                raise ParseError("tree arc refers to unknown bag", no)
            arcs.append((a - 1, b - 1))
    if header is None:
        raise ParseError("missing 's td' header")
    if len(bags) != header[0]:
        raise ParseError(f"header announces {header[0]} bags, found {len(bags)}")
    size = max((len(b) for b in bags.values()), default=0)
    if size != header[1]:
        raise ParseError(f"header announces bag size {header[1]}, largest bag has {size}")
    return TreeDecomposition(tuple(bags[i + 1] for i in range(header[0])), tuple(arcs)), header[2]


def write_td_pace(D: TreeDecomposition, n: int, comments: Iterable[str] = ()) -> str:
    out = [f"c {c}" for c in comments]
    out.append(f"s td {len(D.bags)} {D.width + 1} {n}")
    for i, bag in enumerate(D.bags, 1):
        out.append(" ".join(["b", str(i)] + [str(v + 1) for v in bag]))
    out += [f"{a + 1} {b + 1}" for a, b in D.tree_arcs]
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# axiom set instances


def parse_mas(text: str, k: Optional[int] = None) -> MasInstance:
    sentences, relations = [], []
    for no, toks in _lines(text, "#"):
        if toks[0] == "s" and len(toks) == 2:
            sentences.append(toks[1])
        elif toks[0] == "r" and len(toks) >= 2:
            relations.append((no, frozenset(toks[2:]), toks[1]))
        else:
            raise ParseError("expected 's <id>' or 'r <s> <u1> ...'", no)
    if len(set(sentences)) != len(sentences):
        raise ParseError("duplicate sentence id")
    known = set(sentences)
    for no, U, s in relations:
        if not (U | {s}) <= known:
            raise ParseError("relation uses undeclared sentence", no)
    return MasInstance(tuple(sentences), tuple((U, s) for _, U, s in relations), k)


def sentence_id(s) -> str:
    """Token for a sentence; triangles become ``a-b-c``."""
    if isinstance(s, tuple):
        return "-".join(map(str, s))
    return str(s)


def write_mas(I: MasInstance) -> str:
    out = [f"s {sentence_id(s)}" for s in I.sentences]
    for U, s in I.relations:
        out.append(" ".join(["r", sentence_id(s)] + sorted(map(sentence_id, U))))
    return "\n".join(out) + "\n"
