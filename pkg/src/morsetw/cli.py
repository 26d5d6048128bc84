"""Command-line entry point.

Exit status is 0 on success, 1 for bad input and 2 when an internal
self-check fails.
"""

from __future__ import annotations

import argparse
import os
import sys

from .acfm import is_alternating_cycle_free, max_acfm
from .complex import dual_graph, erase_greedy, spine
from .errors import InputError, InvalidInputDecomposition, MorseTWError, VerificationError
from .experiment import run_experiment
from .graph import Graph
from .io import (
    parse_graph_pace,
    parse_mas,
    parse_complex,
    parse_td_pace,
    parse_td_pace_sized,
    sentence_id,
    write_complex,
    write_graph_pace,
    write_mas,
    write_td_pace,
)
from .morse import (
    EXACT_NODE_LIMIT,
    critical_triangles_via_acfm,
    decompose,
    hasse_matching_acyclic,
    optimal_morse_3manifold,
)
from .reductions import build_gadget, erasability_to_mas
from .treewidth import (
    exact_treewidth,
    heuristic_decomposition,
    make_nice,
    validate_decomposition,
)


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _complex(path: str):
    return parse_complex(_read(path))


def _simplex(s) -> str:
    return " ".join(map(str, s))


def cmd_er(args) -> None:
    K = _complex(args.file)
    if K.dimension != 2:
        raise InputError("er expects a 2-dimensional complex (triangles)")
    crit = critical_triangles_via_acfm(K, EXACT_NODE_LIMIT, args.seed)
    print(f"er = {len(crit)}")
    for t in crit:
        print(f"critical {_simplex(t)}")


def cmd_morse(args) -> None:
    K = _complex(args.file)
    M, total = optimal_morse_3manifold(K, seed=args.seed)
    if not hasse_matching_acyclic(K, M.pairs):
        raise VerificationError("matching has a cycle in the modified Hasse diagram")
    print(f"c = {' '.join(map(str, M.critical))} (total {total})")
    for tau, sigma in sorted(M.pairs, key=lambda p: (len(p[1]), p)):
        print(f"pair {_simplex(sigma)} < {_simplex(tau)}")


def _with_coloring(G: Graph) -> Graph:
    col = G.two_coloring
    if G.partition is None and col is not None:
        return Graph(G.node_count, G.arcs, partition=tuple(col))
    return G


def cmd_acfm(args) -> None:
    G = _with_coloring(parse_graph_pace(_read(args.graph)))
    if args.td:
        D = parse_td_pace(_read(args.td))
        report = validate_decomposition(G, D)
        if not report.valid:
            raise InvalidInputDecomposition("invalid decomposition", report.violations)
        nice = make_nice(D, G)
    else:
        nice = decompose(G, EXACT_NODE_LIMIT, args.seed)
    res = max_acfm(G, nice)
    if not is_alternating_cycle_free(G, res.witness):
        raise VerificationError("witness matching has an alternating cycle")
    n1 = "n/a" if res.unmatched_n1 is None else res.unmatched_n1
    print(f"size = {res.size}, unmatched N1 = {n1}")
    for u, v in sorted(res.witness):
        print(f"match {u + 1} {v + 1}")


def cmd_treewidth(args) -> None:
    G = parse_graph_pace(_read(args.graph))
    if args.exact:
        _, D = exact_treewidth(G, args.limit)
    else:
        D = heuristic_decomposition(G, seed=args.seed)
    report = validate_decomposition(G, D)
    if not report.valid:
        raise VerificationError("; ".join(report.violations))
    sys.stdout.write(write_td_pace(D, G.node_count, [f"{'exact' if args.exact else 'upper bound'} width {D.width}"]))


def cmd_niceify(args) -> None:
    D, n = parse_td_pace_sized(_read(args.td))
    G = Graph(n, ())
    report = validate_decomposition(G, D)
    if not report.valid:
        raise InvalidInputDecomposition("invalid decomposition", report.violations)
    nice = make_nice(D)
    problems = nice.check()
    if problems or nice.width != D.width:
        raise VerificationError("; ".join(problems) or "width changed")
    tags = [f"{i + 1} {nice.tag(i)}" + ("" if b.vertex is None else f" {b.vertex + 1}")
            for i, b in enumerate(nice.nodes)]
    sys.stdout.write(write_td_pace(nice.as_tree_decomposition(), n, tags))


def _labelled(G: Graph) -> list:
    return [f"{i + 1} {_simplex(lab)}" for i, lab in enumerate(G.labels or ())]


def cmd_spine(args) -> None:
    G = spine(_complex(args.file))
    sys.stdout.write(write_graph_pace(G, _labelled(G)))


def cmd_dualgraph(args) -> None:
    G = dual_graph(_complex(args.file))
    sys.stdout.write(write_graph_pace(G, _labelled(G)))


def cmd_reduce_mas(args) -> None:
    K = _complex(args.file)
    if K.dimension != 2:
        raise InputError("reduce-mas expects a 2-dimensional complex (triangles)")
    sys.stdout.write(write_mas(erasability_to_mas(K)))


def cmd_gadget(args) -> None:
    I = parse_mas(_read(args.file))
    g = build_gadget(I)
    for s, t in g.representatives.items():
        print(f"# sentence {sentence_id(s)} -> {_simplex(t)}")
    for s in sorted(g.free_sentences, key=str):
        print(f"# sentence {sentence_id(s)} is derivable without axioms")
    if g.complex is not None:
        if erase_greedy(g.complex).residual != frozenset(g.complex.triangles):
            raise VerificationError("gadget has external triangles")
        sys.stdout.write(write_complex(g.complex))


def cmd_experiment(args) -> None:
    if not os.path.isdir(args.dir):
        raise InputError(f"{args.dir} is not a directory")
    sys.stdout.write(run_experiment(args.dir, solve=not args.no_solve, seed=args.seed))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="morsetw", description="Morse matchings, erasability and treewidth tools.")
    p.add_argument("--seed", type=int, default=None, help="seed for randomized heuristic tie-breaking")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("er", cmd_er, "erasability number and a critical triangle set").add_argument("file")
    add("morse", cmd_morse, "optimal Morse matching of a closed 3-manifold").add_argument("file")
    sp = add("acfm", cmd_acfm, "maximum alternating cycle-free matching of a PACE graph")
    sp.add_argument("graph")
    sp.add_argument("--td", help="PACE tree decomposition to run the dynamic program on")
    sp = add("treewidth", cmd_treewidth, "tree decomposition of a PACE graph")
    sp.add_argument("graph")
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--limit", type=int, default=EXACT_NODE_LIMIT, help="node limit for --exact")
    add("niceify", cmd_niceify, "nice tree decomposition of a PACE decomposition").add_argument("td")
    add("spine", cmd_spine, "spine graph of a complex in PACE format").add_argument("file")
    add("dualgraph", cmd_dualgraph, "dual graph of a 3-complex in PACE format").add_argument("file")
    add("reduce-mas", cmd_reduce_mas, "minimum axiom set instance of a 2-complex").add_argument("file")
    add("gadget", cmd_gadget, "gadget complex of a minimum axiom set instance").add_argument("file")
    sp = add("experiment", cmd_experiment, "CSV of treewidths and optima over a directory")
    sp.add_argument("dir")
    sp.add_argument("--no-solve", action="store_true", help="skip er / c(M)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except VerificationError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    except MorseTWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
