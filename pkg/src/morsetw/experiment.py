"""Batch treewidth / erasability / Morse experiments over a directory of complexes."""

from __future__ import annotations

import csv
import io
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from .complex import dual_graph, spine
from .errors import MorseTWError
from .io import read_complex
from .morse import EXACT_NODE_LIMIT, erasability_via_acfm, optimal_morse_3manifold
from .treewidth import exact_treewidth, heuristic_decomposition

COLUMNS = ("name", "ntri", "ntet", "tw_spine", "tw_spine_exact", "tw_dual", "tw_dual_exact",
           "er", "cM", "ms_spine", "ms_dual", "ms_acfm", "error")
NUMERIC = ("ntri", "ntet", "tw_spine", "tw_dual", "er", "cM", "ms_spine", "ms_dual", "ms_acfm")


@dataclass
class ExperimentRecord:
    name: str
    ntri: Optional[int] = None
    ntet: Optional[int] = None
    tw_spine: Optional[int] = None
    tw_spine_exact: Optional[bool] = None
    tw_dual: Optional[int] = None
    tw_dual_exact: Optional[bool] = None
    er: Optional[int] = None
    cM: Optional[int] = None
    ms_spine: Optional[float] = None
    ms_dual: Optional[float] = None
    ms_acfm: Optional[float] = None
    error: str = ""


def _width(G, seed):
    if G.node_count <= EXACT_NODE_LIMIT:
        return exact_treewidth(G, EXACT_NODE_LIMIT)[0], True
    return heuristic_decomposition(G, seed=seed).width, False


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000, 3)


def process_file(path, solve: bool = True, seed=None) -> ExperimentRecord:
    rec = ExperimentRecord(Path(path).name)
    try:
        K = read_complex(path)
        rec.ntri, rec.ntet = len(K.triangles), len(K.tetrahedra)
        t0 = time.perf_counter()
        rec.tw_spine, rec.tw_spine_exact = _width(spine(K), seed)
        rec.ms_spine = _ms(t0)
        if K.dimension == 3:
            t0 = time.perf_counter()
            rec.tw_dual, rec.tw_dual_exact = _width(dual_graph(K), seed)
            rec.ms_dual = _ms(t0)
        if solve:
            t0 = time.perf_counter()
            if K.dimension == 2:
                rec.er = erasability_via_acfm(K, EXACT_NODE_LIMIT, seed)
            elif K.is_closed_3():
                rec.cM = optimal_morse_3manifold(K, seed=seed)[1]
            rec.ms_acfm = _ms(t0)
    except MorseTWError as exc:
        rec.error = f"{type(exc).__name__}: {exc}"
    return rec


def _summary(records: list) -> list:
    rows = []
    for label, fn in (("#min", min), ("#max", max), ("#mean", statistics.fmean)):
        row = ExperimentRecord(label)
        for col in NUMERIC:
            vals = [getattr(r, col) for r in records if getattr(r, col) is not None]
            if vals:
                setattr(row, col, fn(vals))
        rows.append(row)
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def run_experiment(directory, solve: bool = True, seed=None, workers: Optional[int] = None) -> str:
    """CSV text with one row per file (sorted by name) and three summary rows.

    ``workers`` defaults to ``MORSETW_THREADS`` (1 when unset).
    """
    paths = sorted(p for p in Path(directory).iterdir() if p.is_file())
    if workers is None:
        workers = int(os.environ.get("MORSETW_THREADS", "1") or 1)
    if workers > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(process_file, paths, [solve] * len(paths), [seed] * len(paths)))
    else:
        records = [process_file(p, solve, seed) for p in paths]
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(COLUMNS)
    rows = records + (_summary(records) if records else [])
    for r in rows:
        d = asdict(r)
        w.writerow([_cell(d[c]) for c in COLUMNS])
    return out.getvalue()


def read_records(text: str) -> list:
    """Parse CSV produced by :func:`run_experiment` back into records."""
    types = {f.name: f.type for f in fields(ExperimentRecord)}
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        rec = {}
        for k, v in row.items():
            t = types[k]
            if k in ("name", "error"):
                rec[k] = v
            elif v == "":
                rec[k] = None
            elif "bool" in t:
                rec[k] = v == "true"
            elif "int" in t:
                rec[k] = int(v) if float(v).is_integer() and "." not in v else float(v)
            else:
                rec[k] = float(v)
        out.append(ExperimentRecord(**rec))
    return out
