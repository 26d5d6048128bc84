import itertools

import pytest

import morsetw.cli as cli
from morsetw.catalog import boundary_of_simplex, single_triangle, torus
from morsetw.complex import spine
from morsetw.graph import Graph
from morsetw.io import (
    parse_complex,
    parse_graph_pace,
    parse_mas,
    parse_td_pace,
    parse_td_pace_sized,
    write_complex,
    write_graph_pace,
    write_td_pace,
)
from morsetw.morse import validate_morse_matching
from morsetw.treewidth import TreeDecomposition, validate_decomposition

C6 = Graph(6, tuple((i, (i + 1) % 6) for i in range(6)))


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_er_single_triangle(write, capsys):
    code, out, _ = run(capsys, "er", write("t.txt", "0 1 2\n"))
    assert code == 0 and out == "er = 0\n"


def test_er_prints_certificate(write, capsys):
    code, out, _ = run(capsys, "er", write("torus.txt", write_complex(torus())))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "er = 1"
    assert len(lines) == 2 and lines[1].startswith("critical ")


def test_er_rejects_3_complex(write, capsys):
    code, _, err = run(capsys, "er", write("d4.txt", write_complex(boundary_of_simplex(4))))
    assert code == 1 and "2-dimensional" in err


def test_morse_boundary_4_simplex(write, capsys):
    K = boundary_of_simplex(4)
    code, out, _ = run(capsys, "morse", write("d4.txt", write_complex(K)))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "c = 1 0 0 1 (total 2)"
    pairs = []
    for line in lines[1:]:
        lo, hi = line.removeprefix("pair ").split(" < ")
        pairs.append((tuple(map(int, hi.split())), tuple(map(int, lo.split()))))
    assert len(pairs) == (5 + 10 + 10 + 5 - 2) // 2
    assert validate_morse_matching(K, pairs) == (True, (1, 0, 0, 1))


def test_acfm_c6(write, capsys):
    code, out, _ = run(capsys, "acfm", write("c6.gr", write_graph_pace(C6)))
    lines = out.splitlines()
    assert code == 0 and lines[0] == "size = 2, unmatched N1 = 1"
    assert len(lines) == 3 and all(l.startswith("match ") for l in lines[1:])


def test_acfm_with_decomposition(write, capsys):
    D = TreeDecomposition(((0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5)), ((0, 1), (1, 2), (2, 3)))
    gr = write("c6.gr", write_graph_pace(C6))
    code, out, _ = run(capsys, "acfm", gr, "--td", write("c6.td", write_td_pace(D, 6)))
    assert code == 0 and out.startswith("size = 2, unmatched N1 = 1")


def test_acfm_non_bipartite(write, capsys):
    tri = Graph(3, ((0, 1), (1, 2), (0, 2)))
    code, out, _ = run(capsys, "acfm", write("k3.gr", write_graph_pace(tri)))
    assert code == 0 and out.startswith("size = 1, unmatched N1 = n/a")


def test_acfm_rejects_bad_decomposition(write, capsys):
    gr = write("c6.gr", write_graph_pace(C6))
    # arcs 3-4 and 6-1 are in no bag
    bad = write("bad.td", "s td 2 3 6\nb 1 1 2 3\nb 2 4 5 6\n1 2\n")
    code, _, err = run(capsys, "acfm", gr, "--td", bad)
    assert code == 1 and "invalid decomposition" in err


def test_treewidth(write, capsys):
    gr = write("k5.gr", write_graph_pace(Graph(5, tuple(itertools.combinations(range(5), 2)))))
    for extra in ((), ("--exact",)):
        code, out, _ = run(capsys, "treewidth", gr, *extra)
        assert code == 0
        D, n = parse_td_pace_sized(out)
        assert n == 5 and D.width == 4
        header = next(l for l in out.splitlines() if l.startswith("s td"))
        assert header.split()[3:] == ["5", "5"]


def test_treewidth_exact_limit(write, capsys):
    gr = write("big.gr", write_graph_pace(Graph(25, tuple((i, i + 1) for i in range(24)))))
    code, _, err = run(capsys, "treewidth", gr, "--exact")
    assert code == 1 and err


def test_niceify(write, capsys):
    D = TreeDecomposition(((0, 1), (1, 2), (1, 3)), ((0, 1), (0, 2)))
    code, out, _ = run(capsys, "niceify", write("d.td", write_td_pace(D, 4)))
    assert code == 0
    nice = parse_td_pace(out)
    assert nice.width == D.width
    G = Graph(4, ((0, 1), (1, 2), (1, 3)))
    assert validate_decomposition(G, nice)
    tags = [l.split()[2] for l in out.splitlines() if l.startswith("c ")]
    assert set(tags) <= {"leaf", "introduce", "forget", "join", "root"} and "root" in tags


def test_spine_and_dualgraph(write, capsys):
    f = write("d4.txt", write_complex(boundary_of_simplex(4)))
    code, out, _ = run(capsys, "spine", f)
    assert code == 0 and parse_graph_pace(out).node_count == 20
    assert len(parse_graph_pace(out).arcs) == len(spine(boundary_of_simplex(4)).arcs)
    code, out, _ = run(capsys, "dualgraph", f)
    assert code == 0 and out.splitlines()[5] == "p tw 5 10"


def test_reduce_mas_and_gadget(write, capsys):
    code, out, _ = run(capsys, "reduce-mas", write("s2.txt", write_complex(boundary_of_simplex(3))))
    assert code == 0
    I = parse_mas(out)
    assert len(I.sentences) == 4 and len(I.relations) == 12
    code, out, _ = run(capsys, "gadget", write("ab.mas", "s a\ns b\nr b a\n"))
    assert code == 0
    K = parse_complex(out)
    assert len(K.triangles) > 0
    assert "# sentence a -> " in out


def test_experiment(write, capsys, tmp_path):
    d = tmp_path / "corpus"
    d.mkdir()
    (d / "tri.txt").write_text("0 1 2\n")
    (d / "broken.txt").write_text("0 1\n")
    code, out, _ = run(capsys, "experiment", str(d))
    rows = out.splitlines()
    assert code == 0 and rows[0].startswith("name,ntri,ntet,tw_spine")
    assert rows[1].startswith("broken.txt,") and "ParseError" in rows[1]
    assert rows[2].startswith("tri.txt,1,0,")


def test_seed_is_accepted(write, capsys):
    code, out, _ = run(capsys, "--seed", "7", "er", write("t.txt", write_complex(single_triangle())))
    assert code == 0 and out == "er = 0\n"


@pytest.mark.parametrize("argv", [
    ("er", "/nonexistent/file"),
    ("acfm", "/nonexistent.gr"),
    ("experiment", "/nonexistent-dir"),
])
def test_missing_input_exits_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err.startswith("error:")


def test_malformed_input_exits_1(write, capsys):
    code, _, err = run(capsys, "er", write("bad.txt", "0 1 2\n0 1 2 3\n"))
    assert code == 1 and "line 2" in err


def test_morse_on_open_complex_exits_1(write, capsys):
    code, _, _ = run(capsys, "morse", write("t.txt", "0 1 2 3\n"))
    assert code == 1


def test_verification_failure_exits_2(write, capsys, monkeypatch):
    monkeypatch.setattr(cli, "is_alternating_cycle_free", lambda G, M: False)
    code, _, err = run(capsys, "acfm", write("c6.gr", write_graph_pace(C6)))
    assert code == 2 and err.startswith("internal check failed")
