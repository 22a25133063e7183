from __future__ import annotations

import numpy as np
import pytest

from wlkit.cli import main
from wlkit.coherent import parse_scheme
from wlkit.families import complete, cycle, petersen, rook_4x4, shrikhande
from wlkit.graph import parse_wlg, serialize_wlg
from wlkit.cfi import parse_cfi_map_roles


@pytest.fixture()
def files(tmp_path):
    def write(name, g):
        p = tmp_path / name
        p.write_text(serialize_wlg(g))
        return str(p)

    return tmp_path, write


def test_refine_summary(files, capsys):
    _, write = files
    assert main(["refine", write("c6.wlg", cycle(6)), "-k", "2"]) == 0
    out = capsys.readouterr().out
    assert "classes 4" in out
    assert "vertex-classes 1" in out


def test_refine_export(files, capsys, tmp_path):
    _, write = files
    dest = tmp_path / "colors.txt"
    assert main(["refine", write("c4.wlg", cycle(4)), "--export", str(dest)]) == 0
    lines = dest.read_text().strip().splitlines()
    assert len(lines) == 16


def test_certify_digest_only_is_relabel_invariant(files, capsys):
    _, write = files
    g = petersen()
    h = g.relabel([9, 8, 7, 6, 5, 4, 3, 2, 1, 0])
    a = write("a.wlg", g)
    b = write("b.wlg", h)
    assert main(["certify", a, "--mode", "canonical", "--digest-only"]) == 0
    da = capsys.readouterr().out.strip()
    assert main(["certify", b, "--mode", "canonical", "--digest-only"]) == 0
    db = capsys.readouterr().out.strip()
    assert da == db and len(da) == 64


def test_certify_report_fields(files, capsys):
    _, write = files
    assert main(["certify", write("g.wlg", cycle(5)), "--mode", "verified"]) == 0
    out = capsys.readouterr().out
    assert "digest " in out and "orbit-flag 0" in out


def test_iso_verdicts(files, capsys):
    _, write = files
    c6 = write("c6.wlg", cycle(6))
    cc = write("cc.wlg", cycle(6).relabel([3, 4, 5, 0, 1, 2]))
    k4 = write("k4.wlg", complete(4))
    assert main(["iso", c6, cc]) == 0
    assert main(["iso", c6, k4]) == 1
    assert main(["iso", c6, cc, "--method", "oracle"]) == 0
    out = capsys.readouterr().out
    assert "mapping" in out
    assert main(["iso", c6, k4, "--method", "oracle"]) == 1
    shr = write("s.wlg", shrikhande())
    rook = write("r.wlg", rook_4x4())
    assert main(["iso", shr, rook, "--method", "similar", "-k", "2"]) == 0
    assert main(["iso", shr, rook, "--method", "similar", "-k", "3"]) == 1


def test_orbits(files, capsys):
    _, write = files
    p4 = write("p4.wlg", parse_wlg("p wlg 4 3 0\ne 0 1\ne 1 2\ne 2 3\n"))
    assert main(["orbits", p4]) == 0
    assert capsys.readouterr().out == "0 3\n1 2\n"
    assert main(["orbits", p4, "--method", "refine"]) == 0
    assert capsys.readouterr().out == "0 3\n1 2\n"


def test_separator(files, capsys):
    _, write = files
    assert main(["separator", write("k4.wlg", complete(4))]) == 0
    assert capsys.readouterr().out.strip() == "3"


def test_cfi_pipeline(files, capsys, tmp_path):
    _, write = files
    base = write("k4.wlg", complete(4))
    out = tmp_path / "gadget.wlg"
    sidecar = tmp_path / "gadget.map"
    assert main(["cfi", base, "-o", str(out), "--map", str(sidecar),
                 "--twist", "0-1"]) == 0
    g = parse_wlg(out.read_text())
    assert g.n == 40
    rows = parse_cfi_map_roles(sidecar.read_text())
    assert len(rows) == 40
    # twists only make sense for a single replacement step
    assert main(["cfi", base, "--depth", "2", "--twist", "0-1",
                 "-o", str(out)]) == 2


def test_cfi_depth(files, tmp_path):
    _, write = files
    out = tmp_path / "l2.wlg"
    assert main(["cfi", write("k4.wlg", complete(4)), "--depth", "2",
                 "-o", str(out)]) == 0
    assert parse_wlg(out.read_text()).n == 400


def test_klein_validate_and_twist(files, capsys, tmp_path):
    _, write = files
    base = write("k4.wlg", complete(4))
    out = tmp_path / "scheme.cc"
    assert main(["klein", base, "-o", str(out), "--validate"]) == 0
    assert "valid 1" in capsys.readouterr().out
    c = parse_scheme(out.read_text())
    assert c.n == 16 and c.s == 40
    twisted = tmp_path / "twisted.cc"
    assert main(["klein", base, "-o", str(twisted), "--twist-fibre", "0"]) == 0
    t = parse_scheme(twisted.read_text())
    assert not np.array_equal(t.rel, c.rel)


def test_klein_merge_and_graph_out(files, capsys, tmp_path):
    _, write = files
    base = write("k4.wlg", complete(4))
    out = tmp_path / "merged.cc"
    gout = tmp_path / "scheme.wlg"
    assert main(["klein", base, "-o", str(out), "--merge",
                 "--graph-out", str(gout)]) == 0
    assert parse_scheme(out.read_text()).s == 40
    sg = parse_wlg(gout.read_text())
    assert sg.n == 16 and sg.directed


def test_validate_command(files, capsys, tmp_path):
    _, write = files
    base = write("k4.wlg", complete(4))
    out = tmp_path / "scheme.cc"
    assert main(["klein", base, "-o", str(out)]) == 0
    assert main(["validate", str(out)]) == 0
    assert "valid 1" in capsys.readouterr().out
    # move one within-fibre pair into a different relation: coherence breaks
    from wlkit.coherent import serialize_scheme

    c = parse_scheme(out.read_text())
    c.rel[0, 1] = c.rel[0, 2]
    c.rel[1, 0] = c.rel[2, 0]
    bad = tmp_path / "bad.cc"
    bad.write_text(serialize_scheme(c))
    assert main(["validate", str(bad)]) == 1
    assert "valid 0" in capsys.readouterr().out


def test_decompose_and_reduce(files, capsys):
    _, write = files
    c4 = write("c4.wlg", cycle(4))
    assert main(["decompose", c4]) == 0
    out = capsys.readouterr().out
    assert "pieces 2" in out
    assert main(["reduce", c4]) == 0
    out = capsys.readouterr().out
    assert "depth" in out and "digest" in out
    assert main(["reduce", c4, "--digest-only"]) == 0
    assert len(capsys.readouterr().out.strip()) == 64


def test_bench(files, capsys):
    assert main(["bench", "--sizes", "6,8", "--repeats", "1"]) == 0
    out = capsys.readouterr().out
    assert "# backend:" in out and "seconds" in out


def test_stdin_input(files, capsys, monkeypatch):
    import io

    monkeypatch.setattr("sys.stdin", io.StringIO(serialize_wlg(cycle(6))))
    assert main(["refine", "-"]) == 0
    assert "classes 4" in capsys.readouterr().out


def test_error_paths(files, capsys, tmp_path):
    assert main(["refine", str(tmp_path / "missing.wlg")]) == 2
    assert "error:" in capsys.readouterr().err
    bad = tmp_path / "bad.wlg"
    bad.write_text("p wlg 1 5 0\n")
    assert main(["refine", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "wlkit" in capsys.readouterr().out
