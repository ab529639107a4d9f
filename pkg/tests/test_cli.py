import json
import subprocess
import sys

import pytest

from vskein.cli import EXIT_CAP, EXIT_INPUT, EXIT_OK, main
from vskein.codec import emit_pd, catalog
from vskein.poly import MultiPoly

from .conftest import A, d1


def run_json(capsys, *argv):
    code = main([*argv, "--json"])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def poly(obj):
    return MultiPoly.from_json(obj)


def test_invariant_figure8(capsys):
    code, out = run_json(capsys, "invariant", "--catalog", "figure8")
    assert code == EXIT_OK
    assert poly(out["X"]) == A**8 - A**4 + 1 - A**-4 + A**-8
    assert out["writhe"] == 0 and out["components"] == 1
    assert out["almost_classical"] and out["checkerboard_colorable"]


def test_invariant_braid_trefoil(capsys):
    code, out = run_json(capsys, "invariant", "--braid", "s=2: s1 s1 s1")
    assert code == EXIT_OK
    assert poly(out["f"]) == -(A**-16) + A**-12 + A**-4


def test_invariant_unknot_text(capsys):
    assert main(["invariant", "--catalog", "unknot"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "X: 1" in out and "writhe: 0" in out


def test_invariant_from_files(tmp_path, capsys):
    pd = tmp_path / "vt.pd"
    pd.write_text(emit_pd(catalog("vtrefoil")))
    gauss = tmp_path / "vt.gauss"
    gauss.write_text("O1+ O2+ U1+ U2+\n")
    _, a = run_json(capsys, "invariant", "--pd", str(pd))
    _, b = run_json(capsys, "invariant", "--gauss", str(gauss))
    assert a["X"] == b["X"]
    assert poly(a["X"]) == A**-4 + (A**-6 - A**-10) * d1


def test_skein_figure8(capsys):
    code, out = run_json(capsys, "skein", "--catalog", "figure8", "--crossing", "1")
    assert code == EXIT_OK
    rel = out["relations"]
    assert all(rel[k]["ok"] for k in ("classical", "checkerboard", "main"))
    side = A**14 - A**10 + A**6 - A**2 + A**-2 - A**-6 + (-(A**8) + A**4 + A**-4 - A**-8) * d1
    assert poly(rel["main"]["lhs"]) == side == poly(rel["main"]["rhs"])
    assert poly(out["diagrams"]["D-"]["X"]) == 1


def test_skein_vtrefoil_gates(capsys):
    code, out = run_json(capsys, "skein", "--catalog", "vtrefoil", "--crossing", "1")
    assert code == EXIT_OK
    assert out["relations"]["classical"]["ok"]
    for name in ("checkerboard", "main"):
        assert out["relations"][name]["gated"].startswith("precondition unmet")


def test_skein_braid_trefoil(capsys):
    code, out = run_json(capsys, "skein", "--braid", "s=2: s1 s1 s1", "--crossing", "2")
    assert code == EXIT_OK
    assert all(r["ok"] for r in out["relations"].values())


@pytest.mark.parametrize("argv", [
    ["skein", "--catalog", "figure8", "--crossing", "2"],
    ["skein", "--catalog", "vtrefoil", "--crossing", "3"],
    ["skein", "--catalog", "figure8", "--crossing", "9"],
    ["invariant", "--catalog", "nope"],
    ["invariant", "--braid", "s=2: s5"],
    ["invariant", "--pd", "/nonexistent/file.pd"],
])
def test_input_errors_exit_2(argv, capsys):
    assert main(argv) == EXIT_INPUT
    assert capsys.readouterr().err.startswith("error:")


def test_cap_exit_3(capsys):
    assert main(["invariant", "--catalog", "figure8", "--cap", "2"]) == EXIT_CAP


def test_exactly_one_source():
    with pytest.raises(SystemExit):
        main(["invariant", "--catalog", "unknot", "--braid", "s=2: s1"])
    with pytest.raises(SystemExit):
        main(["invariant"])


def test_numbering_vtrefoil(capsys):
    code, out = run_json(capsys, "numbering", "--catalog", "vtrefoil")
    assert code == EXIT_OK
    assert out["without_cuts"]["solvable"] is False and out["without_cuts"]["cycle"]
    assert out["numbering"]["solvable"] is True
    assert out["cut_points"]


def test_numbering_around_virtual(capsys):
    code, out = run_json(capsys, "numbering", "--catalog", "paper_triple_virtual", "--around-virtual", "1")
    assert code == EXIT_OK
    assert len(out["cut_points"]) == 2 and out["numbering"]["solvable"]
    assert main(["numbering", "--catalog", "paper_triple_virtual", "--around-virtual", "2"]) == EXIT_INPUT


def test_state_table_curl(capsys):
    assert main(["state-table", "--catalog", "curl+"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 2
    assert "natural=1\tloops=2" in lines[0] and "natural=-1\tloops=1" in lines[1]
    assert main(["state-table", "--catalog", "curl+", "--json"]) == EXIT_OK
    rows = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert [(r["natural"], r["n_loops"]) for r in rows] == [(1, 2), (-1, 1)]


def test_random_is_deterministic(capsys):
    main(["random", "--seed", "7", "--count", "5", "--json"])
    first = capsys.readouterr().out
    main(["random", "--seed", "7", "--count", "5", "--json"])
    assert capsys.readouterr().out == first
    assert len(json.loads(first)["instances"]) == 5
    main(["random", "--seed", "8", "--count", "5", "--json"])
    assert capsys.readouterr().out != first


def test_json_output_is_byte_stable(capsys):
    main(["skein", "--catalog", "figure8", "--crossing", "1", "--json"])
    a = capsys.readouterr().out
    main(["skein", "--catalog", "figure8", "--crossing", "1", "--json"])
    assert capsys.readouterr().out == a


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "vskein", "invariant", "--catalog", "unknot", "--json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["X"] == {"poly": [{"A": 0, "c": 1, "d": {}}]}
