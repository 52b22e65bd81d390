import json
from pathlib import Path

import pytest

from tpq.cli import (
    EXAMPLES,
    StructureError,
    build_example,
    dumps_structure,
    load_structure,
    loads_structure,
    main,
    run_command,
    save_structure,
)
from tpq.cli.commands import resolve_file

CORPUS = Path(__file__).resolve().parents[1] / "src" / "tpq" / "corpus"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out)


# --- loading -----------------------------------------------------------------------


def test_ex3_corpus_shape():
    sf = load_structure(CORPUS / "ex3.toml")
    assert sf.chart.dim == 5
    # with opaque f the bivector has six nonzero components
    assert len(sf.bivector.comps) == 6


def test_empty_file_error(tmp_path):
    p = tmp_path / "empty.toml"
    p.write_text("")
    with pytest.raises(StructureError, match=r"missing \[chart\]"):
        load_structure(p)


def test_decreasing_index_error():
    text = '[chart]\ncoordinates = ["x1", "x2"]\n[bivector]\n"2,1" = "1"\n'
    with pytest.raises(StructureError, match="indices must be strictly increasing"):
        loads_structure(text)


@pytest.mark.parametrize(
    "text,needle",
    [
        ('[chart]\ncoordinates = ["x1", "x2"]\n[bivector]\n"1,3" = "1"\n', "out of range"),
        ('[chart]\ncoordinates = ["x1", "x2"]\n[bivector]\n"1" = "1"\n', "expected 2"),
        ('[chart]\ncoordinates = ["x1", "x2"]\n[bivector]\n"1,2" = "y"\n', "y"),
        ('[chart]\ncoordinates = ["x1", "x2"]\n[bivector]\n"1,2" = "x1 +"\n', "position"),
        ('[chart]\ncoordinates = ["x1", "x1"]\n', "duplicate"),
        ("[chart\n", "malformed TOML"),
        ('[lie]\nentries = [[1, 2], [2, 1]]\n', "lie"),
    ],
)
def test_load_errors(text, needle):
    with pytest.raises(StructureError, match=needle):
        loads_structure(text)


def test_missing_file():
    with pytest.raises(StructureError, match="cannot read"):
        load_structure("/nonexistent/file.toml")


# --- round trip and corpus ----------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_corpus_matches_builders(name):
    sf = build_example(name)
    assert (CORPUS / f"{name}.toml").read_text() == dumps_structure(sf)


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_round_trip(name, tmp_path):
    sf = build_example(name)
    p = tmp_path / f"{name}.toml"
    save_structure(sf, p)
    back = load_structure(p)
    if sf.chart is not None:
        assert back.chart == sf.chart
        assert back.bivector == sf.bivector
        assert back.forms.keys() == sf.forms.keys()
        for k in sf.forms:
            assert back.forms[k] == sf.forms[k]
        assert back.omega == sf.omega and back.Z == sf.Z
        assert (back.polarization or []) == (sf.polarization or [])
        assert back.candidates.keys() == sf.candidates.keys()
        for key, v in sf.candidates.items():
            assert back.candidates[key] == v
    else:
        assert back.lie.algebra.names == sf.lie.algebra.names
        assert back.lie.r.to_strings() == sf.lie.r.to_strings()
        assert back.lie.phi.to_strings() == sf.lie.phi.to_strings()
    assert dumps_structure(back) == dumps_structure(sf)


def test_lie_basis_form_round_trip():
    text = (
        '[lie]\nbasis = ["a", "b"]\n[lie.brackets]\n"a,b" = {b = "1"}\n'
        '[lie.r]\n"a,b" = "1"\n'
    )
    sf = loads_structure(text)
    assert sf.lie.algebra.dim == 2
    again = loads_structure(dumps_structure(sf))
    assert again.lie.r.to_strings() == {"a^b": "1"}


def test_resolve_corpus_names(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert resolve_file("ex6.toml").name == "ex6.toml"
    assert resolve_file("ex2").name == "ex2.toml"
    assert resolve_file("nothing.toml") is None


# --- commands -------------------------------------------------------------------------


def test_check_structure_ex2(capsys):
    code, rep = run(["check-structure", str(CORPUS / "ex2.toml")], capsys)
    assert code == 0 and rep["status"] == "pass"
    assert set(rep) == {"check", "status", "residuals", "assumptions", "millis"}


def test_solve_prequant_lie_ex6(capsys):
    code, rep = run(["solve-prequant-lie", str(CORPUS / "ex6.toml")], capsys)
    assert code == 1 and rep["status"] == "fail"
    assert rep["details"]["certificate"] == {"e13*^e23*": "1"}
    assert rep["details"]["certificate_valid"] is True
    assert "integrality: assumed" in rep["assumptions"]
    assert "convention" in rep["details"]


def test_run_example_quant51(capsys):
    code, rep = run(["run-example", "quant51", "--n", "2"], capsys)
    assert code == 0, rep
    assert rep["details"]["subchecks"]["h0-residual"] == "pass"


def test_run_example_quant51_n1(capsys):
    code, rep = run(["run-example", "quant51", "--n", "1"], capsys)
    assert code == 0, rep


@pytest.mark.parametrize(
    "argv,code",
    [
        (["check-structure", "ex1"], 0),
        (["check-structure", "ex3"], 0),
        (["check-structure", "ex6"], 0),
        (["check-prequant", "ex4"], 0),
        (["cohomology-lie", "ex6"], 0),
        (["check-polarization", "quant51"], 0),
        (["membership", "quant51"], 0),
        (["h0-residual", "quant51"], 0),
        (["quantum-op", "quant51"], 0),
        (["jacobiator", "ex2", "--n", "2", "--seed", "3"], 0),
        (["chainmap", "ex3", "--n", "1"], 0),
        (["run-example", "ex4"], 0),
        (["run-example", "ex6"], 1),
        (["bogus", "ex1"], 2),
        (["membership", "ex1"], 2),
        (["check-prequant", "ex3"], 2),
        (["solve-prequant-lie", "ex2"], 2),
        (["check-structure", "nothing.toml"], 2),
        (["run-example", "ex5"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    got, rep = run(argv, capsys)
    assert got == code, rep
    assert rep["status"] == {0: "pass", 1: "fail", 2: "error"}[code]


def test_missing_section_message(capsys):
    _, rep = run(["check-polarization", "ex1"], capsys)
    assert "missing [polarization]" in rep["error"]


def test_failing_structure_reports_residuals(tmp_path, capsys):
    sf = build_example("ex3")
    sf.forms = {}
    p = tmp_path / "bad.toml"
    save_structure(sf, p)
    code, rep = run(["check-structure", str(p)], capsys)
    assert code == 1 and rep["residuals"]
    assert all(r["expr"] != "0" for r in rep["residuals"])


def test_json_output_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, rep = run(["check-structure", "ex1", "--json", str(out)], capsys)
    assert json.loads(out.read_text()) == rep


def test_determinism(capsys):
    texts = []
    for _ in range(2):
        main(["chainmap", "ex2", "--n", "2", "--seed", "11"])
        texts.append(capsys.readouterr().out)
    assert texts[0] == texts[1]
    a = run_command("run-example", "ex6").to_json(timing=False)
    b = run_command("run-example", "ex6").to_json(timing=False)
    assert a == b


def test_timing_flag(capsys):
    _, rep = run(["cohomology-lie", "ex6", "--timing"], capsys)
    assert rep["millis"] > 0
    _, rep = run(["cohomology-lie", "ex6"], capsys)
    assert rep["millis"] == 0


def test_max_dim(tmp_path, capsys):
    coords = [f"x{k}" for k in range(1, 10)]
    p = tmp_path / "big.toml"
    p.write_text(f'[chart]\ncoordinates = {json.dumps(coords)}\n[bivector]\n"1,2" = "1"\n')
    code, rep = run(["check-structure", str(p)], capsys)
    assert code == 2 and "cap" in rep["error"]
    code, rep = run(["check-structure", str(p), "--max-dim", "9"], capsys)
    assert code == 0
    main(["check-structure", "ex1", "--max-dim", "8"])
    capsys.readouterr()
