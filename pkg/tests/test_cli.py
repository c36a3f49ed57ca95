from __future__ import annotations

import json
import subprocess
import sys

import pytest

from paineq import cli
from paineq.certify import CertifyReport
from paineq.errors import NotNilpotent, NotNormal, ParseError
from paineq.feasibility import CANDIDATES_FOUND
from paineq.pipeline import CSV_HEADER, csv_text, run_instance


def run_cli(*argv):
    args = cli.build_parser().parse_args(list(argv))
    text, code = cli.run(args)
    return text, code


def run_json(*argv):
    text, code = run_cli(*argv)
    return json.loads(text), code


# ---- loading ---------------------------------------------------------------------------


def test_load_builder_json():
    G, normal = cli.load_group_spec('{"builder": "dihedral", "n": 12}')
    assert G.order == 24 and normal is None


def test_load_trivial_cyclic():
    G, _ = cli.load_group_spec('{"builder": "cyclic", "n": 1}')
    assert G.order == 1


def test_load_gen_dihedral_json():
    G, _ = cli.load_group_spec('{"builder": "gen_dihedral", "abelian": [3, 3]}')
    assert G.order == 18


def test_load_permutation_file(tmp_path):
    path = tmp_path / "s3.json"
    path.write_text(json.dumps({"degree": 3, "generators": [[1, 2, 0], [1, 0, 2]],
                                "normal_subgroup": [[1, 2, 0]]}))
    G, normal = cli.load_group_spec(str(path))
    assert G.order == 6
    assert cli.resolve_normal(G, None, normal).order == 3


def test_load_errors(tmp_path):
    with pytest.raises(ParseError):
        cli.load_group_spec('{"degree": 3}')
    with pytest.raises(ParseError):
        cli.load_group_spec(str(tmp_path / "missing.json"))
    with pytest.raises(ParseError):
        cli.load_group_spec("{not json")


def test_resolve_normal_validation():
    G, _ = cli.load_group_spec("symmetric:3")
    with pytest.raises(NotNilpotent):
        cli.resolve_normal(G, "whole")
    with pytest.raises(NotNormal):
        cli.resolve_normal(G, "[[1, 0, 2]]")
    assert cli.resolve_normal(G, None).order == 3


def test_parse_orders():
    assert cli.parse_orders(["12", "2,3"]) == [2, 3, 12]
    assert cli.parse_orders(None) is None


def test_family_specs():
    assert cli.family_specs("dihedral", "3-5") == ["dihedral:3", "dihedral:4", "dihedral:5"]
    assert cli.family_specs("gen_dihedral", "3,3|5,5") == ["gen_dihedral:3,3", "gen_dihedral:5,5"]
    with pytest.raises(ParseError):
        cli.family_specs("mystery", "1-2")


# ---- commands ------------------------------------------------------------------------------


def test_solve_d24():
    data, code = run_json("solve", "--group", "dihedral:12", "--normal", "cyclic-part", "--order", "12")
    assert code == cli.EXIT_POSITIVE
    assert data["verdict"] == "SEHGAL_POSITIVE"
    (order,) = data["orders"]
    (cand,) = order["candidates"]
    assert len(cand["variables"]) == 2
    assert sorted(cand["solutions"]) == [["0", "1"], ["1", "0"]]


def test_solve_d24_csv():
    text, code = run_cli("solve", "--group", "dihedral:12", "--normal", "cyclic-part", "--order", "12",
                         "--format", "csv")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[1].startswith("D24,C12,12,2,") and lines[1].endswith(",SEHGAL_POSITIVE,ZC1")
    assert code == 0


def test_certify_gen_dihedral():
    data, code = run_json("certify", "--group", "gen_dihedral:3,3")
    assert code == cli.EXIT_POSITIVE
    main = next(c for c in data["certificates"] if c["rule"] == "MAIN")
    assert main["witnesses"]["n_A"] == "3" and main["witnesses"]["max_index"] == 2


def test_certify_falls_back_to_solve(monkeypatch):
    monkeypatch.setattr(cli, "certify_sehgal", lambda G, N: CertifyReport([]))
    monkeypatch.setattr(cli, "certify_zc", lambda G: CertifyReport([]))
    data, code = run_json("certify", "--group", "dihedral:12", "--normal", "cyclic-part")
    assert code == 0 and data["verdict"] == "SEHGAL_POSITIVE"
    assert [o["order"] for o in data["orders"]] == [1, 2, 3, 4, 6, 12]


def test_lattice_c3_squared():
    data, code = run_json("lattice", "--abelian", "3,3")
    assert code == 0
    assert data["m_A"] == 3 and data["n_A"] == "3" and data["m_minus"] == 3
    assert sum(1 for K in data["cocyclic"] if K["index"] == 3) == 4


def test_classes_with_local_classes():
    data, code = run_json("classes", "--group", "dihedral:12", "--normal", "cyclic-part")
    assert code == 0 and data["order"] == 24
    assert sum(c["size"] for c in data["classes"]) == 24
    assert any(len(lc) == 2 for lc in data["local_classes"])


def test_inequalities_export():
    data, code = run_json("inequalities", "--group", "dihedral:12", "--normal", "cyclic-part", "--order", "12")
    assert code == 0
    (system,) = data["systems"]
    assert system["rows"][0]["rel"] == "EQ"


def test_extra_characters(tmp_path):
    path = tmp_path / "chars.json"
    path.write_text(json.dumps([{"m": 3, "values": [["1", "1", "1"]] * 3}]))
    data, code = run_json("solve", "--group", "symmetric:3", "--order", "3", "--extra-characters", str(path))
    assert code == 0 and data["verdict"] == "SEHGAL_POSITIVE"


# ---- errors and exit codes -------------------------------------------------------------------


def test_error_json_and_exit_one():
    data, code = run_json("solve", "--group", "nonsense:3")
    assert code == cli.EXIT_ERROR and data["errors"]
    data, code = run_json("solve")
    assert code == cli.EXIT_ERROR
    data, code = run_json("search", "--family", "dihedral", "--range", "1-2", "--jobs", "0")
    assert code == cli.EXIT_ERROR


def test_candidates_exit_two(monkeypatch):
    def fake(G, N, orders=None, extra=()):
        rep = run_instance(G, N, orders, extra)
        rep.orders[0].candidates[0].verdict.tag = CANDIDATES_FOUND
        return rep

    monkeypatch.setattr(cli, "run_instance", fake)
    data, code = run_json("solve", "--group", "dihedral:12", "--normal", "cyclic-part", "--order", "12")
    assert code == cli.EXIT_CANDIDATES and data["verdict"] == CANDIDATES_FOUND


def test_certify_exit_zero_when_certificate_fires(monkeypatch):
    monkeypatch.setattr(cli, "run_instance", lambda *a, **k: pytest.fail("solver should not run"))
    _, code = run_json("certify", "--group", "dihedral:12", "--normal", "cyclic-part")
    assert code == 0


def test_empty_search_header_only():
    text, code = run_cli("search", "--family", "dihedral", "--range", "5-4", "--format", "csv")
    assert text == csv_text([]) == ",".join(CSV_HEADER) + "\n"
    assert code == 0


# ---- search ------------------------------------------------------------------------------------


def test_search_deterministic_across_jobs():
    a, ca = run_cli("search", "--family", "dihedral", "--range", "1-8")
    b, cb = run_cli("search", "--family", "dihedral", "--range", "1-8", "--jobs", "3")
    assert a == b and ca == cb == 0


def test_main_writes_out_file(tmp_path):
    out = tmp_path / "r.csv"
    code = cli.main(["search", "--family", "dihedral", "--range", "1-3", "--format", "csv", "--out", str(out)])
    lines = out.read_text().splitlines()
    assert code == 0 and len(lines) == 4
    assert all(line.split(",")[5] == "SEHGAL_POSITIVE" for line in lines[1:])


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "paineq.cli", "lattice", "--abelian", "2,2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["m_A"] == 2
