import csv
import io
import json
import subprocess
import sys

import pytest

from zssep import cli
from zssep.report import FormulaCheck


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def doc(*argv):
    code, out, err = run(*argv, "--format", "json")
    assert code == 0, err
    return json.loads(out)


@pytest.fixture(autouse=True)
def no_env_cache(monkeypatch):
    monkeypatch.delenv("ZSSEP_CACHE_DIR", raising=False)


def test_beta_sep_json():
    d = doc("beta-sep", "C3xC3")
    assert d["beta_sep"] == 4
    assert d["group"] == "C3xC3"
    assert all(w["length"] == 4 for w in d["witnesses"])


def test_min_sep_size_table():
    code, out, _ = run("min-sep-size", "C6")
    assert code == 0
    assert out.splitlines()[0] == "min_sep_size(C6) = 14"
    assert doc("min-sep-size", "C6")["min_sep_size"] == 14


def test_verify_formulas_range():
    code, out, _ = run("verify-formulas", "C2..C12")
    assert code == 0
    assert "all checks match" in out
    d = doc("verify-formulas", "C2..C12")
    assert [g["group"] for g in d["groups"]] == [f"C{n}" for n in range(2, 13)]
    assert d["all_match"]
    for g in d["groups"]:
        assert g["formula_checks"]["cyclic_min"]["match"]


def test_verify_formulas_mixed_list():
    d = doc("verify-formulas", "C2x2", "C3x3", "C2x2x2")
    names = {g["group"]: set(g["formula_checks"]) for g in d["groups"]}
    assert "lambda1" in names["C2xC2"] and "lambda1" in names["C2xC2xC2"]
    assert "beta_sep_closed_form[odd-rank]" in names["C2xC2xC2"]


def test_mismatch_exits_two(monkeypatch):
    def broken(G, beta, min_size):
        return [FormulaCheck("made_up", beta + 1, beta, "==")]

    monkeypatch.setattr(cli, "formula_checks", broken)
    code, out, _ = run("verify-formulas", "C2")
    assert code == 2
    assert "MISMATCH" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["beta-sep", "C1"],
        ["beta-sep", "D4"],
        ["beta-sep", "C4xC8", "--budget", "10"],
        ["property-p", "C2x2"],
        ["property-p", "C2x2", "--subset", "[1,0],[0,1],[1,1],[0,0]"],
        ["property-p", "C2x2", "--subset", "1,0"],
        ["atoms", "C6"],
        ["inverse-rank2", "C6"],
        ["verify-formulas", "C5..C3"],
        ["beta-sep", "C2", "--jobs", "0"],
        ["beta-sep", "C2", "--format", "xml"],
    ],
)
def test_usage_errors_exit_one(argv):
    code, out, err = run(*argv)
    assert code == 1
    assert out == ""
    assert err.startswith("error:")


def test_property_p_reports_method_and_cross_check():
    d = doc("property-p", "C3x3", "--subset", "[1,0],[0,1],[1,1]")
    assert d["holds"] is True
    assert d["method"] == "p-group-rank"
    assert d["direct_holds"] is True
    d = doc("property-p", "C3x3", "--subset", "[1,0],[0,1],[1,1]", "--no-fast-filters")
    assert d["method"] == "direct-lattice" and d["holds"] is True
    assert d["witness"]["vector"]


def test_no_fast_filters_same_numbers():
    for cmd in (["min-sep-size", "C2x4"], ["build-omega", "C3x3"]):
        a = doc(*cmd)
        b = doc(*cmd, "--no-fast-filters")
        a.pop("methods", None), b.pop("methods", None)
        assert a == b


def test_symmetry_flag_same_output():
    for cmd in (["min-sep-size", "C2x2x2"], ["beta-sep", "C4x4"], ["sreg", "C3x3"]):
        assert doc(*cmd) == doc(*cmd, "--symmetry")


def test_jobs_flag_same_output():
    assert doc("beta-sep", "C2x6", "--jobs", "2") == doc("beta-sep", "C2x6")


def test_json_is_deterministic():
    runs = [run("sreg", "C2x4", "--format", "json")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    assert runs[0] == json.dumps(json.loads(runs[0]), sort_keys=True, indent=2) + "\n"


def test_csv_output():
    code, out, _ = run("min-sep-size", "C2x2", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows == [["size", "property_p_count"], ["1", "4"], ["2", "0"], ["3", "1"]]


def test_davenport_and_atoms():
    d = doc("davenport", "C4x8")
    assert d["davenport"] == 11 == d["d_star"]
    assert d["witness"]["length"] == 11
    d = doc("davenport", "C4x8", "--support", "[1,1],[3,1]")
    assert d["davenport"] == 8
    d = doc("atoms", "C4x8", "--support", "[1,1],[3,1]")
    assert sorted(map(tuple, d["atoms"])) == sorted([(8, 0), (0, 8), (6, 2), (4, 4), (2, 6)])


def test_sep_atoms():
    d = doc("sep-atoms", "C3x3", "--support", "[1,0],[0,1],[1,1]")
    assert d["max_separating_length"] == 4
    flags = {tuple(a["mult"]): a["separating"] for a in d["atoms"]}
    assert flags[(2, 2, 1)] is False


def test_beta_sep_formula():
    d = doc("beta-sep-formula", "C2x2x2x2")
    assert d["lower_bound"] == 5
    assert d["closed_form"]["value"] == 5 and d["closed_form"]["case"] == "rank-four"
    assert doc("beta-sep-formula", "C6x6x6")["closed_form"]["case"] == "odd-rank"
    # 2G = C6+C6+C6 is too big to search and no theorem covers it
    d = doc("beta-sep-formula", "C2x2x2x12x12x12")
    assert d["closed_form"] is None and d["lower_bound"] == 2 // 2 + 12 + 12 + 12


def test_reports():
    d = doc("inverse-rank2", "C2x4")
    assert d["holds"] and d["checked"] > 0
    d = doc("conjecture-supp", "C6")
    assert not d["holds"]
    assert {c["rendered"] for c in d["counterexamples"]} == {"[1]^6", "[5]^6"}
    assert doc("conjecture-supp", "C2x2")["holds"]


def test_examples_command():
    code, out, _ = run("examples")
    assert code == 0
    d = doc("examples")
    assert all(d["checks"].values())
    assert d["non_transfer"]["quotient_decomposition"] is None


def test_build_omega_and_sreg():
    d = doc("build-omega", "C2x2")
    assert d["size"] == 5 and d["divisibility_findings"] == []
    d = doc("sreg", "C3x3")
    assert d["max_length"] == 4


def test_cache_hit_is_byte_identical(tmp_path):
    argv = ["beta-sep", "C2x2x2x2", "--format", "json", "--cache-dir", str(tmp_path)]
    first = run(*argv)
    files = list(tmp_path.iterdir())
    assert len(files) == 1
    second = run(*argv)
    assert first == second
    # tables are cached too, from the same entry
    assert run("beta-sep", "C2x2x2x2", "--cache-dir", str(tmp_path))[0] == 0


def test_cache_hit_skips_computation(tmp_path, monkeypatch):
    argv = ["min-sep-size", "C6", "--format", "json", "--cache-dir", str(tmp_path)]
    first = run(*argv)
    monkeypatch.setitem(cli.COMMANDS, "min-sep-size", lambda cfg: pytest.fail("recomputed"))
    assert run(*argv) == first


def test_corrupt_cache_recomputes(tmp_path, caplog):
    argv = ["min-sep-size", "C6", "--format", "json", "--cache-dir", str(tmp_path)]
    first = run(*argv)
    for f in tmp_path.iterdir():
        f.write_text("garbage")
    code, out, _ = run(*argv)
    assert code == 0 and out == first[1]
    assert "corrupt cache entry" in caplog.text


def test_env_cache_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("ZSSEP_CACHE_DIR", str(tmp_path))
    run("min-sep-size", "C4")
    assert len(list(tmp_path.iterdir())) == 1


def test_cache_key_includes_options(tmp_path):
    base = ["min-sep-size", "C2x2", "--cache-dir", str(tmp_path)]
    run(*base)
    run(*base, "--no-fast-filters")
    run(*base, "--symmetry")
    run(*base, "--jobs", "2")
    assert len(list(tmp_path.iterdir())) == 3


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "zssep", "beta-sep", "C2x2", "--format", "json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["beta_sep"] == 3
    proc = subprocess.run([sys.executable, "-m", "zssep", "beta-sep", "C1"], capture_output=True, text=True)
    assert proc.returncode == 1
