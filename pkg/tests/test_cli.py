import io
import json
import subprocess
import sys

import pytest

from lyhall.cli import main


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


# -- basis ---------------------------------------------------------------------


def test_basis_listing():
    code, out, _ = cli("basis", "--gens", "a,b", "--max-degree", "2", "--list")
    assert code == 0
    assert out.splitlines() == ["degree 1: a, b", "degree 2: (b*a)"]


def test_basis_counts_csv():
    code, out, _ = cli("basis", "--gens", "a", "--max-degree", "3", "--format", "csv")
    assert code == 0 and out == "degree,count\n1,1\n2,0\n3,0\n"


def test_basis_generator_count_matches_names():
    assert cli("basis", "--gens", "2", "--max-degree", "4")[1] == cli("basis", "--gens", "a,b", "--max-degree", "4")[1]


def test_generator_order_comes_from_the_command_line():
    _, out, _ = cli("basis", "--gens", "b,a", "--max-degree", "2", "--list")
    assert out.splitlines()[1] == "degree 2: (a*b)"


@pytest.mark.parametrize(
    "argv",
    [
        ("basis", "--gens", "a,b", "--max-degree", "0"),
        ("basis", "--gens", "a,a", "--max-degree", "2"),
        ("basis", "--max-degree", "2"),
        ("frobnicate",),
        ("normalize", "--gens", "a,b", "b**a"),
        ("normalize", "--gens", "a,b", "a*z"),
    ],
)
def test_usage_errors_exit_2(argv):
    code, out, err = cli(*argv)
    assert code == 2 and out == "" and err


def test_parse_error_reports_offset():
    _, _, err = cli("normalize", "--gens", "a,b", "b**a")
    assert "offset 2" in err


def test_basis_json_schema():
    code, out, _ = cli("basis", "--gens", "a,b", "--max-degree", "2", "--list", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["degrees"][1] == {"degree": 2, "count": 1, "elements": ["(b*a)"]}


def test_cap_exit_code():
    assert cli("basis", "--gens", "2", "--max-degree", "12")[0] == 3


# -- normalize -----------------------------------------------------------------


def test_normalize_examples():
    assert cli("normalize", "--gens", "a,b", "a*b")[1].strip() == "-1 (b*a)"
    assert cli("normalize", "--gens", "a,b", "[a,a,b]")[1].strip() == "0"


def test_normalize_certify():
    code, out, _ = cli("normalize", "--gens", "a,b,c", "[a,b,c]", "--certify")
    assert code == 0
    assert out.splitlines() == ["-1 [b,a,c]", "certified: in-span"]


def test_normalize_linear_combination():
    code, out, _ = cli("normalize", "--gens", "a,b", "a*b + b*a + 2 [b,a,a]")
    assert code == 0 and out.strip() == "2 [b,a,a]"


def test_normalize_json():
    data = json.loads(cli("normalize", "--gens", "a,b", "a*b", "--format", "json")[1])
    assert data["schema"] == 1
    assert data["normal_form"] == [{"term": "(b*a)", "coefficient": "-1"}]


# -- oracle --------------------------------------------------------------------


def test_oracle_verify_pass():
    code, out, _ = cli("oracle", "verify", "--gens", "2", "--degree", "3")
    assert code == 0 and "result          pass" in out


def test_oracle_verify_degree_one_csv():
    code, out, _ = cli("oracle", "verify", "--gens", "2", "--degree", "1", "--csv")
    assert code == 0
    assert out.splitlines()[1] == "2,1,2,2,true,true,true"


def test_oracle_verify_cap():
    assert cli("oracle", "verify", "--gens", "2", "--degree", "30")[0] == 3


def test_oracle_cap_from_environment(monkeypatch):
    monkeypatch.setenv("LYHALL_MAX_AMBIENT", "5")
    assert cli("oracle", "verify", "--gens", "2", "--degree", "3")[0] == 3


def test_oracle_verify_json():
    data = json.loads(cli("oracle", "verify", "--gens", "3", "--degree", "2", "--format", "json")[1])
    assert data["schema"] == 1 and data["pass"] and data["expected"] == data["got"] == 3


# -- model ---------------------------------------------------------------------


def test_model_check_shipped():
    code, out, _ = cli("model", "check", "so3_sym")
    assert code == 0
    assert [line.split() for line in out.splitlines()[1:]] == [[f"LY{i}", "pass"] for i in range(1, 7)]


def test_model_eval():
    code, out, _ = cli("model", "eval", "so3_sym", "--map", "a=L1,b=L2", "[a,b,a]")
    assert code == 0 and out.strip() == "L2"
    code, out, _ = cli("model", "eval", "so3_center.json", "--map", "a=L1,b=L2", "a*b")
    assert code == 0 and out.strip() == "-c"


def test_model_eval_unmapped_generator():
    assert cli("model", "eval", "so3_sym", "--gens", "a,b", "--map", "a=L1", "a*b")[0] == 6
    # without --gens the generators are the mapped names, so b is unknown
    assert cli("model", "eval", "so3_sym", "--map", "a=L1", "a*b")[0] == 2


def test_model_check_broken_jacobi(tmp_path):
    bad = {"basis": ["X", "Y", "Z"], "brackets": {"X,Y": {"X": "1"}, "Y,Z": {"Y": "1"}}, "h": [], "m": ["X", "Y", "Z"]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(bad))
    code, out, err = cli("model", "check", str(p))
    assert code == 6 and "X" in err and "Jacobi" in err


def test_model_check_non_reductive_split(tmp_path):
    # [h,h] leaves h here, so the splitting is rejected before any axiom check
    bad = {
        "basis": ["L1", "L2", "L3"],
        "brackets": {"L1,L2": {"L3": "1"}, "L2,L3": {"L1": "1"}, "L1,L3": {"L2": "-1"}},
        "h": ["L1", "L2"],
        "m": ["L3"],
    }
    p = tmp_path / "nonred.json"
    p.write_text(json.dumps(bad))
    assert cli("model", "check", str(p))[0] == 6


def test_missing_model_file():
    code, _, err = cli("model", "check", "no_such_model.json")
    assert code == 2 and "no_such_model" in err


# -- process level -------------------------------------------------------------


def test_determinism_and_module_entry_point():
    argv = [sys.executable, "-m", "lyhall", "basis", "--gens", "a,b", "--max-degree", "4", "--list"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"degree 1: a, b\n")
