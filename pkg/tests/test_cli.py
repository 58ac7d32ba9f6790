"""End-to-end command-line behavior: output formats and exit codes."""

import json
import subprocess
import sys

import pytest

from orbichar.cli import main


@pytest.fixture
def run(capsys):
    def invoke(*argv):
        code = main(list(argv))
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return invoke


def test_chi_gamma_inline_json(run):
    code, out, _ = run(
        "chi",
        "--sig",
        '{"genus":0,"cones":[{"order":5,"count":"2"},{"order":10,"count":"1"}]}',
        "--gamma",
        "Z^2",
    )
    assert code == 0
    assert out.strip() == "19"


def test_chi_sugar_and_default_gamma(run):
    code, out, _ = run("chi", "--sig", "Sigma_0()", "--gamma", "Z^9")
    assert (code, out.strip()) == (0, "2")
    code, out, _ = run("chi", "--sig", "Sigma_1(2)", "--gamma", "trivial")
    assert (code, out.strip()) == (0, "-1/2")
    code, out, _ = run("chi", "--sig", "Sigma_1(2)")
    assert (code, out.strip()) == (0, "-1/2")


def test_chi_level_flag(run):
    code, out, _ = run("chi", "--sig", "Sigma_0(5,5,10)", "--l", "2")
    assert (code, out.strip()) == (0, "19")


def test_chi_sequence(run):
    code, out, _ = run("chi", "--sig", "Sigma_1(2)", "--seq-len", "3")
    assert code == 0
    assert out.strip() == "-1/2,0,1,3"


def test_chi_json_mode_round_trips(run):
    code, out, _ = run("chi", "--sig", "Sigma_0(5,5,10)", "--seq-len", "2", "--json")
    assert code == 0
    assert json.loads(out) == {"values": ["-1/2", "2", "19"]}


def test_chi_from_file(run, tmp_path):
    path = tmp_path / "sig.json"
    path.write_text(json.dumps({"genus": 2, "cones": [{"order": 3, "count": "2"}]}))
    code, out, _ = run("chi", "--sig", str(path))
    assert (code, out.strip()) == (0, "-10/3")


def test_chi_malformed_signature_exits_2(run):
    code, _, err = run("chi", "--sig", "Sigma_0(")
    assert code == 2
    assert err


def test_chi_unsupported_gamma_exits_3(run):
    code, _, err = run("chi", "--sig", "Sigma_0()", "--gamma", "E8")
    assert code == 3
    assert err


def test_construct_base_pair(run):
    code, out, _ = run("construct", "--L", "2", "--g", "0", "--orders", "2")
    assert code == 0
    payload = json.loads(out)
    cones = [
        sorted((entry["order"], int(entry["count"])) for entry in member["cones"])
        for member in payload["family"]
    ]
    assert cones == [[(5, 2), (10, 1)], [(4, 1), (8, 2)]]
    assert payload["verification"]["pairwise_distinct"] is True
    assert payload["verification"]["char_sequences"][0] == ["-1/2", "2", "19"]


def test_construct_family_of_four(run):
    code, out, _ = run("construct", "--L", "3", "--g", "0", "--orders", "2,3", "--N", "4")
    assert code == 0
    payload = json.loads(out)
    assert len(payload["family"]) == 4
    sequences = payload["verification"]["char_sequences"]
    assert all(seq == sequences[0] for seq in sequences)


def test_construct_nonzero_genus(run):
    code, out, _ = run("construct", "--L", "2", "--g", "5", "--orders", "7")
    assert code == 0
    payload = json.loads(out)
    assert all(member["genus"] == 5 for member in payload["family"])


def test_construct_bad_seed_count_exits_2(run):
    code, _, err = run("construct", "--L", "4", "--g", "0", "--orders", "2")
    assert code == 2
    assert err


def test_reconstruct_round_trip(run):
    code, out, _ = run("reconstruct", "--seq", "2,2,2,2")
    assert code == 0
    assert json.loads(out) == {"genus": 0, "cones": []}

    code, out, _ = run("reconstruct", "--seq=-1/2,2,19,149,1249,11249")
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "genus": 0,
        "cones": [{"order": 5, "count": "2"}, {"order": 10, "count": "1"}],
    }


def test_reconstruct_insufficient(run):
    code, out, _ = run("reconstruct", "--seq=-1/2,2,19")
    assert code == 0
    assert json.loads(out)["status"] == "insufficient-data"


def test_reconstruct_invalid_exits_2(run):
    code, _, err = run("reconstruct", "--seq", "2,3,4")
    assert code == 2
    assert "not a valid characteristic sequence" in err


def test_enumerate_streams_signatures(run):
    code, out, _ = run("enumerate", "--chi-es", "0")
    assert code == 0
    lines = [json.loads(line) for line in out.splitlines()]
    assert len(lines) == 5
    assert lines[-1] == {"genus": 1, "cones": []}


def test_enumerate_includes_example_pair(run):
    code, out, _ = run("enumerate", "--chi-es=-4")
    assert code == 0
    lines = out.splitlines()
    nine_threes = json.dumps(
        {"genus": 0, "cones": [{"order": 3, "count": "9"}]}, separators=(",", ":")
    )
    assert nine_threes in lines


def test_search_contains_base_pair_group(run):
    code, out, _ = run("search", "--g-max", "0", "--k-max", "3", "--m-max", "10", "--L", "2")
    assert code == 0
    groups = json.loads(out)
    assert any(group["values"] == ["-1/2", "2", "19"] for group in groups)


def test_quotient_builtin_group(run, tmp_path):
    fpc = tmp_path / "fpc.json"
    subgroups = [[0], [0, 3], [0, 2, 4], [0, 1, 2, 3, 4, 5]]
    fpc.write_text(json.dumps([{"subgroup": s, "chi": 2} for s in subgroups]))
    code, out, _ = run("quotient", "--group", "C6", "--fpc", str(fpc), "--gamma", "Z")
    assert (code, out.strip()) == (0, "2")


def test_quotient_group_from_file(run, tmp_path):
    group_file = tmp_path / "c2.json"
    group_file.write_text(json.dumps({"order": 2, "table": [[0, 1], [1, 0]]}))
    fpc = tmp_path / "fpc.json"
    fpc.write_text(json.dumps([{"subgroup": [0], "chi": 2}, {"subgroup": [0, 1], "chi": 2}]))
    code, out, _ = run("quotient", "--group", str(group_file), "--fpc", str(fpc), "--gamma", "Z")
    assert (code, out.strip()) == (0, "2")


def test_quotient_missing_fpc_entry_exits_2(run, tmp_path):
    fpc = tmp_path / "fpc.json"
    fpc.write_text(json.dumps([{"subgroup": [0], "chi": 2}]))
    code, _, err = run("quotient", "--group", "C6", "--fpc", str(fpc), "--gamma", "Z")
    assert code == 2
    assert err


@pytest.mark.parametrize(
    "example",
    ["sameESCsameg", "sameLESC", "basecase", "noneffective", "nonorientable", "generaldim"],
)
def test_verify_scenarios_pass(run, example):
    code, out, _ = run("verify-paper", example)
    assert code == 0
    assert "FAIL" not in out
    assert "PASS" in out


def test_outputs_are_deterministic(run):
    first = run("search", "--g-max", "1", "--k-max", "2", "--m-max", "6", "--L", "1")
    second = run("search", "--g-max", "1", "--k-max", "2", "--m-max", "6", "--L", "1")
    assert first == second


def test_console_entry_point():
    result = subprocess.run(
        [sys.executable, "-m", "orbichar.cli", "chi", "--sig", "Sigma_0(5,5,10)", "--l", "0"],
        capture_output=True,
        text=True,
        timeout=60,
    )
    assert result.returncode == 0
    assert result.stdout.strip() == "-1/2"
