from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest
from jsonschema import Draft202012Validator

from hypercf.automata import required_prefix
from hypercf.cli import EXIT_INVALID, EXIT_OK, EXIT_STRICT, main
from hypercf.substitution import w_prefix
from tests.conftest import load_schema

FAMILY_ARGS = ["family", "--p", "3", "--r", "3", "--family", "F3", "--l", "1", "--A", "T",
               "--eps1", "2", "--eps2", "2", "--n", "9"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    return code, json.loads(out), err


def validate(data, registry, name=None):
    schema = load_schema(f"{name or data['command']}.json")
    Draft202012Validator(schema, registry=registry).validate(data)


@pytest.fixture
def const_seq(tmp_path):
    path = tmp_path / "const.seq"
    path.write_text(",".join(["1"] * 30000) + "\n")
    return path


@pytest.fixture
def w_seq(tmp_path):
    path = tmp_path / "w.seq"
    path.write_text(",".join(str(x) for x in w_prefix(required_prefix(2, 8, 64))) + "\n")
    return path


@pytest.fixture
def spec_file(tmp_path):
    path = tmp_path / "f2.spec"
    path.write_text(json.dumps({"p": 5, "r": 5, "family": "F2", "l": 2, "A": ["T", "2*T^2+T"], "eps1": "3", "eps2": "1"}))
    return path


# -- examples ------------------------------------------------------------------------------------------


def test_family_example(capsys, schema_registry):
    code, data, _ = run_json(capsys, *FAMILY_ARGS)
    assert code == EXIT_OK
    assert data["u"] == ["1", "2", "2", "2", "1", "1", "2", "2", "1"]
    assert data["bootstrap"] == {"agrees": True, "certified": 9}
    validate(data, schema_registry)


def test_quartic_example(capsys, schema_registry):
    code, data, _ = run_json(capsys, "quartic", "--n", "168")
    assert code == EXIT_OK
    assert data["certified"] >= 168 and data["matches_w"] and data["matches_omega"]
    assert data["ratio"]["fraction"] == "3362/5740" and data["ratio"]["within_1e-3"]
    assert abs(data["estimate"]["value"] - 2) <= 0.05
    validate(data, schema_registry)


def test_kernel_example(capsys, const_seq, schema_registry):
    code, data, _ = run_json(capsys, "kernel", "--input", str(const_seq), "--k", "2", "--depth", "8", "--dfao")
    assert code == EXIT_OK
    assert data["closed"] and data["class_count"] == 1
    assert data["dfao_mismatches"] == 0 and len(data["dfao"]["states"]) == 1
    validate(data, schema_registry)


def test_expand_from_spec(capsys, spec_file, schema_registry):
    code, data, _ = run_json(capsys, "expand", "--spec", str(spec_file), "--n", "120")
    assert code == EXIT_OK
    assert data["certified"] == 120 and data["closed_form_agrees"]
    assert data["residual"]["certified"]
    validate(data, schema_registry)


@pytest.mark.parametrize("which,check", [("1", "degrees_match"), ("2", "paperfold_agrees")])
def test_theta(capsys, which, check, schema_registry):
    code, data, _ = run_json(capsys, "theta", "--which", which, "--n", "40")
    assert code == EXIT_OK and data[check]
    validate(data, schema_registry)


@pytest.mark.parametrize("source", ["rational", "quadratic", "theta2"])
def test_christol(capsys, source, schema_registry):
    code, data, _ = run_json(capsys, "christol", "--source", source, "--depth", "4", "--dfao")
    assert code == EXIT_OK
    assert data["kernel"]["closed"] and data["kernel"]["dfao_mismatches"] == 0
    validate(data, schema_registry)


def test_report_counterexample(capsys, schema_registry):
    code, data, _ = run_json(capsys, "report", "--kind", "counterexample", "--depths", "8-9")
    assert code == EXIT_OK
    assert data["ln"][10] == 5740 and data["mn"][10] == 3362
    assert [r["closed"] for r in data["kernel_growth"]] == [False, False]
    assert data["perron"]["char_poly"] == [1, -3, 1, 1]
    validate(data, schema_registry)


def test_report_sweep(capsys, schema_registry):
    code, data, _ = run_json(capsys, "report", "--kind", "sweep", "--count", "3", "--n", "60", "--seed", "5")
    assert code == EXIT_OK
    assert all(r["agree"] and r["certified"] for r in data["results"])
    validate(data, schema_registry)


# -- exit codes and strict mode -----------------------------------------------------------------------


def test_strict_flips_exit_code_only(capsys, w_seq):
    args = ["kernel", "--input", str(w_seq), "--depth", "8", "--json"]
    code, out, _ = run(capsys, *args)
    strict_code, strict_out, _ = run(capsys, *args, "--strict")
    assert code == EXIT_OK and strict_code == EXIT_STRICT
    assert out == strict_out
    assert json.loads(out)["issues"]


def test_precision_exhausted_is_strict_failure(capsys, tmp_path):
    path = tmp_path / "short.ser"
    path.write_text("p=3\ntop=1 prec=-6\n1,0,1,0,0,0,0\n")
    code, data, _ = run_json(capsys, "expand", "--input", str(path), "--n", "10", "--strict")
    assert code == EXIT_STRICT and data["certified"] < 10


@pytest.mark.parametrize(
    "argv,needle",
    [
        (["family", "--p", "3", "--r", "2", "--family", "F1", "--A", "T", "--eps", "1"], "power"),
        (["family", "--p", "3", "--r", "3", "--family", "F1", "--A", "2**T", "--eps", "1"], "column 2"),
        (["kernel", "--input", "/nonexistent.seq"], "error"),
        (["frobnicate"], "invalid choice"),
        (["family", "--p", "3", "--r", "3", "--family", "F1", "--A", "T", "--eps", "1", "--n", "0"], "n"),
    ],
)
def test_invalid_input_exits_one(capsys, argv, needle):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == EXIT_INVALID
    assert needle in capsys.readouterr().err


def test_short_prefix_is_invalid(capsys, tmp_path):
    path = tmp_path / "short.seq"
    path.write_text("1,2,1,2\n")
    code, _, err = run(capsys, "kernel", "--input", str(path), "--depth", "8")
    assert code == EXIT_INVALID and "too short" in err


# -- determinism and output forms ------------------------------------------------------------------------


def test_outputs_are_byte_identical(capsys):
    first = run(capsys, *FAMILY_ARGS, "--json")[1]
    second = run(capsys, *FAMILY_ARGS, "--json")[1]
    assert first == second and first.endswith("\n")
    sweep = ["report", "--kind", "sweep", "--count", "2", "--n", "40", "--json"]
    assert run(capsys, *sweep)[1] == run(capsys, *sweep)[1]


def test_text_output(capsys):
    code, out, _ = run(capsys, *FAMILY_ARGS)
    assert code == EXIT_OK
    assert "command: family" in out and out.endswith("\n")


def test_module_and_console_script():
    res = subprocess.run([sys.executable, "-m", "hypercf", "theta", "--which", "1", "--n", "5", "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["degrees"] == [1, 3, 9, 27, 81]
    exe = shutil.which("hypercf")
    if exe is None:
        pytest.skip("console script not on PATH")
    res2 = subprocess.run([exe, "theta", "--which", "1", "--n", "5", "--json"], capture_output=True, text=True, check=True)
    assert res2.stdout == res.stdout


# -- file-format schemas ------------------------------------------------------------------------------------


def test_file_format_schemas_accept_examples(schema_registry):
    from hypercf.automata import dfao_from_kernel, kernel_enumerate
    from hypercf.contfrac import cf_report, parse_cf
    from hypercf.algebra import FieldCtx

    cf = parse_cf("[0, T, 2*T]", FieldCtx(3))
    validate(cf_report(cf), schema_registry, "cf")
    v = [n % 2 for n in range(1, required_prefix(2, 4, 64) + 1)]
    rep = kernel_enumerate(v, 2, 4)
    validate(rep.to_json(), schema_registry, "kernel_report")
    validate(dfao_from_kernel(rep, v).to_json(), schema_registry, "dfao")
    validate({"p": 3, "r": 3, "family": "F1", "A": ["T"], "eps": "1"}, schema_registry, "spec")
    validate({"alphabet": ["a"], "images": {"a": "aa"}, "output": {"a": 1}}, schema_registry, "morph")
