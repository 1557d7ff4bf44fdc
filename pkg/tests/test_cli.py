import json
import math
from pathlib import Path

import pytest

from optheory.cli import main
from optheory.theory_io import load_theory

GOLDEN = Path(__file__).resolve().parent.parent / "golden"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    return code, json.loads(out)


def without_timings(text):
    d = json.loads(text)
    d.pop("timings")
    return json.dumps(d, indent=2)


def close(a, b, tol=1e-9):
    if isinstance(a, dict):
        return a.keys() == b.keys() and all(close(a[k], b[k], tol) for k in a)
    if isinstance(a, list):
        return len(a) == len(b) and all(close(x, y, tol) for x, y in zip(a, b))
    if isinstance(a, float) or isinstance(b, float):
        return a is not None and b is not None and math.isclose(a, b, rel_tol=tol, abs_tol=tol)
    return a == b


@pytest.mark.parametrize("model", ["qubit", "classical2"])
def test_validate_passes(capsys, model):
    code, rep = report(capsys, "validate", "--model", model)
    assert code == 0
    assert rep["schema"] == 1 and rep["command"] == "validate" and rep["theory"] == model
    assert rep["summary"]["passed"] is True


def test_text_output(capsys):
    code, out, _ = run(capsys, "faithful", "--model", "qubit")
    assert code == 0
    assert "PASS" in out or "pass" in out


def test_gns_classical_eigenvalues(capsys):
    code, rep = report(capsys, "gns", "--model", "classical2")
    assert code == 0
    assert sorted(rep["data"]["form_eigenvalues"]) == pytest.approx([0.5, 0.5])
    assert rep["data"]["dim_H"] == 2


def test_informational_checks_do_not_fail(capsys):
    code, rep = report(capsys, "gns", "--model", "qubit")
    assert code == 0
    info = {c["name"]: c for c in rep["checks"] if c["category"] == "informational"}
    assert "quotient-dimension-vs-effect-dimension" in info
    assert "effect-class-representative-independence" in info
    assert info["effect-class-representative-independence"]["residual"] > 0


def test_malformed_theory_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "validate", "--theory", str(bad))
    assert code == 2 and err.startswith("error:")
    schema_bad = tmp_path / "schema.json"
    schema_bad.write_text(json.dumps({"name": "x"}))
    code, _, err = run(capsys, "validate", "--theory", str(schema_bad))
    assert code == 2 and "error" in err


def test_missing_source_and_unknown_model_exit_2(capsys):
    assert run(capsys, "validate")[0] == 2
    assert run(capsys, "validate", "--model", "qutrit")[0] == 2
    assert run(capsys, "transpose", "--model", "qubit", "--transformation", "nope")[0] == 2


def test_argparse_errors_exit_2(capsys):
    assert run(capsys, "frobnicate")[0] == 2


def test_non_faithful_theory_fails_with_precondition(tmp_path, capsys):
    theory = json.loads((GOLDEN / "classical2.json").read_text())
    theory["faithful_state"] = {"matrix": [[0.25, 0.25], [0.25, 0.25]]}
    path = tmp_path / "product.json"
    path.write_text(json.dumps(theory))
    code, rep = report(capsys, "gns", "--theory", str(path))
    assert code == 1
    assert rep["checks"][0]["name"] == "precondition"


@pytest.mark.parametrize(
    "argv",
    [
        ("validate", "--model", "qubit", "--samples", "20", "--seed", "3"),
        ("cstar", "--model", "qubit", "--samples", "10", "--seed", "3"),
        ("born", "--model", "qubit", "--trials", "5", "--seed", "3"),
        ("calibrate", "--model", "qubit", "--transformation", "rx", "--shots", "10000", "--samples", "5"),
    ],
)
def test_reports_are_byte_identical(capsys, argv):
    first = run(capsys, *argv, "--format", "json")[1]
    second = run(capsys, *argv, "--format", "json")[1]
    assert without_timings(first) == without_timings(second)


@pytest.mark.parametrize("model", ["classical2", "qubit"])
def test_export_theory_matches_golden(capsys, model):
    code, out, _ = run(capsys, "export-theory", model)
    assert code == 0
    assert out == (GOLDEN / f"{model}.json").read_text()


@pytest.mark.parametrize("model", ["classical2", "qubit"])
def test_gns_report_matches_golden(capsys, model):
    _, rep = report(capsys, "gns", "--model", model)
    rep.pop("timings")
    golden = json.loads((GOLDEN / f"gns_{model}.json").read_text())
    assert close(rep, golden)


def test_theory_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "qubit.json"
    assert run(capsys, "export-theory", "qubit", "--out", str(path))[0] == 0
    th = load_theory(path)
    assert th.name == "qubit" and th.effect_dim == 4
    code, rep = report(capsys, "validate", "--theory", str(path), "--samples", "10")
    assert code == 0


def test_calibrate_outputs(tmp_path, capsys):
    counts, est = tmp_path / "counts.csv", tmp_path / "estimate.json"
    code, rep = report(
        capsys, "calibrate", "--model", "qubit", "--transformation", "rx",
        "--counts", str(counts), "--estimate", str(est), "--max-error", "0.01",
    )
    assert code == 0
    assert counts.read_text().startswith("i,j,count\n")
    assert len(json.loads(est.read_text())["matrix"]) == 4
    assert rep["data"]["errors"]["frobenius"] < 0.01


def test_max_error_turns_error_into_a_claim(capsys):
    code, rep = report(
        capsys, "calibrate", "--model", "qubit", "--transformation", "rx", "--shots", "100", "--max-error", "1e-4"
    )
    assert code == 1
    assert rep["summary"]["claim_failures"] == ["estimation-error"]


def test_out_flag_writes_file(tmp_path, capsys):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "transpose", "--model", "qubit", "--transformation", "ry", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text())["command"] == "transpose"
