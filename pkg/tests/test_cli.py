"""Command line verbs, exit codes and output formats"""

import json
from pathlib import Path
from typing import Any, Dict, List

import pytest

from pirbounds import __version__
from pirbounds.cli import EXIT_FAILURE, EXIT_INPUT, EXIT_OK, EXIT_SOLVER, main


def run_json(capsys: pytest.CaptureFixture[str], argv: List[str]) -> Dict[str, Any]:
    """Run with --format json and return the parsed document"""
    assert main(["--format", "json"] + argv) == EXIT_OK
    document: Dict[str, Any] = json.loads(capsys.readouterr().out)
    return document


def results(document: Dict[str, Any]) -> Dict[str, Any]:
    """Result values by name, the last one wins"""
    return {entry["name"]: entry["value"] for entry in document["results"]}


def test_version(capsys: pytest.CaptureFixture[str]) -> None:
    """--version prints and exits cleanly"""
    assert main(["--version"]) == EXIT_OK
    assert __version__ in capsys.readouterr().out


def test_capacity(capsys: pytest.CaptureFixture[str]) -> None:
    """Capacity at N = K = 2 is 3/4"""
    document = run_json(capsys, ["bound", "--theorem", "capacity", "--n", "2", "--k", "2"])
    assert document["command"] == "bound"
    assert document["version"] == __version__
    assert results(document)["capacity_beta"] == {"exact": "3/4", "decimal": "0.75"}


def test_theorem1_min_beta(capsys: pytest.CaptureFixture[str]) -> None:
    """At minimum storage the download is pinned by the line"""
    values = results(run_json(capsys, ["bound", "--theorem", "1", "--n", "3", "--k", "4", "--alpha", "4/3"]))
    assert values["line"] == "2·α + 1·β ≥ 4"
    assert values["beta_lower"]["exact"] == "4/3"
    assert values["binding"] == "theorem1"


def test_theorem3_storage_at_capacity(capsys: pytest.CaptureFixture[str]) -> None:
    """N = K = 2 is the default for the two-by-two line"""
    values = results(run_json(capsys, ["bound", "--theorem", "3", "--beta", "3/4"]))
    assert values["c_alpha"]["exact"] == "3"
    assert values["c_beta"]["exact"] == "8"
    assert values["alpha_lower"]["exact"] == "4/3"
    assert values["binding"] == "theorem3"


def test_theorem2_spot_value(capsys: pytest.CaptureFixture[str]) -> None:
    """Storage at capacity for N = 6, K = 10"""
    document = run_json(
        capsys, ["bound", "--theorem", "2", "--n", "6", "--k", "10", "--beta", "12093235/60466176"]
    )
    assert results(document)["alpha_lower"]["exact"] == "544195585/60466176"


@pytest.mark.parametrize(
    "argv",
    [
        ["bound", "--theorem", "2", "--n", "2", "--k", "2"],
        ["bound", "--theorem", "1", "--n", "2"],
        ["bound", "--theorem", "1", "--n", "2", "--k", "2", "--alpha", "1/2"],
        ["bound", "--theorem", "1", "--n", "2", "--k", "2", "--alpha", "0.5"],
        ["bound", "--theorem", "4", "--n", "2", "--k", "2"],
        ["curve", "--n", "1", "--k", "2"],
        ["scheme", "--scheme", "download-all", "--n", "3", "--k", "2"],
        ["scheme", "--scheme", "xor2", "--n", "3", "--k", "2"],
        ["lp", "--model", "base", "--objective", "1"],
        ["lp", "--model", "base", "--objective", "0,0"],
    ],
)
def test_input_errors(argv: List[str], capsys: pytest.CaptureFixture[str]) -> None:
    """Bad parameters and unparseable flags exit with 2"""
    assert main(argv) == EXIT_INPUT
    assert capsys.readouterr().err


def test_curve_csv(capsys: pytest.CaptureFixture[str]) -> None:
    """Header, then one exact row per sample from capacity to minimum storage"""
    assert main(["curve", "--n", "6", "--k", "10", "--samples", "11"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "beta,alpha_lower"
    assert len(lines) == 12
    assert lines[-1] == "5/3,5/3"


def test_curve_to_file(tmp_path: Path) -> None:
    """--out writes the document instead of printing it"""
    target = tmp_path / "curve.json"
    assert main(["--format", "json", "--out", str(target), "curve", "--n", "2", "--k", "2", "--samples", "3"]) == 0
    document: Dict[str, Any] = json.loads(target.read_text(encoding="utf-8"))
    assert len(document["points"]) == 3


def test_json_is_deterministic(capsys: pytest.CaptureFixture[str]) -> None:
    """Apart from timing, identical inputs give identical documents"""
    argv = ["bound", "--theorem", "2", "--n", "4", "--k", "3", "--alpha", "2"]
    first = run_json(capsys, argv)
    second = run_json(capsys, argv)
    first.pop("timing")
    second.pop("timing")
    assert first == second


def test_theorem2_floored_at_minimum_storage(capsys: pytest.CaptureFixture[str]) -> None:
    """Past the point where the line dips under K/N, storage is what binds"""
    values = results(run_json(capsys, ["bound", "--theorem", "2", "--n", "4", "--k", "3", "--beta", "2/5"]))
    assert values["alpha_lower"]["exact"] == "3/4"
    assert values["binding"] == "storage"
    values = results(run_json(capsys, ["bound", "--theorem", "2", "--n", "4", "--k", "3", "--beta", "21/64"]))
    assert values["alpha_lower"]["exact"] == "129/64"
    assert values["binding"] == "theorem2"


def test_solver_failure_exit_code(capsys: pytest.CaptureFixture[str]) -> None:
    """An infeasible extra row is a solver outcome, exit 3"""
    assert main(["lp", "--model", "base", "--objective", "1,1", "--extra", "alpha<=1/2"]) == EXIT_SOLVER
    assert capsys.readouterr().err.startswith("error: ")


@pytest.mark.parametrize(
    "argv",
    [
        ["--format", "csv", "bound", "--theorem", "1", "--n", "3", "--k", "4", "--alpha", "3/2"],
        ["--format", "csv", "bound", "--theorem", "2", "--n", "6", "--k", "10", "--beta", "1/5"],
        ["--format", "csv", "bound", "--theorem", "3", "--beta", "3/4"],
        ["curve", "--n", "3", "--k", "3", "--samples", "7"],
        ["--format", "csv", "scheme", "--scheme", "xor2", "--k", "2"],
        ["--format", "csv", "lp", "--model", "base", "--objective", "3,8"],
    ],
)
def test_reports_are_byte_identical(argv: List[str], capsys: pytest.CaptureFixture[str]) -> None:
    """Reports without timing come out byte for byte the same on a second run"""
    assert main(argv) == EXIT_OK
    first = capsys.readouterr().out
    assert main(argv) == EXIT_OK
    assert capsys.readouterr().out == first
    assert first


@pytest.mark.slow
def test_lp_pseudo_model(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """The pseudo-message model certifies 3·α + 8·β >= 10 from the command line"""
    cert = tmp_path / "cert.json"
    model = tmp_path / "model.json"
    values = results(
        run_json(
            capsys,
            [
                "lp",
                "--model",
                "pseudo",
                "--objective",
                "3,8",
                "--model-out",
                str(model),
                "--certificate-out",
                str(cert),
            ],
        )
    )
    assert values["variables"]["exact"] == "11"
    assert values["certified_bound"]["exact"] == "10"
    assert values["certificate_verified"] is True
    assert "stronger_than_theorem1" not in values
    values = results(run_json(capsys, ["cert-verify", "--model", str(model), "--certificate", str(cert)]))
    assert values["verified"] is True
    assert values["certified_bound"]["exact"] == "10"


def test_csv_report(capsys: pytest.CaptureFixture[str]) -> None:
    """name,exact,decimal with exact rationals"""
    assert main(["--format", "csv", "bound", "--theorem", "capacity", "--n", "3", "--k", "2"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines == ["name,exact,decimal", "capacity_beta,4/9,0.444444444444"]


def test_scheme_verbs(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """A built-in scheme passes, is written out and passes again when read back"""
    target = tmp_path / "xor2.json"
    values = results(run_json(capsys, ["scheme", "--scheme", "xor2", "--k", "2", "--scheme-out", str(target)]))
    assert values["correct"] is True
    assert values["private"] is True
    assert values["alpha"]["exact"] == "2"
    assert values["beta"]["exact"] == "1"
    assert values["theorem3"] == "3·α + 8·β ≥ 10: satisfied"
    assert target.exists()
    values = results(run_json(capsys, ["scheme", "--scheme", "file", "--file", str(target)]))
    assert values["correct"] is True
    assert values["scheme"] == "xor2"


def test_lp_and_certificate(capsys: pytest.CaptureFixture[str], tmp_path: Path) -> None:
    """lp writes a model and certificate that cert-verify accepts; a raised bound is rejected"""
    model = tmp_path / "model.json"
    cert = tmp_path / "cert.json"
    values = results(
        run_json(
            capsys,
            ["lp", "--model", "base", "--objective", "1,1", "--model-out", str(model), "--certificate-out", str(cert)],
        )
    )
    assert values["certified_bound"]["exact"] == "2"
    assert values["certificate_verified"] is True
    assert values["stronger_than_theorem1"] is False

    values = results(run_json(capsys, ["cert-verify", "--model", str(model), "--certificate", str(cert)]))
    assert values["verified"] is True
    assert values["certified_bound"]["exact"] == "2"

    document = json.loads(cert.read_text(encoding="utf-8"))
    document["certified_bound"] = {"p": 3, "q": 1}
    cert.write_text(json.dumps(document), encoding="utf-8")
    assert main(["cert-verify", "--model", str(model), "--certificate", str(cert)]) == EXIT_FAILURE

    document["certified_bound"] = {"p": 2, "q": 1}
    document["weights"].append({"tag": "bogus:row", "p": 1, "q": 1})
    cert.write_text(json.dumps(document), encoding="utf-8")
    assert main(["cert-verify", "--model", str(model), "--certificate", str(cert)]) == EXIT_INPUT


def test_missing_document(tmp_path: Path) -> None:
    """Unreadable documents are input errors"""
    missing = str(tmp_path / "nope.json")
    assert main(["cert-verify", "--model", missing, "--certificate", missing]) == EXIT_INPUT
