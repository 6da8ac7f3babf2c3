"""Smoke tests for the Python module and the JSON produced by the CLI."""

import json
import math
import os
import pathlib
import subprocess

import jsonschema
import pytest

import frobenius as fb

SOURCE = pathlib.Path(os.environ.get("FROBENIUS_SOURCE_DIR", pathlib.Path(__file__).resolve().parents[2]))
SCHEMAS = SOURCE / "schemas"
MODELS = SOURCE / "data" / "models"
CLI = os.environ.get("FROBENIUS_CLI", "")


def schema(name):
    return json.loads((SCHEMAS / f"{name}.schema.json").read_text())


def test_exact_spectrum():
    assert fb.exact_eigenvalue(0, 0.5) == 3.0
    assert fb.exact_eigenvalue(2, 0.0) == 10.0
    assert fb.exact_eigenvalue_rational(1, "1/3") == "20/3"
    state = fb.exact_state(1, 0.5)
    assert state.step == 2
    assert fb.ode_residual(state, fb.RadialProblem(0.5)) <= 1e-10
    with pytest.raises(fb.ArgumentError):
        fb.exact_eigenvalue(-1, 0.5)


def test_conditional_family():
    assert fb.admissible_a(1, 0.5, 0.0) == pytest.approx([2.0, -2.0], abs=1e-14)
    assert fb.coefficient_polynomial(1, "1/2", "0") == ["-1/3", "0", "1/12"]
    family = fb.conditional_family(3, 1.0, 0.5)
    assert len(family.roots) == 4
    assert family.W == fb.termination_energy(3, 1.0, 0.5)
    for i, sol in enumerate(family.solutions):
        assert fb.ode_residual(sol, family.problem(i)) <= 1e-10
    assert fb.closed_form_check_n01(0.5, 1.0)["passed"]


def test_oracle_and_hft():
    est = fb.solve_spectrum(fb.RadialProblem(0.5), num_states=3)
    assert est.eigenvalues[0] == pytest.approx(3.0, abs=1e-6)
    assert est.node_counts == [0, 1, 2]
    state = est.state(0)
    assert sum(w * v * v for w, v in zip(state["weights"], state["values"])) == pytest.approx(1.0, abs=1e-10)
    assert est.expectation(0, "rho") == pytest.approx(2 / math.sqrt(math.pi), abs=1e-4)
    report = fb.hft_check(fb.RadialProblem(0.5, 1.0, 1.0), nu=0)
    assert report.valid and report.max_rel_error <= 1e-3
    check = fb.spectrum_vs_formula(fb.RadialProblem(0.5, 2.0, 0.0), 5.0)
    assert check.in_spectrum and check.nearest_index == 0


def test_refute_from_python():
    model = json.loads((MODELS / "pseudo_confined.json").read_text())
    jsonschema.validate(model, schema("model"))
    report = fb.refute(model)
    jsonschema.validate(report, schema("refutation"))
    assert report["verdicts"]["hft_violated"]
    assert report["mustafa_partials"]["b_t"] == 0.0
    assert report["gap"] > 0.01
    assert fb.canonical_form(model)["scale"] == 1.0
    with pytest.raises(fb.ArgumentError):
        fb.refute(json.loads((MODELS / "kg_oscillator.json").read_text()))
    with pytest.raises(fb.ArgumentError):
        fb.refute({"model": "unknown"})


def test_model_files_match_schema():
    for path in sorted(MODELS.glob("*.json")):
        jsonschema.validate(json.loads(path.read_text()), schema("model"))


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
def test_cli_outputs_match_schemas(tmp_path):
    def run(*args):
        subprocess.run([CLI, *args, "--out-dir", str(tmp_path)], check=True, capture_output=True)

    run("conditional", "--n", "2", "--gamma", "1/2", "--b", "1")
    run("oracle", "--gamma", "0", "--a", "1", "--hft")
    run("refute", str(MODELS / "confined_pdm.json"))
    run("exact", "--gamma", "1", "--nu-max", "1")
    run("sweep", "--gamma", "0", "--n-min", "0", "--n-max", "1", "--b-grid", "0,1")

    jsonschema.validate(json.loads((tmp_path / "conditional.json").read_text()), schema("conditional"))
    jsonschema.validate(json.loads((tmp_path / "hft.json").read_text()), schema("hft"))
    jsonschema.validate(json.loads((tmp_path / "refutation.json").read_text()), schema("refutation"))
    manifests = sorted(tmp_path.glob("*.manifest.json"))
    assert len(manifests) == 5
    for path in manifests:
        jsonschema.validate(json.loads(path.read_text()), schema("manifest"))


@pytest.mark.skipif(not CLI, reason="command-line tool not built")
def test_cli_numbers_match_module(tmp_path):
    subprocess.run([CLI, "conditional", "--n", "3", "--gamma", "0", "--b", "2", "--out-dir", str(tmp_path)],
                   check=True, capture_output=True)
    roots = json.loads((tmp_path / "conditional.json").read_text())["roots"]
    assert roots == fb.admissible_a(3, 0.0, 2.0)
