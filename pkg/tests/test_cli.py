"""Command surface: exit codes, JSON output and artifacts."""

import json

import pandas as pd
import pytest

from src.cli import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main
from src.kmatrix import KMatrix
from src.potentials import save_potential, vacuum_potential


def run(*argv):
    return main(list(argv), configure_logging=False)


def test_suite_list(capsys):
    assert run("suite", "run", "--list") == EXIT_PASS
    out = capsys.readouterr().out
    assert "kmat.transpose_conjugation_adjugate" in out
    assert "dress.complementary" in out


def test_kmat_inspect(tmp_path):
    out = tmp_path / "k.json"
    assert run("kmat", "inspect", "--A", "0", "--B", "0.75", "--json", str(out)) == EXIT_PASS
    data = json.loads(out.read_text())
    assert data["B"] == 0.75
    assert len(data["residues"]) == 4
    assert len(data["kernels"]) == 2


def test_kmat_inspect_product(tmp_path):
    out = tmp_path / "k.json"
    argv = ["kmat", "inspect", "--A", "0.5", "--B", "0.25", "--A1", "-0.3", "--B1", "0.15", "--json", str(out)]
    assert run(*argv) == EXIT_PASS
    assert json.loads(out.read_text())["product"]["reconstruction_residual"] < 1e-10


def test_kmat_inspect_sign_condition_fails():
    assert run("kmat", "inspect", "--A", "1", "--B", "1", "--A1", "1", "--B1", "1") == EXIT_FAIL


def test_kmat_inspect_degenerate_omits_kernels(tmp_path):
    out = tmp_path / "k.json"
    assert run("kmat", "inspect", "--A", "0.5", "--B", "-0.5", "--json", str(out)) == EXIT_PASS
    data = json.loads(out.read_text())
    assert "kernels" not in data


def test_potential_dim(tmp_path):
    out = tmp_path / "dim.json"
    assert run("potential", "dim", "--degree", "3", "--A", "1/3", "--B", "1/2", "--json", str(out)) == EXIT_PASS
    data = json.loads(out.read_text())
    assert data["dimension"] == 5
    assert data["freedom_split"] == [1, 4]


def test_sample_verify_and_genus(tmp_path):
    xi_path = tmp_path / "xi.json"
    argv = ["potential", "sample", "--degree", "2", "--A", "1/3", "--B", "1/2", "--seed", "3", "--out", str(xi_path)]
    assert run(*argv) == EXIT_PASS
    assert json.loads(xi_path.read_text())["meta"]["seed"] == 3
    assert run("potential", "verify", str(xi_path)) == EXIT_PASS
    assert run("potential", "verify", str(xi_path), "--A", "1", "--B", "1") == EXIT_FAIL
    assert run("spectral", "genus", str(xi_path), "--float") == EXIT_PASS


def test_offdiag_sample_has_genus_one(tmp_path):
    xi_path, out = tmp_path / "xi.json", tmp_path / "genus.json"
    assert run("potential", "sample", "--degree", "3", "--A", "1/2", "--B", "1/4", "--offdiag",
               "--out", str(xi_path)) == EXIT_PASS
    assert run("spectral", "genus", str(xi_path), "--exact", "--json", str(out)) == EXIT_PASS
    assert json.loads(out.read_text())["genus"] == 1


def test_verify_needs_constants(tmp_path):
    xi_path = tmp_path / "xi.json"
    xi_path.write_text(json.dumps({"degree": 1, "alpha": [[0, 0]], "beta": [[0, 0.25], [0, 0.25]]}))
    assert run("potential", "verify", str(xi_path)) == EXIT_USAGE


def test_missing_file_is_usage_error(tmp_path):
    assert run("spectral", "genus", str(tmp_path / "absent.json")) == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    ["nonsense"],
    ["kmat", "inspect", "--A", "abc", "--B", "1"],
    ["kmat", "inspect", "--A", "1"],
])
def test_parse_errors(argv):
    assert run(*argv) == EXIT_USAGE


def test_missing_config_file(tmp_path):
    assert run("suite", "run", "--list", "--config", str(tmp_path / "absent.json")) == EXIT_USAGE


def test_invalid_tolerance_file(tmp_path):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"structural": 0}))
    assert run("potential", "dim", "--degree", "1", "--A", "1/3", "--B", "1/2", "--tol-file", str(tol)) == EXIT_USAGE


def test_help_lists_exit_codes(capsys):
    assert run("--help") == EXIT_PASS
    out = capsys.readouterr().out
    assert "exit codes:" in out
    assert "0 is rejected" in out


@pytest.mark.parametrize("value", [0, -1e-9])
def test_non_positive_tolerance_is_usage_error(tmp_path, value):
    tol = tmp_path / "tol.json"
    tol.write_text(json.dumps({"commutant": value}))
    assert run("kmat", "inspect", "--A", "0", "--B", "0.75", "--tol-file", str(tol)) == EXIT_USAGE


def test_suite_subset(tmp_path):
    report = tmp_path / "report.json"
    argv = ["suite", "run", "--profile", "quick", "--only", "kmat.transpose", "--report", str(report), "--no-store"]
    assert run(*argv) == EXIT_PASS
    data = json.loads(report.read_text())
    assert data["passed"] and data["n_tests"] == 1
    assert data["metadata"]["profile"] == "quick"


def test_sweep_offdiag(tmp_path):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "run", "--mode", "offdiag", "--degrees", "1", "--out", str(out), "--no-store"]
    assert run(*argv) == EXIT_PASS
    table = pd.read_csv(out)
    assert len(table) == 4
    assert (table["genus"] == 1).all()


SMALL_SURFACE = ["--grid", "5x5", "--domain=-0.5,0.5,-0.5,0.5", "--modes", "16"]


@pytest.fixture
def vacuum_path(tmp_path):
    return str(save_potential(tmp_path / "vacuum.json", vacuum_potential(), KMatrix(0.25, -0.25)))


def test_surface_generate_with_explicit_paths(tmp_path, vacuum_path):
    obj, report, omega = tmp_path / "surf.obj", tmp_path / "rep.json", tmp_path / "omega.csv"
    argv = ["surface", "generate", vacuum_path, *SMALL_SURFACE, "--H", "0.5", "--sym-point", "1.0",
            "--out", str(obj), "--report", str(report), "--omega", str(omega)]
    assert run(*argv) == EXIT_PASS
    assert obj.read_text().count("\nv ") == 25
    table = pd.read_csv(omega)
    assert list(table.columns) == ["x", "y", "omega"]
    assert len(table) == 25
    data = json.loads(report.read_text())
    assert data["passed"]
    assert data["grid"]["nx"] == 5 and data["grid"]["truncation"] == 16
    assert data["grid"]["x_range"] == [-0.5, 0.5]
    assert data["sym_point"] == [1.0, 0.0]
    assert data["checks"]["sinh_gordon"]


def test_surface_generate_into_directory(tmp_path, vacuum_path):
    out = tmp_path / "artifacts"
    assert run("surface", "generate", vacuum_path, *SMALL_SURFACE, "--out", str(out)) == EXIT_PASS
    assert sorted(p.name for p in out.iterdir()) == ["vacuum.obj", "vacuum_omega.csv", "vacuum_report.json"]


@pytest.mark.parametrize("extra", [
    ["--grid", "5by5"],
    ["--domain=-1,1,-1"],
    ["--H", "0"],
])
def test_surface_generate_bad_settings(tmp_path, vacuum_path, extra):
    assert run("surface", "generate", vacuum_path, "--out", str(tmp_path), *extra) == EXIT_USAGE


def test_surface_verify_second_boundary(tmp_path, vacuum_path):
    out = tmp_path / "verify.json"
    argv = ["surface", "verify", vacuum_path, *SMALL_SURFACE,
            "--A1", "-0.25", "--B1", "0.25", "--y1", "0", "--json", str(out)]
    assert run(*argv) == EXIT_PASS
    data = json.loads(out.read_text())
    assert data["checks"]["dressed_sym"] and data["checks"]["dressing"]
    assert data["residuals"]["dressed_phi_sym"] < 1e-7


def test_surface_verify_second_boundary_needs_all_flags(vacuum_path):
    assert run("surface", "verify", vacuum_path, *SMALL_SURFACE, "--A1", "-0.25", "--B1", "0.25") == EXIT_USAGE
