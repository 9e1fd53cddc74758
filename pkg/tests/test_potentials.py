"""Potential assembly, K-symmetry residuals and the JSON file format."""

import json

import numpy as np
import pytest

from src.kmatrix import KMatrix
from src.potentials import (
    ksym_residual,
    load_potential,
    potential_assemble,
    save_potential,
    split_vector,
    unknown_layout,
    vacuum_potential,
)
from src.utils.errors import ConstraintError


def test_vacuum_blocks():
    xi = vacuum_potential()
    lam = 0.4 - 0.8j
    expected = 0.25j * np.array([[0, 1 / lam + 1], [1 + lam, 0]])
    assert np.allclose(xi.evaluate(lam), expected)
    assert np.allclose(xi.gamma, [0.25j, 0.25j])


def test_assemble_rejects_low_degree():
    with pytest.raises(ConstraintError, match="degree must be at least 1"):
        potential_assemble(0, [], [1j])


def test_assemble_checks_lengths():
    with pytest.raises(ConstraintError, match="needs 2 alpha"):
        potential_assemble(2, [0], [1j, 0, 0])


def test_assemble_checks_reality():
    with pytest.raises(ConstraintError, match="reality condition failed at k=0"):
        potential_assemble(2, [1.0, 1.0], [1j, 0, 0])


@pytest.mark.parametrize("beta_m1", [0.5 + 1j, -1j, 0j])
def test_assemble_checks_residue(beta_m1):
    with pytest.raises(ConstraintError, match="residue condition failed"):
        potential_assemble(1, [0], [beta_m1, 1j])


@pytest.mark.parametrize("K", [KMatrix(0.0, 0.0), KMatrix(1.0, -1.0), KMatrix(-0.3, 0.3)])
def test_vacuum_is_ksymmetric_for_antidiagonal_constants(K):
    assert ksym_residual(vacuum_potential(), K) < 1e-12


def test_vacuum_is_not_ksymmetric_for_equal_constants():
    assert ksym_residual(vacuum_potential(), KMatrix(1.0, 1.0)) > 0.1


def test_unknown_layout_and_split():
    layout = unknown_layout(2)
    assert len(layout) == 10
    assert layout[:2] == ["Re alpha_0", "Im alpha_0"]
    assert layout[4:6] == ["Re beta_-1", "Im beta_-1"]
    alpha, beta = split_vector(2, np.arange(10.0))
    assert np.allclose(alpha, [0 + 1j, 2 + 3j])
    assert np.allclose(beta, [4 + 5j, 6 + 7j, 8 + 9j])


def test_vector_round_trip():
    xi = potential_assemble(2, [0.1 + 0.2j, -0.1 + 0.2j], [0.5j, 0.3 - 0.1j, 0.7j])
    alpha, beta = split_vector(2, xi.to_vector())
    assert np.allclose(alpha, xi.alpha) and np.allclose(beta, xi.beta)


def test_save_and_load(tmp_path):
    K = KMatrix(0.25, -0.25)
    path = save_potential(tmp_path / "nested" / "xi.json", vacuum_potential(), K, seed=11)
    data = json.loads(path.read_text())
    assert data["degree"] == 1
    assert data["meta"]["seed"] == 11
    assert "created" in data["meta"]
    xi, K_loaded = load_potential(path)
    assert np.allclose(xi.beta, vacuum_potential().beta)
    assert K_loaded == K


def test_load_without_constants(tmp_path):
    path = save_potential(tmp_path / "xi.json", vacuum_potential())
    _, K = load_potential(path)
    assert K is None


def test_load_rejects_invalid_potential(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"degree": 1, "alpha": [[0, 0]], "beta": [[0, -1], [0, 1]]}))
    with pytest.raises(ConstraintError):
        load_potential(path)
