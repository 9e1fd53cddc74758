"""Suite registry, pass predicate and determinism."""

import pytest

from src.cli.config import RunConfig, Tolerances
from src.cli.suite import REGISTRY, list_checks, run_suite

QUICK = RunConfig(profile="quick")


def test_registry_is_complete():
    ids = [c.test_id for c in REGISTRY]
    anchors = [c.anchor for c in REGISTRY]
    assert len(ids) >= 30
    assert len(set(ids)) == len(ids)
    assert len(set(anchors)) == len(anchors)
    assert {entry["test_id"].split(".")[0] for entry in list_checks()} == {"kmat", "pot", "spectral", "frame", "dress"}


def test_every_tolerance_key_exists():
    fields = set(Tolerances.model_fields)
    assert all(c.tol_key in fields for c in REGISTRY)


def test_same_seed_same_residuals():
    first = run_suite(QUICK, only=["kmat"]).to_json()
    second = run_suite(QUICK, only=["kmat"]).to_json()
    assert [t["residual"] for t in first["tests"]] == [t["residual"] for t in second["tests"]]
    assert first["passed"]


def test_tightened_tolerance_fails():
    config = QUICK.model_copy(update={"tolerances": Tolerances(roots_oracle=1e-300)})
    report = run_suite(config, only=["kmat.roots_companion"])
    assert not report.passed
    assert report.n_failed == 1


def test_report_echoes_tolerances():
    report = run_suite(QUICK, only=["spectral.vacuum_genus_zero"]).to_json()
    assert report["metadata"]["tolerances"] == Tolerances().model_dump()
    assert report["tests"][0]["test_id"] == "spectral.vacuum_genus_zero"


@pytest.mark.slow
def test_standard_profile_passes():
    report = run_suite(RunConfig())
    failed = [e.test_id for e in report.entries if not e.passed]
    assert not failed
