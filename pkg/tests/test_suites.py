import json

import pytest

from orbitsym import SUITE_NAMES, run_suite
from orbitsym.suites import (
    verify_graph,
    verify_infinitesimal,
    verify_iwasawa,
    verify_lagrangian,
    verify_projection,
    verify_theorem,
)


@pytest.mark.parametrize("name", SUITE_NAMES)
def test_every_suite_passes_small_runs(name, chamber3):
    reports = run_suite(chamber3, name, samples=8, seed=11)
    assert reports
    for report in reports:
        assert report.passed, f"{report.suite}: {report.max_error:.3e} > {report.tolerance:.1e}"
        assert report.passed == (report.max_error <= report.tolerance)
        assert report.max_error == max(report.sample_errors, default=0.0)


@pytest.mark.parametrize("name", ["theorem", "graph", "lagrangian-vertical"])
def test_wall_chamber_passes(name, wall3):
    for report in run_suite(wall3, name, samples=6, seed=3):
        assert report.passed


def test_zero_chamber_is_trivially_green(model2):
    chamber = model2.chamber_element([0, 0])
    for name in SUITE_NAMES:
        for report in run_suite(chamber, name, samples=3, seed=1):
            assert report.passed


def test_reports_are_deterministic(chamber2):
    first = [r.as_dict() for r in verify_theorem(chamber2, samples=5, seed=9)]
    second = [r.as_dict() for r in verify_theorem(chamber2, samples=5, seed=9)]
    assert json.dumps(first) == json.dumps(second)


def test_thread_pool_matches_serial(chamber3, monkeypatch):
    serial = [r.as_dict() for r in verify_graph(chamber3, samples=6, seed=5)]
    monkeypatch.setenv("ORBITSYM_THREADS", "4")
    pooled = [r.as_dict() for r in verify_graph(chamber3, samples=6, seed=5)]
    assert json.dumps(serial) == json.dumps(pooled)


def test_report_shape(chamber3):
    reports = verify_infinitesimal(chamber3, samples=4, seed=2)
    names = [r.suite for r in reports]
    assert names == ["infinitesimal-exact", "infinitesimal-fd"]
    payload = reports[0].as_dict()
    assert set(payload) == {
        "suite", "n", "H", "samples", "seed", "fd_step",
        "max_error", "tolerance", "pass", "samples_detail",
    }
    assert payload["n"] == 3
    assert payload["H"] == [1.0, 0.0, -1.0]
    assert payload["samples"] == 4
    assert len(payload["samples_detail"]) == 4
    assert payload["samples_detail"][0] == {
        "index": 0, "error": reports[0].sample_errors[0],
    }


def test_tolerance_overrides(chamber2, chamber3):
    loose = verify_iwasawa(chamber2, samples=3, seed=1, tol_exact=1.0)
    assert loose[0].tolerance == 1.0
    strict = verify_lagrangian(chamber3, "horizontal", samples=3, seed=1, tol_fd=1e-30)
    assert any(not r.passed for r in strict if r.suite.endswith("-std"))


def test_lagrangian_rejects_unknown_mode(chamber2):
    with pytest.raises(ValueError, match="mode"):
        verify_lagrangian(chamber2, "diagonal", samples=2, seed=1)


def test_unknown_suite_rejected(chamber2):
    with pytest.raises(ValueError, match="unknown suite"):
        run_suite(chamber2, "spectral", samples=2, seed=1)


def test_projection_reports_cover_every_check(chamber3):
    suites = [r.suite for r in verify_projection(chamber3, samples=3, seed=4)]
    assert suites == [
        "projection-welldef",
        "projection-displacement",
        "projection-roundtrip",
        "projection-linearity",
        "projection-pairing",
    ]
