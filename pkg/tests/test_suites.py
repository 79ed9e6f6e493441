import numpy as np
import pytest

from isotower import suites
from isotower.calculus import P_k
from isotower.errors import UsageError
from isotower.linalg import EigenSystem, hermitian_eig, projector_rank
from isotower.report import SuiteConfig
from isotower.suites import DEGREE_BUILTINS, SUITES, builtin_degree, run_suite


def _small(**overrides):
    fields = {"d0": 2, "d1": 3, "trials": 3, "seed": 5, "group": [2]}
    fields.update(overrides)
    return SuiteConfig(**fields)


@pytest.mark.parametrize("name", sorted(SUITES))
def test_suite_passes_on_a_small_config(name):
    report = run_suite(name, _small())
    assert report.ok, [(c.id, c.witness) for c in report.failed]
    assert report.suite == name
    assert report.summary.pass_ > 0


def test_runs_are_deterministic():
    first = run_suite("calculus", _small())
    second = run_suite("calculus", _small())
    assert first.to_dict() == second.to_dict()


def test_records_are_sorted():
    report = run_suite("ktheory", _small())
    ids = [c.id for c in report.checks]
    assert ids == sorted(ids)
    assert all(i.startswith("ktheory.") for i in ids)


def test_unknown_suite():
    with pytest.raises(UsageError):
        run_suite("topology", _small())


def test_tight_tolerance_fails_the_calculus_laws():
    report = run_suite("calculus", _small(tol={"tol_eq": 1e-30}))
    assert not report.ok
    assert any(c.id.startswith("calculus.law.") for c in report.failed)


def test_tolerance_overrides_reach_the_rank_decisions(monkeypatch):
    seen = []

    def rank_suite(cfg):
        seen.append(projector_rank(P_k(np.diag([0.0, 1e-4, 1.0]), 2)))
        return []

    monkeypatch.setitem(SUITES, "rank", rank_suite)
    run_suite("rank", _small(tol={"tau_gap": 1e-3}))
    run_suite("rank", _small())
    assert seen == [1, 2]


def test_default_grid_covers_every_cell():
    report = run_suite("calculus", SuiteConfig(trials=1, seed=5))
    cells = [[d0, d0 + offset] for d0 in (2, 3, 4, 5) for offset in (0, 1, 2)]
    assert report.environment["cells"] == cells
    assert {c.id[c.id.index("["):] for c in report.checks} == {f"[{d0}x{d1}]" for d0, d1 in cells}
    assert all(c.metrics["d0"] + 2 >= c.metrics["d1"] >= c.metrics["d0"] for c in report.checks)
    assert report.ok, [(c.id, c.witness) for c in report.failed]


def test_cell_free_suites_run_once_on_the_grid():
    report = run_suite("ktheory", SuiteConfig(trials=1, seed=5, group=[2]))
    assert report.checks
    assert not any("[" in c.id for c in report.checks)


def test_courant_fischer_catches_a_shifted_spectrum(monkeypatch):
    def shifted(a):
        eig = hermitian_eig(a)
        return EigenSystem(eig.values - 1.0, eig.vectors)

    monkeypatch.setattr(suites, "hermitian_eig", shifted)
    report = run_suite("calculus", _small())
    assert "calculus.courant-fischer" in [c.id for c in report.failed]


def test_builtin_degrees():
    assert builtin_degree("reflection") == -1
    assert builtin_degree("identity", 2) == 1
    with pytest.raises(UsageError):
        builtin_degree("klein-bottle")


@pytest.mark.parametrize("name", ["g-double-prime", "f-bar-prime", "r-lift", "phi-lift"])
def test_sphere_degrees_match_the_table(name):
    _, expected = DEGREE_BUILTINS[name]
    assert builtin_degree(name, 2) == expected
