import dataclasses
import json

import pytest

from qcdetector import io
from qcdetector.validation import TOLERANCES, figure_regression, run_oracle_suite


@pytest.mark.parametrize("scope", ["basis", "hamiltonian", "meanfield", "criticality", "husimi"])
def test_fast_scopes_pass(scope):
    reports = run_oracle_suite(scope)
    assert reports
    for r in reports:
        assert r.passed, f"{r.case_id}: {r.computed} vs {r.reference} (tol {r.tolerance})"


def test_unknown_scope_rejected():
    with pytest.raises(ValueError):
        run_oracle_suite("everything")
    with pytest.raises(ValueError):
        figure_regression("fig9")


def test_reports_serializable():
    reports = run_oracle_suite("basis")
    payload = json.dumps(io.to_jsonable(reports))
    parsed = json.loads(payload)
    assert parsed[0]["case_id"] == reports[0].case_id
    assert all(r.case_id in TOLERANCES for r in reports)


def test_report_deviation_fields():
    r = run_oracle_suite("meanfield")[0]
    assert r.abs_deviation == abs(r.computed - r.reference)
    assert r.rel_deviation >= 0.0
    assert dataclasses.is_dataclass(r)


@pytest.mark.slow
def test_solver_and_observable_scopes_pass():
    for scope in ("solver", "observables"):
        for r in run_oracle_suite(scope):
            assert r.passed, f"{r.case_id}: {r.computed} vs {r.reference}"


@pytest.mark.slow
@pytest.mark.parametrize("fig", ["fig2", "fig3", "fig4", "fig5", "figS1", "figS2"])
def test_figure_regressions(fig):
    for r in figure_regression(fig):
        assert r.passed, f"{r.case_id}: {r.quantity} -> {r.computed} vs {r.reference}"
