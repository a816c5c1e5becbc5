import json

import pytest

from xhermite.errors import LambdaTooLarge
from xhermite.report import FAIL, PASS, SKIPPED, VerificationReport, reports_to_json
from xhermite.verify import (
    VerifyConfig,
    all_passed,
    check_closed_form,
    check_schrodinger,
    check_spectral_propagator,
    run_all,
    verify_mehler,
    verify_xmehler,
)


def test_empty_list():
    assert run_all([]) == []


def test_non_krein_adler_refusal():
    reports = run_all([(1,)])
    by_name = {r.check_name: r for r in reports}
    assert by_name["sum_rule"].status == PASS
    assert by_name["connection_lemma"].status == PASS
    assert by_name["xmehler"].status == PASS
    for name in ("deltaV_identity", "eigenfunctions", "schrodinger", "green"):
        assert by_name[name].status == SKIPPED
        assert by_name[name].details[0]["reason"] == "skipped: non-Krein-Adler"
    assert all_passed(reports)


def test_reports_deterministic():
    a = reports_to_json(run_all([(1, 2)], suite="propagator"))
    b = reports_to_json(run_all([(1, 2)], suite="propagator"))
    assert a == b
    json.loads(a)


def test_seed_changes_points():
    a = check_closed_form((1, 2), VerifyConfig())
    b = check_closed_form((1, 2), VerifyConfig(seed=1))
    assert a.passed and b.passed
    assert a.details != b.details


def test_refinement_decreases():
    cfg = VerifyConfig()
    for rep in (check_schrodinger((2, 3), cfg), check_spectral_propagator((2, 3), cfg)):
        residuals = [d["residual"] for d in rep.details if "residual" in d]
        assert len(residuals) == 3
        assert residuals[-1] < residuals[0]
        assert rep.passed


def test_mehler_examples():
    assert verify_mehler(0.5, [(0.0, 0.0)], 60).worst_residual < 1e-12
    assert verify_mehler(0.0, [(0.3, 0.4)], 5).worst_residual < 1e-15
    assert verify_mehler(0.5, [(0.7, -0.2)], 60).worst_residual < 1e-10
    with pytest.raises(LambdaTooLarge):
        verify_mehler(0.95, [(0.0, 0.0)], 60)


def test_xmehler_examples():
    assert verify_xmehler((1, 2), 0.5, [(0.3, 0.8)], 80).worst_residual < 1e-10
    assert verify_xmehler((), 0.5, [(0.3, 0.8)], 60).worst_residual < 1e-12
    with pytest.raises(ValueError):
        verify_xmehler((1, 2), 0.5, [(0.3, 0.8)], 10)
    with pytest.raises(LambdaTooLarge):
        verify_xmehler((1, 2), 0.91, [(0.3, 0.8)], 80)


def test_tolerance_override_fails_check():
    cfg = VerifyConfig()
    cfg.tolerances["closed_form"] = 1e-30
    assert check_closed_form((1, 2), cfg).status == FAIL


def test_report_invariant():
    r = VerificationReport.numeric("x", (1, 2), 2e-3, 1e-3)
    assert r.failed
    assert VerificationReport.numeric("x", (1, 2), float("nan"), 1.0).failed
    assert r.to_json_obj()["sigma"] == [1, 2]
