from pytest import raises

from errors import PreconditionError
from metatheory_service import MetatheoryService, collect_process_metrics


def test_battery_passes_on_toy(toy):
    report = MetatheoryService(toy.deductions, max_premises=3, samples=100).run()
    assert report.passed
    assert report.overall_status == "pass"
    assert [claim.name for claim in report.claims][:3] == ["fact-adequacy", "lemma1", "lemma2"]
    assert all(claim.checked > 0 for claim in report.claims)
    assert report.metrics.rss_bytes > 0


def test_selected_claims(toy):
    report = MetatheoryService(toy.deductions, max_premises=2, samples=10).run(["theorem", "non-explosion"])
    assert [claim.name for claim in report.claims] == ["theorem", "non-explosion"]
    assert report.passed


def test_unknown_claim(toy):
    with raises(PreconditionError):
        MetatheoryService(toy.deductions, max_premises=1, samples=1).run(["completeness-of-everything"])


def test_schematic_system_is_rejected(classical):
    with raises(PreconditionError):
        MetatheoryService(classical.deductions)


def test_process_metrics():
    metrics = collect_process_metrics()
    assert metrics.cpu_seconds >= 0
    assert metrics.timestamp > 0


def test_paraconsequence_monotonicity_claim(toy):
    report = MetatheoryService(toy.deductions, max_premises=3, samples=1).run(["para-monotonicity"])
    assert report.passed
    # pairs A within B, |B| <= 3: sum of C(6, k) * 2^k
    assert report.claims[0].checked == 233
