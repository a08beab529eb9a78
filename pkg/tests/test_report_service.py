import time

from deduction_service import Verdict
from report_service import (
    EXIT_NO,
    EXIT_UNKNOWN,
    EXIT_YES,
    QueryReport,
    format_subset,
    render_records,
    render_report,
    render_text,
)


def test_exit_codes():
    assert QueryReport.from_verdict("deduce", Verdict.YES).exit_code == EXIT_YES
    assert QueryReport.from_verdict("deduce", Verdict.NO).exit_code == EXIT_NO
    assert QueryReport.from_verdict("deduce", Verdict.UNKNOWN).exit_code == EXIT_UNKNOWN
    assert QueryReport.from_bool("weak", False).verdict == "false"


def test_render_text():
    report = QueryReport.from_verdict(
        "paradeduce", Verdict.YES, witness="1. [p] p [premise]\n", oracle="enumerative", metadata={"support": "p"}
    )
    assert render_text(report) == "verdict: Yes\noracle: enumerative\nsupport: p\nwitness:\n1. [p] p [premise]\n"


def test_render_records():
    report = QueryReport.from_bool("entails", True, lines=["a", "b"], delegated=True)
    assert render_records(report).splitlines() == [
        "command=entails",
        "verdict=true",
        "exit_code=0",
        "delegated=true",
        "line.1=a",
        "line.2=b",
    ]
    assert render_report(report, "records") == render_records(report)
    assert render_report(report) == render_text(report)


def test_stamp_records_metrics():
    report = QueryReport.from_verdict("deduce", Verdict.NO).stamp(time.time())
    assert report.execution_time >= 0
    assert report.rss_bytes > 0
    assert "rss_bytes=" in render_records(report)
    assert render_text(report).splitlines()[-1].startswith("time: ")


def test_format_subset(fs):
    assert format_subset(fs("~p, q, p")) == "3: p, q, ~p"
