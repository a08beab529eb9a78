"""
Query reports shared by every CLI command, rendered as text or as key=value records.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import psutil

from deduction_service import Verdict
from formula_service import Formula, Signature, render_formula, sort_formulas

# Configure logging
logger = logging.getLogger(__name__)

EXIT_YES = 0
EXIT_NO = 1
EXIT_UNKNOWN = 2
EXIT_ERROR = 3

VERDICT_EXIT_CODES = {Verdict.YES: EXIT_YES, Verdict.NO: EXIT_NO, Verdict.UNKNOWN: EXIT_UNKNOWN}


@dataclass
class QueryReport:
    """Verdict, witness, provenance and timing of one command"""
    command: str
    verdict: str
    exit_code: int
    witness: Optional[str] = None
    oracle: Optional[str] = None
    delegated: bool = False
    lines: List[str] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)
    execution_time: Optional[float] = None
    cpu_seconds: Optional[float] = None
    rss_bytes: Optional[int] = None

    @classmethod
    def from_verdict(cls, command: str, verdict: Verdict, **kwargs) -> "QueryReport":
        return cls(command, verdict.value, VERDICT_EXIT_CODES[verdict], **kwargs)

    @classmethod
    def from_bool(cls, command: str, answer: bool, **kwargs) -> "QueryReport":
        return cls(command, "true" if answer else "false", EXIT_YES if answer else EXIT_NO, **kwargs)

    def stamp(self, start_time: float) -> "QueryReport":
        """Record elapsed time and process metrics"""
        process = psutil.Process()
        cpu = process.cpu_times()
        self.execution_time = time.time() - start_time
        self.cpu_seconds = cpu.user + cpu.system
        self.rss_bytes = process.memory_info().rss
        return self


def format_formulas(formulas: Iterable[Formula], signature: Optional[Signature] = None) -> str:
    return ", ".join(render_formula(f, signature) for f in sort_formulas(formulas))


def format_subset(subset: Iterable[Formula], signature: Optional[Signature] = None) -> str:
    """Subset stream line: cardinality, then the formulas in universe order"""
    subset = list(subset)
    return f"{len(subset)}: {format_formulas(subset, signature)}"


def render_text(report: QueryReport) -> str:
    out = [f"verdict: {report.verdict}"]
    if report.oracle:
        out.append(f"oracle: {report.oracle}")
    if report.delegated:
        out.append("delegated: true")
    for key, value in report.metadata.items():
        out.append(f"{key}: {value}")
    if report.witness:
        out.append("witness:")
        out.extend(report.witness.rstrip("\n").splitlines())
    out.extend(report.lines)
    if report.execution_time is not None:
        out.append(f"time: {report.execution_time:.3f}s")
    return "\n".join(out) + "\n"


def render_records(report: QueryReport) -> str:
    records = [("command", report.command), ("verdict", report.verdict), ("exit_code", report.exit_code)]
    if report.oracle:
        records.append(("oracle", report.oracle))
    records.append(("delegated", str(report.delegated).lower()))
    records += list(report.metadata.items())
    if report.witness:
        for number, line in enumerate(report.witness.rstrip("\n").splitlines(), 1):
            records.append((f"witness.{number}", line))
    for number, line in enumerate(report.lines, 1):
        records.append((f"line.{number}", line))
    if report.execution_time is not None:
        records.append(("execution_time", f"{report.execution_time:.6f}"))
    if report.cpu_seconds is not None:
        records.append(("cpu_seconds", f"{report.cpu_seconds:.3f}"))
    if report.rss_bytes is not None:
        records.append(("rss_bytes", report.rss_bytes))
    return "\n".join(f"{key}={value}" for key, value in records) + "\n"


def render_report(report: QueryReport, output_format: str = "text") -> str:
    if output_format == "records":
        return render_records(report)
    return render_text(report)
