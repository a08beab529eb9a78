"""
Consistency CLI Routes
Commands for consistency verdicts, consistent-subset streams and maximal consistent subsets.
"""

import logging
import time

from command_router import CommandRouter
from consistency_service import ConsistencyVerdict
from query_context import QUERY_ARGUMENTS, QueryContext
from report_service import EXIT_NO, EXIT_UNKNOWN, EXIT_YES, QueryReport, format_subset

# Configure logging
logger = logging.getLogger(__name__)

# Create router for consistency commands
router = CommandRouter("consistency", __name__)

VERDICT_EXIT_CODES = {
    ConsistencyVerdict.CONSISTENT: EXIT_YES,
    ConsistencyVerdict.INCONSISTENT: EXIT_NO,
    ConsistencyVerdict.UNKNOWN: EXIT_UNKNOWN,
}


def _provenance(context: QueryContext, report: QueryReport) -> QueryReport:
    stats = context.consistency.stats()
    report.oracle = stats.oracle
    report.metadata["oracle_calls"] = stats.oracle_calls
    report.metadata["memo_hits"] = stats.memo_hits
    if stats.unknown_skipped:
        report.metadata["unknown_skipped"] = stats.unknown_skipped
    return report


@router.command("consistent", help="consistency verdict for a premise set", arguments=QUERY_ARGUMENTS)
def consistent(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    verdict = context.consistency.check_consistency(context.premises())
    report = QueryReport("consistent", verdict.value, VERDICT_EXIT_CODES[verdict])
    return _provenance(context, report).stamp(start_time)


@router.command("subsets", help="stream the consistent subsets of a premise set", arguments=QUERY_ARGUMENTS)
def subsets(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    lines = [
        format_subset(subset, context.signature)
        for subset in context.consistency.consistent_subsets(context.premises(), context.subset_cap())
    ]
    report = QueryReport("subsets", "ok", EXIT_YES, lines=lines, metadata={"count": len(lines)})
    return _provenance(context, report).stamp(start_time)


@router.command("mcs", help="maximal consistent subsets of a premise set", arguments=QUERY_ARGUMENTS)
def maximal_consistent_subsets(args) -> QueryReport:
    start_time = time.time()
    context = QueryContext(args)
    result = context.consistency.maximal_consistent_subsets(context.premises(), context.subset_cap())
    lines = [format_subset(subset, context.signature) for subset in result]
    report = QueryReport("mcs", "ok", EXIT_YES, lines=lines, metadata={"count": len(lines)})
    return _provenance(context, report).stamp(start_time)
